#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confsim/calculus.hpp"
#include "confsim/estimator.hpp"
#include "confsim/intensity.hpp"

namespace confsim {

// Two-sided acceptance threshold per identity; a suite of ~30 tests then has
// family-wise false-failure probability below 1e-3.
inline constexpr double kZThreshold = 4.0;
// Deliberately broken nulls must exceed this.
inline constexpr double kPowerThreshold = 6.0;
// A rejection fraction above this fails the run.
inline constexpr double kMaxRejectionFraction = 1e-3;

struct IdentityRecord {
    std::string test;
    std::string params;  // canonical parameter string, hashed on emission
    uint64_t seed = 0;
    long n = 0;
    double mean = 0;
    double std_error = 0;
    double target = 0;
    double z = 0;
    long rejections = 0;
    bool expect_fail = false;  // power checks: pass means |z| > kPowerThreshold
    bool pass = false;

    void finalize();
};

using ConfigSampler = std::function<Configuration(long)>;

struct MeckeOutcome {
    EstimatorResult lhs;
    EstimatorResult rhs;
    double z = 0;
};

// Two estimators of the Mecke identity. LHS: mean of the inner point sum.
// RHS: mean over samples of the x-integral of h(gamma + x, x) e^{-E_x}
// against sigma, by Gauss-Legendre quadrature on the support window. Both
// sides run on the same samples; the z-score comes from the per-sample
// difference. drop_energy_factor replaces e^{-E_x} by 1 (power checks).
MeckeOutcome mecke_test(const ConfigSampler& sampler, const IntensityMeasure& sigma,
                        const PairPotential& phi,
                        const std::function<double(const Configuration&, const Vec&)>& h,
                        const Window& support, long n_samples, int workers, int quad_order = 32,
                        bool drop_energy_factor = false);

// Mean of grad_v F * G + F * grad_v G + F G B_v over samples, tested against 0.
// beta, when set, is the logarithmic derivative of the intensity (sigma-case).
EstimatorResult ibp_test(const ConfigSampler& sampler, const PairPotential& phi,
                         const CylinderFunction& F, const CylinderFunction& G,
                         const VectorFieldV0& v, long n_samples, int workers,
                         const std::function<Vec(const Vec&)>& beta = nullptr,
                         long* rejections = nullptr);

// Mean of <V, grad F> + div V * F over samples, tested against 0 (free case).
EstimatorResult volume_element_test(const ConfigSampler& sampler, const std::vector<VfcTerm>& V,
                                    const CylinderFunction& F, long n_samples, int workers);

struct VerifyOptions {
    uint64_t seed = 12345;
    int workers = 1;
};

// Named suites: poisson-identities, mecke, ibp, semigroup, martingale,
// invariance, all. Throws std::invalid_argument on an unknown name.
std::vector<IdentityRecord> run_suite(const std::string& name, const VerifyOptions& opts);
std::vector<std::string> suite_names();

}  // namespace confsim

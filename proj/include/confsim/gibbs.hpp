#pragma once

#include <cstdint>
#include <vector>

#include "confsim/configuration.hpp"
#include "confsim/potential.hpp"
#include "confsim/rng.hpp"

namespace confsim {

// Finite-window grand canonical target: density proportional to
// z^n/n! * exp(-E_Lambda(gamma | boundary)). With an empty boundary andchain
// window equal to the whole box this is the torus Gibbs measure.
struct GibbsSpec {
    TorusDomain dom;
    double z = 1;
    PairPotential phi;
    Window window;
    Configuration boundary;

    GibbsSpec(const TorusDomain& d, double activity, PairPotential potential, const Window& w,
              Configuration bc);
};

struct McmcParams {
    double p_birth = 0.35;
    double p_death = 0.35;
    double p_move = 0.30;
    double move_scale = 0.25;
    long burn_in = 100000;
    long thinning = 1000;
    long n_samples = 1000;
    uint64_t seed = 0;
    bool force_accept = false;  // debug switch, breaks detailed balance on purpose

    void validate(bool canonical = false) const;
};

struct McmcDiagnostics {
    long proposals = 0;
    long accepted = 0;
};

// Birth-death-move Metropolis-Hastings chain targeting the grand canonical
// specification. Acceptance ratios use only energy differences, so the
// normalizer never appears. Returned samples all have finite energy.
std::vector<Configuration> gc_sample(const GibbsSpec& spec, const McmcParams& params, Rng& rng,
                                     McmcDiagnostics* diag = nullptr);

// Move-only chain at fixed particle number n, targeting exp(-E) on Lambda^n.
std::vector<Configuration> canonical_sample(const GibbsSpec& spec, long n, const McmcParams& params,
                                            Rng& rng, McmcDiagnostics* diag = nullptr);

struct CorrelationEstimate {
    double intensity = 0;
    double intensity_se = 0;
    std::vector<double> bin_lo, bin_hi;
    std::vector<double> g2, g2_se;
    std::vector<bool> empty_bin;
    double xi_hat = 0;  // Ruelle-bound diagnostic, no pass/fail semantics
};

// Intensity and radial pair correlation, normalized by the Poisson pair-count
// reference. Bin radii must stay below L/2.
CorrelationEstimate estimate_correlations(const std::vector<Configuration>& samples,
                                          const Window& window, int n_bins, double r_max);

}  // namespace confsim

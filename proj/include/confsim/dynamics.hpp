#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "confsim/calculus.hpp"
#include "confsim/configuration.hpp"
#include "confsim/estimator.hpp"
#include "confsim/gibbs.hpp"
#include "confsim/intensity.hpp"
#include "confsim/rng.hpp"

namespace confsim {

// The base generator is the full Laplacian (not half), so Brownian increments
// carry per-coordinate variance 2*dt: scale defaults to sqrt(2).
struct TrajectoryParams {
    double dt = 1e-3;
    long n_steps = 100;
    double diffusion_scale = 1.4142135623730951;
    uint64_t seed = 0;

    double horizon() const { return dt * static_cast<double>(n_steps); }
    void validate() const;
};

struct Trajectory {
    std::vector<std::pair<double, Configuration>> frames;
};

// Independent Gaussian increments, wrapped to the torus. Point count preserved.
Configuration free_step(const Configuration& gamma, double dt, Rng& rng,
                        double diffusion_scale = 1.4142135623730951);

// Euler-Maruyama step of dX = -grad E dt + sqrt(2) dW with the drift evaluated
// at the pre-step configuration. A proposed step landing inside a hard core is
// redone as two half steps, at most 20 levels deep.
Configuration interacting_step(const PairPotential& phi, const Configuration& gamma, double dt,
                               Rng& rng, int max_halvings = 20);

Trajectory simulate_free(const Configuration& start, const TrajectoryParams& params, Rng& rng,
                         long save_every = 1);
Trajectory simulate_interacting(const PairPotential& phi, const Configuration& start,
                                const TrajectoryParams& params, Rng& rng, long save_every = 1);

struct LaplaceFunctionalResult {
    EstimatorResult lhs;          // system-side Monte Carlo
    double rhs_value = 0;         // from the single-particle Monte Carlo
    double rhs_error = 0;
    double z_score = 0;           // (lhs - rhs) / pooled error
};

// Finite-dimensional Laplace functional of the free particle system started
// from a (mixed-)Poisson measure, against the single-particle heat-semigroup
// expression. Fields must take values in (-1, 0].
LaplaceFunctionalResult laplace_functional_test(const MixingLaw& mixing,
                                                const std::vector<ScalarField>& fields,
                                                const std::vector<double>& times,
                                                const TorusDomain& dom, long n_system,
                                                long n_single, uint64_t seed);

struct MartingaleResult {
    EstimatorResult coarse;  // statistic at dt
    EstimatorResult fine;    // statistic at dt/2
    double consistency_z = 0;
    long rejected_paths = 0;
};

// Mean of F(X_T) - F(X_0) - integral of LF along the path (trapezoid on the
// step grid), run at dt and dt/2. L is the free Laplacian when phi is zero,
// the interacting generator otherwise.
MartingaleResult martingale_test(const PairPotential& phi, const CylinderFunction& F,
                                 const std::function<Configuration(Rng&)>& start_law, double horizon,
                                 double dt, long n_paths, uint64_t seed);

struct InvarianceReport {
    EstimatorResult energy_before;
    EstimatorResult energy_after;
    double energy_z = 0;
    std::vector<double> bin_z;  // per-bin z of the pair histogram difference
    double max_abs_bin_z = 0;
    bool pass = false;
};

// Evolves Gibbs samples by the interacting dynamics and compares mean energy
// and pair-distance histograms before and after.
InvarianceReport invariance_test(const PairPotential& phi, std::vector<Configuration> samples,
                                 double horizon, double dt, int n_bins, double r_max,
                                 uint64_t seed, double z_threshold = 4.0);

}  // namespace confsim

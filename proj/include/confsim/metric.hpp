#pragma once

#include <vector>

#include "confsim/configuration.hpp"
#include "confsim/fields.hpp"

namespace confsim {

struct MatchingResult {
    double cost = 0;                 // +inf across unequal cardinalities
    std::vector<size_t> assignment;  // index into omega for each point of gamma (empty if inf)

    bool finite() const;
};

// Exact minimum-cost perfect matching on squared torus distances (assignment
// algorithm). Cost is the square root of the optimal total; the per-pair
// squared distances are summed in sorted order so the value is symmetric in
// the arguments bit for bit.
MatchingResult rho(const Configuration& gamma, const Configuration& omega);

// inf over a finite list standing in for the paper's set infimum.
double rho_to_set(const Configuration& gamma, const std::vector<Configuration>& set);

// Minimum-cost assignment for a dense square cost matrix; exposed for oracles.
std::vector<size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

struct LipschitzReport {
    bool pass = true;
    double lip_constant = 0;
    size_t checked = 0;
    // first violating pair, if any
    long witness = -1;
    double lhs = 0, bound = 0;
};

// Checks |<f,gamma> - <f,omega>| <= Lip(f) sqrt(n) rho(gamma, omega) over the
// given equal-cardinality pairs. Lip(f) is a grid supremum of |grad f|,
// inflated by 1%.
LipschitzReport lipschitz_certificate(const ScalarField& f,
                                      const std::vector<std::pair<Configuration, Configuration>>& pairs,
                                      int grid_per_axis = 64);

}  // namespace confsim

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace confsim {

double normal_cdf(double x);

// Regularized upper incomplete gamma Q(a, x); used for chi-square p-values.
double gamma_q(double a, double x);

double poisson_pmf(long k, double lambda);

struct ChiSquareResult {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
};

// Goodness of fit of observed integer counts against Poisson(lambda).
// Tail bins are merged until every expected count is at least min_expected.
ChiSquareResult chi_square_poisson(const std::vector<long>& counts, double lambda,
                                   double min_expected = 5.0);

// Generic chi-square against given bin probabilities (must sum to ~1).
ChiSquareResult chi_square_gof(const std::vector<long>& observed, const std::vector<double>& probs,
                               double min_expected = 5.0);

struct KsResult {
    double statistic = 0;
    double p_value = 1;
};

// One-sample Kolmogorov-Smirnov against a cdf given as callable on sorted data.
KsResult ks_test(std::vector<double> data, const std::function<double(double)>& cdf);

}  // namespace confsim

#include "confsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace confsim {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Series representation of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double poisson_pmf(long k, double lambda) {
    if (k < 0) return 0;
    if (lambda == 0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

ChiSquareResult chi_square_gof(const std::vector<long>& observed, const std::vector<double>& probs,
                               double min_expected) {
    if (observed.size() != probs.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
    long n = 0;
    for (long o : observed) n += o;
    if (n == 0) throw std::invalid_argument("chi_square_gof: no observations");

    // Merge adjacent cells until each expected count reaches the floor.
    std::vector<double> exp_merged;
    std::vector<long> obs_merged;
    double e_acc = 0;
    long o_acc = 0;
    for (size_t i = 0; i < probs.size(); ++i) {
        e_acc += probs[i] * static_cast<double>(n);
        o_acc += observed[i];
        if (e_acc >= min_expected) {
            exp_merged.push_back(e_acc);
            obs_merged.push_back(o_acc);
            e_acc = 0;
            o_acc = 0;
        }
    }
    if (e_acc > 0 || o_acc > 0) {
        if (!exp_merged.empty()) {
            exp_merged.back() += e_acc;
            obs_merged.back() += o_acc;
        } else {
            exp_merged.push_back(e_acc);
            obs_merged.push_back(o_acc);
        }
    }

    ChiSquareResult r;
    if (exp_merged.size() < 2) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    for (size_t i = 0; i < exp_merged.size(); ++i) {
        double d = static_cast<double>(obs_merged[i]) - exp_merged[i];
        r.statistic += d * d / exp_merged[i];
    }
    r.dof = static_cast<int>(exp_merged.size()) - 1;
    r.p_value = gamma_q(0.5 * r.dof, 0.5 * r.statistic);
    return r;
}

ChiSquareResult chi_square_poisson(const std::vector<long>& counts, double lambda, double min_expected) {
    long kmax = 0;
    for (long c : counts) kmax = std::max(kmax, c);
    // Extend bins well past the data; the final cell absorbs the upper tail.
    long top = kmax + 1;
    std::vector<long> observed(static_cast<size_t>(top) + 1, 0);
    for (long c : counts) ++observed[static_cast<size_t>(c)];
    std::vector<double> probs(static_cast<size_t>(top) + 1, 0.0);
    double acc = 0;
    for (long k = 0; k < top; ++k) {
        probs[static_cast<size_t>(k)] = poisson_pmf(k, lambda);
        acc += probs[static_cast<size_t>(k)];
    }
    probs[static_cast<size_t>(top)] = std::max(0.0, 1.0 - acc);
    return chi_square_gof(observed, probs, min_expected);
}

KsResult ks_test(std::vector<double> data, const std::function<double(double)>& cdf) {
    if (data.empty()) throw std::invalid_argument("ks_test: no data");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0;
    for (size_t i = 0; i < data.size(); ++i) {
        double f = cdf(data[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    // Asymptotic Kolmogorov distribution with the usual finite-n correction.
    double sqrt_n = std::sqrt(n);
    double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    double p = 0;
    double sign = 1;
    for (int j = 1; j <= 100; ++j) {
        double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        p += term;
        sign = -sign;
        if (std::abs(term) < 1e-12) break;
    }
    return {d, std::clamp(2.0 * p, 0.0, 1.0)};
}

}  // namespace confsim

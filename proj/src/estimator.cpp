#include "confsim/estimator.hpp"

namespace confsim {

double z_difference(const EstimatorResult& a, const EstimatorResult& b) {
    double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    double diff = a.mean - b.mean;
    if (se == 0) return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / se;
}

EstimatorResult aggregate(const std::vector<EstimatorResult>& results) {
    if (results.empty()) throw std::invalid_argument("aggregate: empty result list");
    const auto& target = results.front().target;
    for (const auto& r : results)
        if (r.target != target) throw std::invalid_argument("aggregate: mismatched targets");

    // Reconstruct per-shard sums of squared deviations from n and std_error,
    // then do the exact pairwise merge in list order.
    int64_t n = 0;
    double mean = 0, m2 = 0;
    for (const auto& r : results) {
        if (r.n_samples <= 0) continue;
        double nB = static_cast<double>(r.n_samples);
        double m2B = r.std_error * r.std_error * nB * nB;
        if (n == 0) {
            n = r.n_samples;
            mean = r.mean;
            m2 = m2B;
            continue;
        }
        double nA = static_cast<double>(n);
        double total = nA + nB;
        double delta = r.mean - mean;
        mean += delta * (nB / total);
        m2 += m2B + delta * delta * (nA * nB / total);
        n += r.n_samples;
    }
    EstimatorResult out;
    out.n_samples = n;
    out.mean = mean;
    out.std_error = n > 0 ? std::sqrt(m2) / static_cast<double>(n) : 0.0;
    out.target = target;
    return out;
}

}  // namespace confsim

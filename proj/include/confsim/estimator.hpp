#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace confsim {

// Streaming mean / sum-of-squared-deviations accumulator (Welford). Population
// variance is used throughout so that merges reproduce an unsharded run exactly
// up to floating-point reassociation.
class RunningStat {
public:
    void add(double x) {
        ++n_;
        double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningStat& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        double nA = static_cast<double>(n_), nB = static_cast<double>(o.n_);
        double delta = o.mean_ - mean_;
        double n = nA + nB;
        mean_ += delta * (nB / n);
        m2_ += o.m2_ + delta * delta * (nA * nB / n);
        n_ += o.n_;
    }

    int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }
    double std_error() const { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

private:
    int64_t n_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

struct EstimatorResult {
    int64_t n_samples = 0;
    double mean = 0;
    double std_error = 0;
    std::optional<double> target;

    double z_score() const {
        if (!target) throw std::logic_error("EstimatorResult: no target set");
        if (std_error == 0) return mean == *target ? 0.0 : std::numeric_limits<double>::infinity();
        return (mean - *target) / std_error;
    }

    static EstimatorResult from(const RunningStat& s, std::optional<double> target = std::nullopt) {
        return {s.count(), s.mean(), s.std_error(), target};
    }
};

// z-score of the difference of two independent estimates, errors pooled.
double z_difference(const EstimatorResult& a, const EstimatorResult& b);

// Pooled estimate over shards of one experiment. Sample-count weighting with the
// exact between-shard variance term, so pooling shards of a run reproduces the
// unsharded mean and standard error up to reassociation. All results must share
// the same target (or all have none); throws on an empty list.
EstimatorResult aggregate(const std::vector<EstimatorResult>& results);

}  // namespace confsim

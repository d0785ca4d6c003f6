#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <stdexcept>

#include "confsim/domain.hpp"

namespace confsim {

// Philox4x32-10 counter-based generator. A stream is keyed by (seed, stream id),
// so worker streams are reproducible independent of scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)}, stream_(stream) {}

    uint64_t seed_lo_hi() const { return key_[0] | (static_cast<uint64_t>(key_[1]) << 32); }
    uint64_t stream_id() const { return stream_; }

    uint32_t next_u32() {
        if (block_pos_ == 4) refill();
        return block_[block_pos_++];
    }

    uint64_t next_u64() {
        uint64_t lo = next_u32();
        uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    size_t uniform_index(size_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: empty range");
        // rejection keeps the draw exactly uniform
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t u;
        do { u = next_u64(); } while (u >= limit);
        return static_cast<size_t>(u % n);
    }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do { u1 = uniform(); } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Vec normal_vec(int d, double scale = 1.0) {
        Vec v{};
        for (int i = 0; i < d; ++i) v[i] = scale * normal();
        return v;
    }

    Vec uniform_in(const Window& w) {
        Vec v{};
        for (int i = 0; i < w.dim; ++i) v[i] = uniform(w.lower[i], w.upper[i]);
        return v;
    }

    // Exact Poisson sampling: Knuth's product method in chunks (Poisson additivity).
    long poisson(double lambda) {
        if (!(lambda >= 0) || !std::isfinite(lambda)) throw std::invalid_argument("poisson: bad rate");
        long total = 0;
        while (lambda > 60.0) {
            total += poisson_knuth(60.0);
            lambda -= 60.0;
        }
        return total + poisson_knuth(lambda);
    }

private:
    static constexpr uint32_t kM0 = 0xD2511F53u;
    static constexpr uint32_t kM1 = 0xCD9E8D57u;
    static constexpr uint32_t kW0 = 0x9E3779B9u;
    static constexpr uint32_t kW1 = 0xBB67AE85u;

    std::array<uint32_t, 2> key_;
    uint64_t stream_;
    uint64_t counter_ = 0;
    std::array<uint32_t, 4> block_{};
    int block_pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0;

    static void round_once(std::array<uint32_t, 4>& x, const std::array<uint32_t, 2>& k) {
        uint64_t p0 = static_cast<uint64_t>(kM0) * x[0];
        uint64_t p1 = static_cast<uint64_t>(kM1) * x[2];
        uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
        uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
        x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    }

    void refill() {
        std::array<uint32_t, 4> x = {
            static_cast<uint32_t>(counter_), static_cast<uint32_t>(counter_ >> 32),
            static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)};
        std::array<uint32_t, 2> k = key_;
        for (int r = 0; r < 10; ++r) {
            round_once(x, k);
            k[0] += kW0;
            k[1] += kW1;
        }
        block_ = x;
        block_pos_ = 0;
        ++counter_;
    }

    long poisson_knuth(double lambda) {
        if (lambda <= 0) return 0;
        const double threshold = std::exp(-lambda);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > threshold);
        return k - 1;
    }
};

}  // namespace confsim

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "confsim/domain.hpp"

namespace confsim {

// A finite point configuration. Point order is an implementation artifact;
// the semantics are those of the multiset of points. Coordinates are stored
// flat (d per point).
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(const TorusDomain& dom) : dom_(dom) {}
    Configuration(const TorusDomain& dom, std::vector<Vec> pts) : dom_(dom) {
        coords_.reserve(pts.size() * static_cast<size_t>(dom.d));
        for (const auto& p : pts) push_back_unchecked(p);
    }

    const TorusDomain& domain() const { return dom_; }
    size_t size() const { return dom_.d == 0 ? 0 : coords_.size() / static_cast<size_t>(dom_.d); }
    bool empty() const { return coords_.empty(); }

    Vec point(size_t i) const {
        Vec v{};
        const size_t off = i * static_cast<size_t>(dom_.d);
        for (int k = 0; k < dom_.d; ++k) v[k] = coords_[off + static_cast<size_t>(k)];
        return v;
    }

    void set_point(size_t i, const Vec& p) {
        const size_t off = i * static_cast<size_t>(dom_.d);
        for (int k = 0; k < dom_.d; ++k) coords_[off + static_cast<size_t>(k)] = p[k];
    }

    const std::vector<double>& raw_coords() const { return coords_; }

    // Multiset append; the point must already lie in [0, L)^d.
    void push_back_unchecked(const Vec& p) {
        for (int k = 0; k < dom_.d; ++k) coords_.push_back(p[k]);
    }

    void pop_back_unchecked() {
        coords_.resize(coords_.size() - static_cast<size_t>(dom_.d));
    }

private:
    TorusDomain dom_;
    std::vector<double> coords_;
};

// <f, gamma> = sum of f over the points. Throws on a non-finite value.
double pair_sum(const std::function<double(const Vec&)>& f, const Configuration& gamma);

// Number of points inside the window (closed below, open above).
size_t count_in(const Window& box, const Configuration& gamma);

// Points of gamma inside the window, as a new configuration.
Configuration restrict_to(const Configuration& gamma, const Window& box);

// Multiset add/remove. remove_point throws std::out_of_range on a bad index.
Configuration add_point(const Configuration& gamma, const Vec& x);
Configuration remove_point(const Configuration& gamma, size_t index);

// All points pairwise distinct (bitwise).
bool is_simple(const Configuration& gamma);

// Multiset equality at exact bit equality of coordinates.
bool multiset_equal(const Configuration& a, const Configuration& b);

}  // namespace confsim

#include "confsim/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace confsim {

double pair_sum(const std::function<double(const Vec&)>& f, const Configuration& gamma) {
    double s = 0;
    for (size_t i = 0; i < gamma.size(); ++i) {
        double v = f(gamma.point(i));
        if (!std::isfinite(v)) throw std::invalid_argument("pair_sum: non-finite field value at a point");
        s += v;
    }
    return s;
}

size_t count_in(const Window& box, const Configuration& gamma) {
    size_t n = 0;
    for (size_t i = 0; i < gamma.size(); ++i)
        if (box.contains(gamma.point(i))) ++n;
    return n;
}

Configuration restrict_to(const Configuration& gamma, const Window& box) {
    Configuration out(gamma.domain());
    for (size_t i = 0; i < gamma.size(); ++i) {
        Vec p = gamma.point(i);
        if (box.contains(p)) out.push_back_unchecked(p);
    }
    return out;
}

Configuration add_point(const Configuration& gamma, const Vec& x) {
    Configuration out = gamma;
    out.push_back_unchecked(gamma.domain().wrap(x));
    return out;
}

Configuration remove_point(const Configuration& gamma, size_t index) {
    if (index >= gamma.size()) throw std::out_of_range("remove_point: index out of range");
    Configuration out(gamma.domain());
    for (size_t i = 0; i < gamma.size(); ++i)
        if (i != index) out.push_back_unchecked(gamma.point(i));
    return out;
}

namespace {

std::vector<Vec> sorted_points(const Configuration& g) {
    std::vector<Vec> pts;
    pts.reserve(g.size());
    for (size_t i = 0; i < g.size(); ++i) pts.push_back(g.point(i));
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a.c < b.c; });
    return pts;
}

}  // namespace

bool is_simple(const Configuration& gamma) {
    auto pts = sorted_points(gamma);
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].c == pts[i - 1].c) return false;
    return true;
}

bool multiset_equal(const Configuration& a, const Configuration& b) {
    if (!(a.domain() == b.domain()) || a.size() != b.size()) return false;
    return sorted_points(a) == sorted_points(b);
}

}  // namespace confsim

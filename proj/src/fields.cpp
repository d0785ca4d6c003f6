#include "confsim/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace confsim {

BumpFunction::BumpFunction(const TorusDomain& dom, const Vec& c, double r, double a)
    : center(c), radius(r), amplitude(a) {
    if (!(r > 0)) throw std::invalid_argument("BumpFunction: radius must be positive");
    if (!(r < 0.5 * dom.L)) throw std::invalid_argument("BumpFunction: support must fit in a half box");
}

namespace {

// h(u) = exp(-1/(1-u)) on [0,1); h' = -w^2 h, h'' = w^3 (w-2) h with w = 1/(1-u).
inline double bump_h(double u) { return std::exp(-1.0 / (1.0 - u)); }

}  // namespace

double BumpFunction::value(const TorusDomain& dom, const Vec& x) const {
    double u = dom.distance2(x, center) / (radius * radius);
    if (u >= 1.0) return 0.0;
    return amplitude * bump_h(u);
}

Vec BumpFunction::gradient(const TorusDomain& dom, const Vec& x) const {
    Vec disp = dom.displacement(x, center);
    double u = norm2(disp) / (radius * radius);
    if (u >= 1.0) return Vec{};
    double w = 1.0 / (1.0 - u);
    double dh = -w * w * bump_h(u);  // dh/du
    return (amplitude * dh * 2.0 / (radius * radius)) * disp;
}

double BumpFunction::laplacian(const TorusDomain& dom, const Vec& x) const {
    double u = dom.distance2(x, center) / (radius * radius);
    if (u >= 1.0) return 0.0;
    double w = 1.0 / (1.0 - u);
    double h = bump_h(u);
    double dh = -w * w * h;
    double d2h = w * w * w * (w - 2.0) * h;
    double r2 = radius * radius;
    return amplitude * (d2h * 4.0 * u / r2 + dh * 2.0 * dom.d / r2);
}

double ScalarField::value(const Vec& x) const {
    double s = constant_;
    for (const auto& b : bumps_) s += b.value(dom_, x);
    return s;
}

Vec ScalarField::gradient(const Vec& x) const {
    Vec g{};
    for (const auto& b : bumps_) g += b.gradient(dom_, x);
    return g;
}

double ScalarField::laplacian(const Vec& x) const {
    double s = 0;
    for (const auto& b : bumps_) s += b.laplacian(dom_, x);
    return s;
}

namespace {

template <typename Fn>
void for_each_grid_point(const TorusDomain& dom, int per_axis, Fn&& fn) {
    std::vector<int> idx(static_cast<size_t>(dom.d), 0);
    const double h = dom.L / per_axis;
    Vec x{};
    while (true) {
        for (int a = 0; a < dom.d; ++a) x[a] = (idx[static_cast<size_t>(a)] + 0.5) * h;
        fn(x);
        int a = 0;
        for (; a < dom.d; ++a) {
            if (++idx[static_cast<size_t>(a)] < per_axis) break;
            idx[static_cast<size_t>(a)] = 0;
        }
        if (a == dom.d) break;
    }
}

}  // namespace

double ScalarField::sup_abs_on_grid(int per_axis) const {
    double m = 0;
    for_each_grid_point(dom_, per_axis, [&](const Vec& x) { m = std::max(m, std::abs(value(x))); });
    return m;
}

double ScalarField::sup_grad_norm_on_grid(int per_axis) const {
    double m = 0;
    for_each_grid_point(dom_, per_axis, [&](const Vec& x) { m = std::max(m, norm(gradient(x))); });
    return m;
}

ScalarField ScalarField::scaled(double s) const {
    ScalarField out(dom_, constant_ * s);
    for (const auto& b : bumps_) out.add_bump(b.center, b.radius, b.amplitude * s);
    return out;
}

ScalarField ScalarField::plus(const ScalarField& o) const {
    ScalarField out(dom_, constant_ + o.constant_);
    for (const auto& b : bumps_) out.add_bump(b.center, b.radius, b.amplitude);
    for (const auto& b : o.bumps_) out.add_bump(b.center, b.radius, b.amplitude);
    return out;
}

void VectorFieldV0::add_axis_component(int axis, const ScalarField& f) {
    if (axis < 0 || axis >= dom_.d) throw std::invalid_argument("VectorFieldV0: bad axis");
    if (f.constant_term() != 0.0)
        throw std::invalid_argument("VectorFieldV0: components must be compactly supported");
    axis_terms_.emplace_back(axis, f);
}

void VectorFieldV0::add_gradient_term(const ScalarField& potential) {
    gradient_terms_.push_back(potential);
}

Vec VectorFieldV0::value(const Vec& x) const {
    Vec v{};
    for (const auto& [axis, f] : axis_terms_) v[axis] += f.value(x);
    for (const auto& p : gradient_terms_) v += p.gradient(x);
    return v;
}

double VectorFieldV0::divergence(const Vec& x) const {
    double s = 0;
    for (const auto& [axis, f] : axis_terms_) s += f.gradient(x)[axis];
    for (const auto& p : gradient_terms_) s += p.laplacian(x);
    return s;
}

VectorFieldV0 VectorFieldV0::scaled(double s) const {
    VectorFieldV0 out(dom_);
    for (const auto& [axis, f] : axis_terms_) out.axis_terms_.emplace_back(axis, f.scaled(s));
    for (const auto& p : gradient_terms_) out.gradient_terms_.push_back(p.scaled(s));
    return out;
}

VectorFieldV0 VectorFieldV0::plus(const VectorFieldV0& o) const {
    VectorFieldV0 out = *this;
    for (const auto& t : o.axis_terms_) out.axis_terms_.push_back(t);
    for (const auto& p : o.gradient_terms_) out.gradient_terms_.push_back(p);
    return out;
}

}  // namespace confsim

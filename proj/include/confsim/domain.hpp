#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace confsim {

// Dimensions are runtime values but bounded, so points live in fixed-size
// arrays with unused components pinned to zero.
inline constexpr int kMaxDim = 4;

struct Vec {
    std::array<double, kMaxDim> c{};

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < kMaxDim; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < kMaxDim; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < kMaxDim; ++i) c[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend bool operator==(const Vec& a, const Vec& b) { return a.c == b.c; }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < kMaxDim; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline double norm2(const Vec& v) { return dot(v, v); }
inline double norm(const Vec& v) { return std::sqrt(norm2(v)); }

// Flat periodic box [0,L)^d with the Lebesgue volume measure.
struct TorusDomain {
    int d = 1;
    double L = 1.0;

    TorusDomain() = default;
    TorusDomain(int dim, double side) : d(dim), L(side) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("TorusDomain: dimension out of range");
        if (!(L > 0) || !std::isfinite(L)) throw std::invalid_argument("TorusDomain: side length must be positive");
    }

    double volume() const { return std::pow(L, d); }

    // Reduce each coordinate modulo L into [0, L).
    Vec wrap(const Vec& raw) const {
        Vec out{};
        for (int i = 0; i < d; ++i) {
            double x = raw[i];
            if (!std::isfinite(x)) throw std::invalid_argument("wrap: non-finite coordinate");
            double w = x - std::floor(x / L) * L;
            if (w >= L) w -= L;  // guards against floor rounding at the seam
            if (w < 0) w = 0;
            out[i] = w;
        }
        return out;
    }

    // Minimal-image vector v with wrap(y + v) = x, components in [-L/2, L/2).
    // nearbyint keeps the reduction odd in (x - y), so distance(x, y) and
    // distance(y, x) agree bit for bit away from ties.
    Vec displacement(const Vec& x, const Vec& y) const {
        Vec out{};
        const double half = 0.5 * L;
        for (int i = 0; i < d; ++i) {
            double u = x[i] - y[i];
            u -= L * std::nearbyint(u / L);
            if (u >= half) u -= L;  // ties at +L/2 go to -L/2
            else if (u < -half) u += L;
            out[i] = u;
        }
        return out;
    }

    double distance(const Vec& x, const Vec& y) const { return norm(displacement(x, y)); }
    double distance2(const Vec& x, const Vec& y) const { return norm2(displacement(x, y)); }

    bool operator==(const TorusDomain& o) const { return d == o.d && L == o.L; }
};

// Axis-aligned box, closed below and open above in each axis.
struct Window {
    int dim = 1;
    Vec lower{};
    Vec upper{};

    Window() = default;
    Window(int d, const Vec& lo, const Vec& hi) : dim(d), lower(lo), upper(hi) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("Window: dimension out of range");
        for (int i = 0; i < d; ++i)
            if (!(lo[i] < hi[i])) throw std::invalid_argument("Window: empty extent on axis " + std::to_string(i));
    }

    static Window whole_box(const TorusDomain& dom) {
        Vec hi{};
        for (int i = 0; i < dom.d; ++i) hi[i] = dom.L;
        return Window(dom.d, Vec{}, hi);
    }

    bool contains(const Vec& x) const {
        for (int i = 0; i < dim; ++i)
            if (x[i] < lower[i] || x[i] >= upper[i]) return false;
        return true;
    }

    double volume() const {
        double v = 1;
        for (int i = 0; i < dim; ++i) v *= upper[i] - lower[i];
        return v;
    }

    double side(int axis) const { return upper[axis] - lower[axis]; }

    // Validity inside a torus box: 0 <= lower < upper <= L.
    void validate_in(const TorusDomain& dom) const {
        if (dim != dom.d) throw std::invalid_argument("Window: dimension mismatch with domain");
        for (int i = 0; i < dim; ++i)
            if (lower[i] < 0 || upper[i] > dom.L)
                throw std::invalid_argument("Window: not contained in the box");
    }

    Window intersect(const Window& o) const {
        Vec lo{}, hi{};
        for (int i = 0; i < dim; ++i) {
            lo[i] = std::max(lower[i], o.lower[i]);
            hi[i] = std::min(upper[i], o.upper[i]);
            if (!(lo[i] < hi[i])) throw std::invalid_argument("Window: empty intersection");
        }
        return Window(dim, lo, hi);
    }
};

}  // namespace confsim

#include "confsim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace confsim {

PairPotential PairPotential::zero() { return PairPotential(); }

PairPotential PairPotential::hard_core(double R) {
    if (!(R > 0)) throw std::invalid_argument("hard_core: radius must be positive");
    PairPotential p;
    p.kind_ = PotentialKind::HardCore;
    p.hc_radius_ = R;
    p.r_cut_ = R;
    return p;
}

PairPotential PairPotential::lennard_jones(double a, double b, double r_cut, double taper_width) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("lennard_jones: a, b must be positive");
    if (!(r_cut > 0)) throw std::invalid_argument("lennard_jones: r_cut must be positive");
    if (taper_width < 0 || taper_width > r_cut)
        throw std::invalid_argument("lennard_jones: bad taper width");
    PairPotential p;
    p.kind_ = PotentialKind::LennardJones;
    p.lj_a_ = a;
    p.lj_b_ = b;
    p.r_cut_ = r_cut;
    p.taper_width_ = taper_width;
    return p;
}

PairPotential PairPotential::tabulated(std::vector<double> radii, std::vector<double> values,
                                       std::vector<double> derivs, double r_cut) {
    if (radii.size() < 2 || radii.size() != values.size() || radii.size() != derivs.size())
        throw std::invalid_argument("tabulated: inconsistent grid");
    for (size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("tabulated: radii not increasing");
    if (!(radii.front() >= 0) || !(r_cut >= radii.back()))
        throw std::invalid_argument("tabulated: grid outside [0, r_cut]");
    PairPotential p;
    p.kind_ = PotentialKind::Tabulated;
    p.tab_r_ = std::move(radii);
    p.tab_v_ = std::move(values);
    p.tab_dv_ = std::move(derivs);
    p.r_cut_ = r_cut;
    p.hc_radius_ = p.tab_r_.front();
    return p;
}

PairPotential PairPotential::tabulated_from_stream(std::istream& in) {
    size_t n = 0;
    double r_cut = 0;
    if (!(in >> n >> r_cut)) throw std::runtime_error("tabulated potential: bad header");
    std::vector<double> r(n), v(n), dv(n);
    for (size_t i = 0; i < n; ++i)
        if (!(in >> r[i] >> v[i] >> dv[i]))
            throw std::runtime_error("tabulated potential: truncated table");
    return tabulated(std::move(r), std::move(v), std::move(dv), r_cut);
}

double PairPotential::hard_core_radius() const { return hc_radius_; }

double PairPotential::lj_raw(double r) const {
    if (r <= 0) return kInf;
    double inv2 = 1.0 / (r * r);
    double inv6 = inv2 * inv2 * inv2;
    return lj_a_ * inv6 * inv6 - lj_b_ * inv6;
}

double PairPotential::lj_raw_derivative(double r) const {
    double inv = 1.0 / r;
    double inv2 = inv * inv;
    double inv6 = inv2 * inv2 * inv2;
    return (-12.0 * lj_a_ * inv6 * inv6 + 6.0 * lj_b_ * inv6) * inv;
}

// Quintic smoothstep cutoff: 1 on [0, r_cut - w], 0 beyond r_cut, C^2 at both ends.
double PairPotential::taper(double r) const {
    if (taper_width_ == 0) return r < r_cut_ ? 1.0 : 0.0;
    double s = (r - (r_cut_ - taper_width_)) / taper_width_;
    if (s <= 0) return 1.0;
    if (s >= 1) return 0.0;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double PairPotential::taper_derivative(double r) const {
    if (taper_width_ == 0) return 0.0;
    double s = (r - (r_cut_ - taper_width_)) / taper_width_;
    if (s <= 0 || s >= 1) return 0.0;
    return -30.0 * s * s * (1.0 - s) * (1.0 - s) / taper_width_;
}

double PairPotential::tab_eval(double r, bool derivative) const {
    // Hermite cubic on the bracketing segment.
    auto it = std::upper_bound(tab_r_.begin(), tab_r_.end(), r);
    size_t hi = static_cast<size_t>(it - tab_r_.begin());
    if (hi == 0) return derivative ? 0.0 : kInf;
    if (hi == tab_r_.size()) hi = tab_r_.size() - 1;
    size_t lo = hi - 1;
    double h = tab_r_[hi] - tab_r_[lo];
    double t = (r - tab_r_[lo]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    if (!derivative)
        return h00 * tab_v_[lo] + h * h10 * tab_dv_[lo] + h01 * tab_v_[hi] + h * h11 * tab_dv_[hi];
    double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
    double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    return d00 * tab_v_[lo] + d10 * tab_dv_[lo] + d01 * tab_v_[hi] + d11 * tab_dv_[hi];
}

double PairPotential::eval(double r) const {
    if (r < 0) throw std::invalid_argument("PairPotential::eval: negative radius");
    switch (kind_) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::HardCore: return r < hc_radius_ ? kInf : 0.0;
        case PotentialKind::LennardJones: {
            if (r >= r_cut_) return 0.0;
            if (r == 0) return kInf;
            return lj_raw(r) * taper(r);
        }
        case PotentialKind::Tabulated: {
            if (r >= r_cut_) return 0.0;
            if (r < tab_r_.front()) return kInf;
            return tab_eval(r, false);
        }
    }
    return 0.0;
}

double PairPotential::radial_derivative(double r) const {
    if (!(eval(r) < kInf) || r <= 0) {
        if (kind_ == PotentialKind::Zero || (kind_ == PotentialKind::HardCore && r >= hc_radius_))
            return 0.0;
        throw std::domain_error("PairPotential: gradient requested where phi is infinite or r = 0");
    }
    switch (kind_) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::HardCore: return 0.0;
        case PotentialKind::LennardJones:
            if (r >= r_cut_) return 0.0;
            return lj_raw_derivative(r) * taper(r) + lj_raw(r) * taper_derivative(r);
        case PotentialKind::Tabulated:
            if (r >= r_cut_) return 0.0;
            return tab_eval(r, true);
    }
    return 0.0;
}

Vec PairPotential::grad(const Vec& v) const {
    double r = norm(v);
    if (is_zero()) return Vec{};
    if (r >= r_cut_) return Vec{};
    double d = radial_derivative(r);
    return (d / r) * v;
}

std::string PairPotential::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case PotentialKind::Zero: os << "zero"; break;
        case PotentialKind::HardCore: os << "hard_core R=" << hc_radius_; break;
        case PotentialKind::LennardJones:
            os << "lj a=" << lj_a_ << " b=" << lj_b_ << " r_cut=" << r_cut_
               << " taper=" << taper_width_;
            break;
        case PotentialKind::Tabulated:
            os << "tabulated n=" << tab_r_.size() << " r_cut=" << r_cut_;
            for (size_t i = 0; i < tab_r_.size(); ++i)
                os << " " << tab_r_[i] << ":" << tab_v_[i] << ":" << tab_dv_[i];
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Cell list

CellList::CellList(const TorusDomain& dom, double range, const std::vector<Vec>& points)
    : dom_(dom), points_(points) {
    if (!(range > 0)) range = dom.L;  // zero-range potentials degrade to one cell
    per_axis_ = std::max(1, static_cast<int>(std::floor(dom.L / range)));
    cell_side_ = dom.L / per_axis_;

    size_t n_cells = 1;
    for (int a = 0; a < dom_.d; ++a) n_cells *= static_cast<size_t>(per_axis_);
    cells_.assign(n_cells, {});
    for (size_t i = 0; i < points_.size(); ++i) cells_[cell_of(points_[i])].push_back(i);

    // Precompute the 3^d neighborhood of every cell, deduped (small boxes alias).
    neighbors_.assign(n_cells, {});
    std::vector<int> idx(static_cast<size_t>(dom_.d), 0);
    for (size_t c = 0; c < n_cells; ++c) {
        size_t rem = c;
        std::vector<int> coord(static_cast<size_t>(dom_.d));
        for (int a = 0; a < dom_.d; ++a) {
            coord[static_cast<size_t>(a)] = static_cast<int>(rem % static_cast<size_t>(per_axis_));
            rem /= static_cast<size_t>(per_axis_);
        }
        std::vector<int> off(static_cast<size_t>(dom_.d), -1);
        std::vector<size_t>& nb = neighbors_[c];
        while (true) {
            size_t id = 0, mult = 1;
            for (int a = 0; a < dom_.d; ++a) {
                int k = (coord[static_cast<size_t>(a)] + off[static_cast<size_t>(a)] + per_axis_) % per_axis_;
                id += static_cast<size_t>(k) * mult;
                mult *= static_cast<size_t>(per_axis_);
            }
            nb.push_back(id);
            int a = 0;
            for (; a < dom_.d; ++a) {
                if (++off[static_cast<size_t>(a)] <= 1) break;
                off[static_cast<size_t>(a)] = -1;
            }
            if (a == dom_.d) break;
        }
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
}

size_t CellList::cell_of(const Vec& x) const {
    size_t id = 0, mult = 1;
    for (int a = 0; a < dom_.d; ++a) {
        int k = static_cast<int>(std::floor(x[a] / cell_side_));
        k = std::clamp(k, 0, per_axis_ - 1);
        id += static_cast<size_t>(k) * mult;
        mult *= static_cast<size_t>(per_axis_);
    }
    return id;
}

std::vector<Vec> config_points(const Configuration& gamma) {
    std::vector<Vec> pts;
    pts.reserve(gamma.size());
    for (size_t i = 0; i < gamma.size(); ++i) pts.push_back(gamma.point(i));
    return pts;
}

// ---------------------------------------------------------------------------
// Energies

namespace {

void check_range(const PairPotential& phi, const TorusDomain& dom) {
    if (!phi.is_zero() && phi.r_cut() > 0.5 * dom.L + 1e-12)
        throw std::invalid_argument("interaction range exceeds half the box; minimal image invalid");
}

}  // namespace

EnergyBreakdown conditional_energy(const PairPotential& phi, const Configuration& gamma,
                                   const Window& window, const Configuration& boundary) {
    const TorusDomain& dom = gamma.domain();
    check_range(phi, dom);
    for (size_t i = 0; i < boundary.size(); ++i)
        if (window.contains(boundary.point(i)))
            throw std::invalid_argument("conditional_energy: boundary point inside the window");

    EnergyBreakdown out;
    if (phi.is_zero()) return out;

    std::vector<Vec> inside = config_points(restrict_to(gamma, window));
    CellList inner(dom, phi.r_cut(), inside);
    inner.for_each_pair([&](size_t i, size_t j) {
        double r = dom.distance(inside[i], inside[j]);
        if (r < phi.r_cut()) out.internal += phi.eval(r);
    });

    if (boundary.size() > 0 && !inside.empty()) {
        CellList outer(dom, phi.r_cut(), config_points(boundary));
        for (const Vec& x : inside) {
            outer.for_neighbors_of(x, [&](size_t j) {
                double r = dom.distance(x, outer.points()[j]);
                if (r < phi.r_cut()) out.boundary += phi.eval(r);
            });
        }
    }
    out.total = out.internal + out.boundary;
    return out;
}

double one_point_energy(const PairPotential& phi, const Configuration& gamma, const Vec& x) {
    const TorusDomain& dom = gamma.domain();
    check_range(phi, dom);
    if (phi.is_zero() || gamma.empty()) return 0.0;
    std::vector<Vec> pts = config_points(gamma);
    CellList cl(dom, phi.r_cut(), pts);
    double e = 0;
    cl.for_neighbors_of(x, [&](size_t j) {
        double r = dom.distance(x, pts[j]);
        if (r < phi.r_cut()) e += phi.eval(r);
    });
    return e;
}

double total_energy(const PairPotential& phi, const TorusDomain& dom, const std::vector<Vec>& pts) {
    check_range(phi, dom);
    if (phi.is_zero()) return 0.0;
    CellList cl(dom, phi.r_cut(), pts);
    double e = 0;
    cl.for_each_pair([&](size_t i, size_t j) {
        double r = dom.distance(pts[i], pts[j]);
        if (r < phi.r_cut()) e += phi.eval(r);
    });
    return e;
}

std::vector<Vec> drift_field(const PairPotential& phi, const TorusDomain& dom,
                             const std::vector<Vec>& pts) {
    check_range(phi, dom);
    std::vector<Vec> b(pts.size(), Vec{});
    if (phi.is_zero()) return b;
    CellList cl(dom, phi.r_cut(), pts);
    cl.for_each_pair([&](size_t i, size_t j) {
        Vec disp = dom.displacement(pts[i], pts[j]);
        double r = norm(disp);
        if (r >= phi.r_cut()) return;
        if (!(phi.eval(r) < kInf))
            throw std::domain_error("drift_field: hard-core contact");
        Vec g = phi.grad(disp);
        b[i] -= g;  // force on i from j
        b[j] += g;  // equal and opposite, phi even
    });
    return b;
}

StabilityReport stability_report(const PairPotential& phi, const std::vector<Configuration>& samples) {
    StabilityReport rep;
    rep.min_energy_per_point = kInf;
    double sqq = 0, sqn = 0, snn = 0, sqe = 0, sne = 0;
    for (const auto& g : samples) {
        if (g.empty()) continue;
        const TorusDomain& dom = g.domain();
        std::vector<Vec> pts = config_points(g);
        double e = total_energy(phi, dom, pts);
        double n = static_cast<double>(pts.size());
        rep.min_energy_per_point = std::min(rep.min_energy_per_point, e / n);

        // occupation numbers of (roughly) unit subcells
        int per_axis = std::max(1, static_cast<int>(std::llround(dom.L)));
        double side = dom.L / per_axis;
        std::vector<long> occ;
        size_t n_cells = 1;
        for (int a = 0; a < dom.d; ++a) n_cells *= static_cast<size_t>(per_axis);
        occ.assign(n_cells, 0);
        for (const Vec& p : pts) {
            size_t id = 0, mult = 1;
            for (int a = 0; a < dom.d; ++a) {
                int k = std::clamp(static_cast<int>(std::floor(p[a] / side)), 0, per_axis - 1);
                id += static_cast<size_t>(k) * mult;
                mult *= static_cast<size_t>(per_axis);
            }
            ++occ[id];
        }
        double q = 0;
        for (long c : occ) q += static_cast<double>(c) * static_cast<double>(c);

        if (std::isfinite(e)) {
            sqq += q * q;
            sqn += q * n;
            snn += n * n;
            sqe += q * e;
            sne += n * e;
            ++rep.n_samples;
        }
    }
    // Least squares for E ~ A q - B n.
    double det = sqq * snn - sqn * sqn;
    if (rep.n_samples >= 2 && std::abs(det) > 1e-12 * (sqq * snn + 1)) {
        rep.fit_A = (sqe * snn - sne * sqn) / det;
        rep.fit_B = -(sne * sqq - sqe * sqn) / det;
    }
    if (rep.min_energy_per_point == kInf) rep.min_energy_per_point = 0;
    return rep;
}

DfrReport dfr_bounds_check(const PairPotential& phi, int dim, double d1, double d2,
                           const std::vector<std::pair<double, double>>& s1,
                           const std::vector<std::pair<double, double>>& s2) {
    if (!(0 < d1 && d1 < d2)) throw std::invalid_argument("dfr_bounds_check: need 0 < d1 < d2");
    DfrReport rep;
    for (const auto& [t, v] : s1) {
        if (t <= 0 || t > d1) continue;
        if (!(phi.eval(t) >= v)) {  // +inf passes any finite bound
            rep.lower_bound_ok = false;
            rep.lower_failures.push_back(t);
        }
    }
    std::vector<std::pair<double, double>> tail;
    for (const auto& [t, v] : s2) {
        if (t < d2 || t > phi.r_cut()) continue;
        tail.emplace_back(t, v);
        if (!(std::abs(phi.eval(t)) <= v)) {
            rep.upper_bound_ok = false;
            rep.upper_failures.push_back(t);
        }
    }
    std::sort(tail.begin(), tail.end());
    for (size_t i = 1; i < tail.size(); ++i) {
        double ta = tail[i - 1].first, tb = tail[i].first;
        double fa = std::pow(ta, dim - 1) * tail[i - 1].second;
        double fb = std::pow(tb, dim - 1) * tail[i].second;
        rep.tail_integral += 0.5 * (fa + fb) * (tb - ta);
    }
    return rep;
}

}  // namespace confsim

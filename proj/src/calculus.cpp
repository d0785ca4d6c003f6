#include "confsim/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace confsim {

CylinderFunction::CylinderFunction(Expr outer, std::vector<ScalarField> inner)
    : outer_(std::move(outer)), inner_(std::move(inner)) {
    if (inner_.empty()) throw std::invalid_argument("CylinderFunction: needs at least one inner field");
    if (outer_.arity() > static_cast<int>(inner_.size()))
        throw std::invalid_argument("CylinderFunction: outer references missing inner fields");
    const int n = n_inner();
    d1_.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) d1_.push_back(outer_.diff(i));
    d2_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        d2_[static_cast<size_t>(i)].reserve(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) d2_[static_cast<size_t>(i)].push_back(d1_[static_cast<size_t>(i)].diff(j));
    }
}

std::vector<double> CylinderFunction::pairings(const Configuration& gamma) const {
    std::vector<double> p(inner_.size(), 0.0);
    for (size_t k = 0; k < gamma.size(); ++k) {
        Vec x = gamma.point(k);
        for (size_t i = 0; i < inner_.size(); ++i) p[i] += inner_[i].value(x);
    }
    return p;
}

CylinderFunction CylinderFunction::product(const CylinderFunction& F, const CylinderFunction& G) {
    const int nf = F.n_inner();
    std::vector<Expr> shifted;
    shifted.reserve(static_cast<size_t>(G.n_inner()));
    for (int j = 0; j < G.n_inner(); ++j) shifted.push_back(Expr::var(nf + j));
    Expr outer = F.outer_ * G.outer_.compose(shifted);
    std::vector<ScalarField> inner = F.inner_;
    inner.insert(inner.end(), G.inner_.begin(), G.inner_.end());
    return {outer, std::move(inner)};
}

CylinderFunction CylinderFunction::compose_scalar(const Expr& chi, const CylinderFunction& F) {
    return {chi.compose({F.outer_}), F.inner_};
}

double eval_cyl(const CylinderFunction& F, const Configuration& gamma) {
    return F.outer().eval(F.pairings(gamma));
}

TangentVector grad_gamma(const CylinderFunction& F, const Configuration& gamma) {
    auto args = F.pairings(gamma);
    std::vector<double> coeff(static_cast<size_t>(F.n_inner()));
    for (int i = 0; i < F.n_inner(); ++i) coeff[static_cast<size_t>(i)] = F.partial(i).eval(args);

    TangentVector out;
    out.at.resize(gamma.size(), Vec{});
    for (size_t k = 0; k < gamma.size(); ++k) {
        Vec x = gamma.point(k);
        for (int i = 0; i < F.n_inner(); ++i) {
            double c = coeff[static_cast<size_t>(i)];
            if (c != 0) out.at[k] += c * F.inner()[static_cast<size_t>(i)].gradient(x);
        }
    }
    return out;
}

std::vector<VfcTerm> grad_representation(const CylinderFunction& F) {
    std::vector<VfcTerm> rep;
    const TorusDomain& dom = F.inner().front().domain();
    for (int i = 0; i < F.n_inner(); ++i) {
        CylinderFunction coeff(F.partial(i), F.inner());
        VectorFieldV0 v(dom);
        v.add_gradient_term(F.inner()[static_cast<size_t>(i)]);
        rep.emplace_back(std::move(coeff), std::move(v));
    }
    return rep;
}

Configuration lift_flow(const VectorFieldV0& v, double t, const Configuration& gamma,
                        double max_step) {
    if (t == 0) return gamma;
    const TorusDomain& dom = gamma.domain();
    long n_steps = static_cast<long>(std::ceil(std::abs(t) / max_step));
    double h = t / static_cast<double>(n_steps);

    Configuration out = gamma;
    for (size_t k = 0; k < out.size(); ++k) {
        Vec x = out.point(k);
        for (long s = 0; s < n_steps; ++s) {
            Vec k1 = v.value(dom.wrap(x));
            Vec k2 = v.value(dom.wrap(x + (0.5 * h) * k1));
            Vec k3 = v.value(dom.wrap(x + (0.5 * h) * k2));
            Vec k4 = v.value(dom.wrap(x + h * k3));
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.set_point(k, dom.wrap(x));
    }
    return out;
}

double directional_derivative(const CylinderFunction& F, const VectorFieldV0& v,
                              const Configuration& gamma) {
    auto args = F.pairings(gamma);
    double s = 0;
    for (int i = 0; i < F.n_inner(); ++i) {
        double c = F.partial(i).eval(args);
        if (c == 0) continue;
        double pairing = 0;
        for (size_t k = 0; k < gamma.size(); ++k) {
            Vec x = gamma.point(k);
            pairing += dot(F.inner()[static_cast<size_t>(i)].gradient(x), v.value(x));
        }
        s += c * pairing;
    }
    return s;
}

double div_gamma(const std::vector<VfcTerm>& V, const Configuration& gamma) {
    double s = 0;
    for (const auto& [F, v] : V) {
        s += directional_derivative(F, v, gamma);
        double div_pairing = 0;
        for (size_t k = 0; k < gamma.size(); ++k) div_pairing += v.divergence(gamma.point(k));
        s += eval_cyl(F, gamma) * div_pairing;
    }
    return s;
}

double laplacian_gamma(const CylinderFunction& F, const Configuration& gamma) {
    auto args = F.pairings(gamma);
    const int n = F.n_inner();

    double s = 0;
    // sum_ij d_i d_j g <grad f_i . grad f_j, gamma>
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double c = F.partial2(i, j).eval(args);
            if (c == 0) continue;
            double pairing = 0;
            for (size_t k = 0; k < gamma.size(); ++k) {
                Vec x = gamma.point(k);
                pairing += dot(F.inner()[static_cast<size_t>(i)].gradient(x),
                               F.inner()[static_cast<size_t>(j)].gradient(x));
            }
            s += c * pairing;
        }
    }
    // sum_i d_i g <Laplacian f_i, gamma>
    for (int i = 0; i < n; ++i) {
        double c = F.partial(i).eval(args);
        if (c == 0) continue;
        double pairing = 0;
        for (size_t k = 0; k < gamma.size(); ++k)
            pairing += F.inner()[static_cast<size_t>(i)].laplacian(gamma.point(k));
        s += c * pairing;
    }
    return s;
}

double L_v_phi(const PairPotential& phi, const VectorFieldV0& v, const Configuration& gamma) {
    if (phi.is_zero() || gamma.size() < 2) return 0.0;
    const TorusDomain& dom = gamma.domain();
    std::vector<Vec> pts = config_points(gamma);
    CellList cl(dom, phi.r_cut(), pts);
    double s = 0;
    cl.for_each_pair([&](size_t i, size_t j) {
        Vec disp = dom.displacement(pts[i], pts[j]);
        double r = norm(disp);
        if (r >= phi.r_cut()) return;
        if (!(phi.eval(r) < kInf)) throw std::domain_error("L_v_phi: hard-core contact");
        s -= dot(phi.grad(disp), v.value(pts[i]) - v.value(pts[j]));
    });
    return s;
}

double B_v_phi(const PairPotential& phi, const VectorFieldV0& v, const Configuration& gamma) {
    double div_pairing = 0;
    for (size_t k = 0; k < gamma.size(); ++k) div_pairing += v.divergence(gamma.point(k));
    return L_v_phi(phi, v, gamma) + div_pairing;
}

double generator_apply(const PairPotential& phi, const CylinderFunction& F,
                       const Configuration& gamma) {
    double lap = laplacian_gamma(F, gamma);
    if (phi.is_zero() || gamma.size() < 2) return lap;

    const TorusDomain& dom = gamma.domain();
    TangentVector grad = grad_gamma(F, gamma);
    std::vector<Vec> pts = config_points(gamma);
    CellList cl(dom, phi.r_cut(), pts);
    double drift_term = 0;
    cl.for_each_pair([&](size_t i, size_t j) {
        Vec disp = dom.displacement(pts[i], pts[j]);
        double r = norm(disp);
        if (r >= phi.r_cut()) return;
        if (!(phi.eval(r) < kInf)) throw std::domain_error("generator_apply: hard-core contact");
        Vec g = phi.grad(disp);  // = -grad phi(x_j - x_i)
        drift_term -= dot(g, grad.at[i]);
        drift_term += dot(g, grad.at[j]);
    });
    return lap + drift_term;
}

}  // namespace confsim

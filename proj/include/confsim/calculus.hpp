#pragma once

#include <utility>
#include <vector>

#include "confsim/configuration.hpp"
#include "confsim/fields.hpp"
#include "confsim/outer.hpp"
#include "confsim/potential.hpp"

namespace confsim {

// Element of the tangent space at gamma: one d-vector per point of the
// configuration, with the gamma-weighted L2 inner product.
struct TangentVector {
    std::vector<Vec> at;

    static double inner(const TangentVector& a, const TangentVector& b) {
        if (a.at.size() != b.at.size())
            throw std::invalid_argument("TangentVector: size mismatch");
        double s = 0;
        for (size_t i = 0; i < a.at.size(); ++i) s += dot(a.at[i], b.at[i]);
        return s;
    }
};

// Cylinder function F = g(<f_1, .>, ..., <f_N, .>) with a symbolic outer g.
// First and second partials of g are cached as expressions, exact.
class CylinderFunction {
public:
    CylinderFunction(Expr outer, std::vector<ScalarField> inner);

    static CylinderFunction pairing(const ScalarField& f) { return {Expr::var(0), {f}}; }
    static CylinderFunction constant(const TorusDomain& dom, double c) {
        return {Expr::constant(c), {ScalarField(dom)}};
    }

    int n_inner() const { return static_cast<int>(inner_.size()); }
    const std::vector<ScalarField>& inner() const { return inner_; }
    const Expr& outer() const { return outer_; }
    const Expr& partial(int i) const { return d1_[static_cast<size_t>(i)]; }
    const Expr& partial2(int i, int j) const {
        return d2_[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }

    std::vector<double> pairings(const Configuration& gamma) const;

    // F * G and chi(F) stay in the algebra.
    static CylinderFunction product(const CylinderFunction& F, const CylinderFunction& G);
    static CylinderFunction compose_scalar(const Expr& chi_one_var, const CylinderFunction& F);

private:
    Expr outer_;
    std::vector<ScalarField> inner_;
    std::vector<Expr> d1_;
    std::vector<std::vector<Expr>> d2_;
};

// Finitely based vector field V = sum_i F_i v_i.
using VfcTerm = std::pair<CylinderFunction, VectorFieldV0>;

double eval_cyl(const CylinderFunction& F, const Configuration& gamma);

// Per-point gradient sum_i d_i g * grad f_i evaluated at each point of gamma.
TangentVector grad_gamma(const CylinderFunction& F, const Configuration& gamma);

// The gradient as a finitely based vector field (cylinder coefficients against
// gradient fields of the inner functions).
std::vector<VfcTerm> grad_representation(const CylinderFunction& F);

// Each point advanced along the flow of v for time t by fixed-step RK4.
Configuration lift_flow(const VectorFieldV0& v, double t, const Configuration& gamma,
                        double max_step = 1e-3);

double directional_derivative(const CylinderFunction& F, const VectorFieldV0& v,
                              const Configuration& gamma);

double div_gamma(const std::vector<VfcTerm>& V, const Configuration& gamma);

double laplacian_gamma(const CylinderFunction& F, const Configuration& gamma);

// L_v^phi = -sum over unordered pairs of <grad phi(x-y), v(x) - v(y)>.
// Throws std::domain_error on hard-core contact.
double L_v_phi(const PairPotential& phi, const VectorFieldV0& v, const Configuration& gamma);

// B_v^phi = L_v^phi + <div v, gamma>.
double B_v_phi(const PairPotential& phi, const VectorFieldV0& v, const Configuration& gamma);

// Generator of the gradient diffusion on cylinder functions:
// LF = Laplacian F + sum_x <b(x), (grad F)(x)> with b the pair drift.
double generator_apply(const PairPotential& phi, const CylinderFunction& F,
                       const Configuration& gamma);

}  // namespace confsim

#pragma once

#include <vector>

#include "confsim/domain.hpp"

namespace confsim {

// Smooth compactly supported bump on the torus:
//   f(x) = amplitude * exp(-1/(1 - s^2)),  s = dist(x, center)/radius < 1,
// and 0 otherwise. Support radius must stay below L/2 so the bump is
// single-valued on the torus. Gradient and Laplacian are analytic.
struct BumpFunction {
    Vec center{};
    double radius = 1;
    double amplitude = 1;

    BumpFunction() = default;
    BumpFunction(const TorusDomain& dom, const Vec& c, double r, double a);

    double value(const TorusDomain& dom, const Vec& x) const;
    Vec gradient(const TorusDomain& dom, const Vec& x) const;
    double laplacian(const TorusDomain& dom, const Vec& x) const;
};

// constant + finite linear combination of bumps. The constant term is only
// admissible for intensity-type fields; vector-field components reject it.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const TorusDomain& dom, double constant = 0.0)
        : dom_(dom), constant_(constant) {}

    static ScalarField bump(const TorusDomain& dom, const Vec& center, double radius, double amplitude) {
        ScalarField f(dom);
        f.add_bump(center, radius, amplitude);
        return f;
    }

    void add_bump(const Vec& center, double radius, double amplitude) {
        bumps_.emplace_back(dom_, center, radius, amplitude);
    }

    const TorusDomain& domain() const { return dom_; }
    double constant_term() const { return constant_; }
    const std::vector<BumpFunction>& bumps() const { return bumps_; }

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    double laplacian(const Vec& x) const;

    // sup |f| and sup |grad f| over a uniform grid of the whole box.
    double sup_abs_on_grid(int per_axis = 64) const;
    double sup_grad_norm_on_grid(int per_axis = 64) const;

    ScalarField scaled(double s) const;
    ScalarField plus(const ScalarField& o) const;

private:
    TorusDomain dom_;
    double constant_ = 0;
    std::vector<BumpFunction> bumps_;
};

// Smooth compactly supported vector field: a sum of per-axis scalar components
// and gradient fields of scalar potentials. Both kinds keep the pointwise
// divergence analytic, and gradient terms are what lifted gradients of
// cylinder functions produce.
class VectorFieldV0 {
public:
    VectorFieldV0() = default;
    explicit VectorFieldV0(const TorusDomain& dom) : dom_(dom) {}

    // v_axis += f. f must have no constant term (compact support).
    void add_axis_component(int axis, const ScalarField& f);
    // v += grad(potential).
    void add_gradient_term(const ScalarField& potential);

    const TorusDomain& domain() const { return dom_; }

    Vec value(const Vec& x) const;
    double divergence(const Vec& x) const;

    VectorFieldV0 scaled(double s) const;
    VectorFieldV0 plus(const VectorFieldV0& o) const;

private:
    TorusDomain dom_;
    std::vector<std::pair<int, ScalarField>> axis_terms_;
    std::vector<ScalarField> gradient_terms_;
};

}  // namespace confsim

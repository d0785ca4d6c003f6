#pragma once

#include <functional>
#include <vector>

#include "confsim/domain.hpp"

namespace confsim {

struct QuadResult {
    double value = 0;
    double error = 0;  // absolute estimate from order refinement
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
const std::vector<double>& gl_nodes(int order);
const std::vector<double>& gl_weights(int order);

// Tensor-product Gauss-Legendre integral of f over the window, with each axis
// split into `panels` equal segments. Mollifier-type bumps are smooth but not
// analytic at their support boundary, so single-panel rules stall near 1e-4;
// panelized rules restore fast convergence.
double integrate_window(const std::function<double(const Vec&)>& f, const Window& w, int order = 32,
                        int panels = 1);

// Panel count used for closed-form targets (laplace transforms, window masses).
inline constexpr int kTargetPanels = 6;

// Integral with an error estimate from comparing two orders. Throws
// QuadratureError if the relative difference exceeds rel_tol.
QuadResult integrate_window_checked(const std::function<double(const Vec&)>& f, const Window& w,
                                    int order = 32, int check_order = 48, double rel_tol = 1e-8,
                                    int panels = kTargetPanels);

// 1D convenience on [a, b].
double integrate_1d(const std::function<double(double)>& f, double a, double b, int order = 32,
                    int panels = 1);

}  // namespace confsim

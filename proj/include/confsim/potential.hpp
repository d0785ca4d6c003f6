#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "confsim/configuration.hpp"
#include "confsim/domain.hpp"

namespace confsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PotentialKind { Zero, HardCore, LennardJones, Tabulated };

// Even pair potential phi(|x-y|) with compact interaction range r_cut.
// +infinity is an ordinary value inside a declared hard core and propagates
// through energy sums; e^{-inf} evaluates to 0 downstream.
class PairPotential {
public:
    PairPotential() = default;  // zero potential

    static PairPotential zero();
    static PairPotential hard_core(double R);
    // a/r^12 - b/r^6 multiplied by a C^2 quintic cutoff that is 1 on
    // [0, r_cut - taper_width] and 0 beyond r_cut. taper_width = 0 truncates sharply.
    static PairPotential lennard_jones(double a, double b, double r_cut, double taper_width);
    // Radial grid with values and radial derivatives, cubic Hermite in between.
    // Below the first node the potential is treated as a hard core.
    static PairPotential tabulated(std::vector<double> radii, std::vector<double> values,
                                   std::vector<double> derivs, double r_cut);
    static PairPotential tabulated_from_stream(std::istream& in);

    PotentialKind kind() const { return kind_; }
    bool is_zero() const { return kind_ == PotentialKind::Zero; }
    double r_cut() const { return r_cut_; }
    // Radius below which the value is +infinity (0 if none).
    double hard_core_radius() const;

    double eval(double r) const;
    // d phi / d r. Only defined where phi is finite and r > 0.
    double radial_derivative(double r) const;
    // Gradient of phi at displacement v (direction included).
    Vec grad(const Vec& v) const;

    // Canonical description used for file manifests.
    std::string describe() const;

private:
    PotentialKind kind_ = PotentialKind::Zero;
    double r_cut_ = 0;
    // hard core
    double hc_radius_ = 0;
    // Lennard-Jones
    double lj_a_ = 0, lj_b_ = 0, taper_width_ = 0;
    // tabulated
    std::vector<double> tab_r_, tab_v_, tab_dv_;

    double lj_raw(double r) const;
    double lj_raw_derivative(double r) const;
    double taper(double r) const;
    double taper_derivative(double r) const;
    double tab_eval(double r, bool derivative) const;
};

struct EnergyBreakdown {
    double internal = 0;
    double boundary = 0;
    double total = 0;
};

// Cubic spatial hash with cell side >= the interaction range; 3^d neighborhood
// scans. Rebuilt per configuration.
class CellList {
public:
    CellList(const TorusDomain& dom, double range, const std::vector<Vec>& points);

    // Unordered pairs (i < j) whose cells are neighbors; includes every pair
    // within the range.
    template <typename Fn>
    void for_each_pair(Fn&& fn) const {
        for (size_t i = 0; i < points_.size(); ++i) {
            for_cells_near(points_[i], [&](size_t cell) {
                for (size_t j : cells_[cell])
                    if (j > i) fn(i, j);
            });
        }
    }

    // Indices of stored points in cells neighboring x.
    template <typename Fn>
    void for_neighbors_of(const Vec& x, Fn&& fn) const {
        for_cells_near(x, [&](size_t cell) {
            for (size_t j : cells_[cell]) fn(j);
        });
    }

    const std::vector<Vec>& points() const { return points_; }

private:
    TorusDomain dom_;
    int per_axis_ = 1;
    double cell_side_ = 0;
    std::vector<std::vector<size_t>> cells_;
    std::vector<std::vector<size_t>> neighbors_;  // per cell, deduped, includes self
    std::vector<Vec> points_;

    size_t cell_of(const Vec& x) const;

    template <typename Fn>
    void for_cells_near(const Vec& x, Fn&& fn) const {
        for (size_t c : neighbors_[cell_of(x)]) fn(c);
    }
};

std::vector<Vec> config_points(const Configuration& gamma);

// E_Lambda(gamma_Lambda) + W(gamma_Lambda | boundary) for the pair potential.
// Points of gamma outside the window are ignored; boundary points must lie
// outside the window.
EnergyBreakdown conditional_energy(const PairPotential& phi, const Configuration& gamma,
                                   const Window& window, const Configuration& boundary);

// Sum of phi(x - y) over y in gamma; +infinity on hard-core contact.
double one_point_energy(const PairPotential& phi, const Configuration& gamma, const Vec& x);

// Total pair energy of a point set on the torus (no window, no boundary).
double total_energy(const PairPotential& phi, const TorusDomain& dom, const std::vector<Vec>& pts);

// Drift of the gradient diffusion: b_i = -sum_{j != i} grad phi(x_i - x_j).
// Throws std::domain_error on hard-core contact.
std::vector<Vec> drift_field(const PairPotential& phi, const TorusDomain& dom,
                             const std::vector<Vec>& pts);

struct StabilityReport {
    double min_energy_per_point = 0;  // empirical inf of E/|gamma|
    double fit_A = 0;                 // superstability shape E ~ A q - B n
    double fit_B = 0;
    size_t n_samples = 0;
};

StabilityReport stability_report(const PairPotential& phi, const std::vector<Configuration>& samples);

struct DfrReport {
    bool lower_bound_ok = true;    // phi >= s1 on (0, d1]
    bool upper_bound_ok = true;    // |phi| <= s2 on [d2, r_cut]
    double tail_integral = 0;      // integral of t^{d-1} s2(t) over [d2, r_cut]
    std::vector<double> lower_failures;  // radii where the bound failed
    std::vector<double> upper_failures;
};

// Dobrushin-Fisher-Ruelle pointwise checks on sampled comparison functions
// s1, s2 given as (radius, value) grids. The integral conditions are reported,
// not decided.
DfrReport dfr_bounds_check(const PairPotential& phi, int dim, double d1, double d2,
                           const std::vector<std::pair<double, double>>& s1,
                           const std::vector<std::pair<double, double>>& s2);

}  // namespace confsim

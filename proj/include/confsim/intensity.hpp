#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "confsim/configuration.hpp"
#include "confsim/quadrature.hpp"
#include "confsim/rng.hpp"

namespace confsim {

// Intensity measure sigma = rho * m. Either a uniform activity z or a
// nonnegative density with a finite upper bound for rejection sampling.
// Density masses over a window come from tensor-product Gauss-Legendre
// quadrature and are cached per window.
class IntensityMeasure {
public:
    static IntensityMeasure uniform(double z);
    static IntensityMeasure density(std::function<double(const Vec&)> rho, double rho_max,
                                    int quad_order = 32);

    bool is_uniform() const { return !rho_; }
    double activity() const { return z_; }
    double density_at(const Vec& x) const { return rho_ ? rho_(x) : z_; }
    double rho_max() const { return rho_max_; }
    int quad_order() const { return quad_order_; }

    // sigma(Lambda); exact for the uniform kind.
    double mass(const Window& w) const;

    IntensityMeasure scaled(double z) const;

private:
    double z_ = 0;
    std::function<double(const Vec&)> rho_;
    double rho_max_ = 0;
    int quad_order_ = 32;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::vector<double>, double> mass_cache_;

    IntensityMeasure() = default;

public:
    IntensityMeasure(const IntensityMeasure& o)
        : z_(o.z_), rho_(o.rho_), rho_max_(o.rho_max_), quad_order_(o.quad_order_) {}
    IntensityMeasure& operator=(const IntensityMeasure& o) {
        z_ = o.z_;
        rho_ = o.rho_;
        rho_max_ = o.rho_max_;
        quad_order_ = o.quad_order_;
        return *this;
    }
};

// Finite-support mixing law for the activity z.
struct MixingLaw {
    std::vector<std::pair<double, double>> atoms;  // (z_k, p_k)

    explicit MixingLaw(std::vector<std::pair<double, double>> a);
    static MixingLaw point_mass(double z) { return MixingLaw({{z, 1.0}}); }

    double moment(int k) const;  // sum p_k z_k^k
    double draw(Rng& rng) const;
};

// Poisson sample on the window: N ~ Poisson(sigma(Lambda)), then N points from
// sigma/sigma(Lambda); density kind by rejection against rho_max.
Configuration sample_poisson(const IntensityMeasure& sigma, const TorusDomain& dom, const Window& w,
                             Rng& rng);

std::pair<double, Configuration> sample_mixed_poisson(const MixingLaw& lambda,
                                                      const IntensityMeasure& sigma,
                                                      const TorusDomain& dom, const Window& w,
                                                      Rng& rng);

// exp(integral of (e^f - 1) d sigma) over the window, for f <= 0 supported there.
QuadResult laplace_transform_target(const std::function<double(const Vec&)>& f,
                                    const IntensityMeasure& sigma, const Window& w,
                                    int order = 32, int check_order = 48);

double window_mass(const IntensityMeasure& sigma, const Window& w);

}  // namespace confsim

#include "confsim/intensity.hpp"

#include <cmath>
#include <stdexcept>

namespace confsim {

IntensityMeasure IntensityMeasure::uniform(double z) {
    if (!(z >= 0) || !std::isfinite(z)) throw std::invalid_argument("IntensityMeasure: activity must be >= 0");
    IntensityMeasure m;
    m.z_ = z;
    return m;
}

IntensityMeasure IntensityMeasure::density(std::function<double(const Vec&)> rho, double rho_max,
                                           int quad_order) {
    if (!rho) throw std::invalid_argument("IntensityMeasure: null density");
    if (!(rho_max > 0) || !std::isfinite(rho_max))
        throw std::invalid_argument("IntensityMeasure: rho_max must be positive and finite");
    IntensityMeasure m;
    m.rho_ = std::move(rho);
    m.rho_max_ = rho_max;
    m.quad_order_ = quad_order;
    return m;
}

double IntensityMeasure::mass(const Window& w) const {
    if (is_uniform()) return z_ * w.volume();
    std::vector<double> key;
    for (int a = 0; a < w.dim; ++a) {
        key.push_back(w.lower[a]);
        key.push_back(w.upper[a]);
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = mass_cache_.find(key);
        if (it != mass_cache_.end()) return it->second;
    }
    double v = integrate_window(rho_, w, quad_order_, kTargetPanels);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    mass_cache_[key] = v;
    return v;
}

IntensityMeasure IntensityMeasure::scaled(double z) const {
    if (!(z >= 0)) throw std::invalid_argument("IntensityMeasure::scaled: negative factor");
    if (is_uniform()) return uniform(z_ * z);
    auto rho = rho_;
    return density([rho, z](const Vec& x) { return z * rho(x); }, rho_max_ * z, quad_order_);
}

MixingLaw::MixingLaw(std::vector<std::pair<double, double>> a) : atoms(std::move(a)) {
    if (atoms.empty()) throw std::invalid_argument("MixingLaw: no atoms");
    double total = 0;
    for (const auto& [z, p] : atoms) {
        if (!(z >= 0) || !(p > 0)) throw std::invalid_argument("MixingLaw: bad atom");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("MixingLaw: weights must sum to 1");
}

double MixingLaw::moment(int k) const {
    double s = 0;
    for (const auto& [z, p] : atoms) s += p * std::pow(z, k);
    return s;
}

double MixingLaw::draw(Rng& rng) const {
    double u = rng.uniform();
    double acc = 0;
    for (const auto& [z, p] : atoms) {
        acc += p;
        if (u < acc) return z;
    }
    return atoms.back().first;
}

Configuration sample_poisson(const IntensityMeasure& sigma, const TorusDomain& dom, const Window& w,
                             Rng& rng) {
    w.validate_in(dom);
    double m = sigma.mass(w);
    if (!std::isfinite(m) || m < 0) throw std::invalid_argument("sample_poisson: bad window mass");
    long n = rng.poisson(m);
    Configuration out(dom);
    if (sigma.is_uniform()) {
        for (long i = 0; i < n; ++i) out.push_back_unchecked(rng.uniform_in(w));
        return out;
    }
    const double bound = sigma.rho_max();
    for (long i = 0; i < n; ++i) {
        for (;;) {
            Vec x = rng.uniform_in(w);
            double r = sigma.density_at(x);
            if (r > bound)
                throw std::runtime_error("sample_poisson: density exceeds declared rho_max");
            if (rng.uniform() * bound < r) {
                out.push_back_unchecked(x);
                break;
            }
        }
    }
    return out;
}

std::pair<double, Configuration> sample_mixed_poisson(const MixingLaw& lambda,
                                                      const IntensityMeasure& sigma,
                                                      const TorusDomain& dom, const Window& w,
                                                      Rng& rng) {
    double z = lambda.draw(rng);
    return {z, sample_poisson(sigma.scaled(z), dom, w, rng)};
}

QuadResult laplace_transform_target(const std::function<double(const Vec&)>& f,
                                    const IntensityMeasure& sigma, const Window& w,
                                    int order, int check_order) {
    auto integrand = [&](const Vec& x) {
        double v = f(x);
        if (v > 0) throw std::invalid_argument("laplace_transform_target: f must be <= 0");
        // e^f - 1, with the void limit f = -inf giving -1
        return std::expm1(v) * sigma.density_at(x);
    };
    QuadResult inner = integrate_window_checked(integrand, w, order, check_order);
    double value = std::exp(inner.value);
    return {value, std::abs(value) * inner.error};
}

double window_mass(const IntensityMeasure& sigma, const Window& w) { return sigma.mass(w); }

}  // namespace confsim

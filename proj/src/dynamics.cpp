#include "confsim/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace confsim {

void TrajectoryParams::validate() const {
    if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("TrajectoryParams: dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("TrajectoryParams: n_steps must be >= 1");
    if (!(diffusion_scale > 0)) throw std::invalid_argument("TrajectoryParams: bad diffusion scale");
}

Configuration free_step(const Configuration& gamma, double dt, Rng& rng, double diffusion_scale) {
    if (!(dt > 0)) throw std::invalid_argument("free_step: dt must be positive");
    const TorusDomain& dom = gamma.domain();
    const double scale = diffusion_scale * std::sqrt(dt);
    Configuration out = gamma;
    for (size_t i = 0; i < out.size(); ++i)
        out.set_point(i, dom.wrap(out.point(i) + rng.normal_vec(dom.d, scale)));
    return out;
}

namespace {

bool has_hard_core_overlap(const PairPotential& phi, const TorusDomain& dom,
                           const std::vector<Vec>& pts) {
    double hc = phi.hard_core_radius();
    if (hc == 0) return false;
    CellList cl(dom, phi.r_cut(), pts);
    bool overlap = false;
    cl.for_each_pair([&](size_t i, size_t j) {
        if (dom.distance(pts[i], pts[j]) < hc) overlap = true;
    });
    return overlap;
}

Configuration interacting_step_impl(const PairPotential& phi, const Configuration& gamma, double dt,
                                    Rng& rng, int levels_left) {
    const TorusDomain& dom = gamma.domain();
    std::vector<Vec> pts = config_points(gamma);
    std::vector<Vec> drift = drift_field(phi, dom, pts);
    const double noise = std::sqrt(2.0 * dt);

    std::vector<Vec> prop(pts.size());
    for (size_t i = 0; i < pts.size(); ++i)
        prop[i] = dom.wrap(pts[i] + dt * drift[i] + rng.normal_vec(dom.d, noise));

    if (has_hard_core_overlap(phi, dom, prop)) {
        if (levels_left <= 0)
            throw std::runtime_error("interacting_step: hard-core rejection exhausted");
        Configuration half = interacting_step_impl(phi, gamma, 0.5 * dt, rng, levels_left - 1);
        return interacting_step_impl(phi, half, 0.5 * dt, rng, levels_left - 1);
    }
    Configuration out(dom);
    for (const Vec& p : prop) out.push_back_unchecked(p);
    return out;
}

}  // namespace

Configuration interacting_step(const PairPotential& phi, const Configuration& gamma, double dt,
                               Rng& rng, int max_halvings) {
    if (!(dt > 0)) throw std::invalid_argument("interacting_step: dt must be positive");
    return interacting_step_impl(phi, gamma, dt, rng, max_halvings);
}

Trajectory simulate_free(const Configuration& start, const TrajectoryParams& params, Rng& rng,
                         long save_every) {
    params.validate();
    Trajectory traj;
    traj.frames.emplace_back(0.0, start);
    Configuration g = start;
    for (long k = 1; k <= params.n_steps; ++k) {
        g = free_step(g, params.dt, rng, params.diffusion_scale);
        if (k % save_every == 0 || k == params.n_steps)
            traj.frames.emplace_back(params.dt * static_cast<double>(k), g);
    }
    return traj;
}

Trajectory simulate_interacting(const PairPotential& phi, const Configuration& start,
                                const TrajectoryParams& params, Rng& rng, long save_every) {
    params.validate();
    Trajectory traj;
    traj.frames.emplace_back(0.0, start);
    Configuration g = start;
    for (long k = 1; k <= params.n_steps; ++k) {
        g = interacting_step(phi, g, params.dt, rng);
        if (k % save_every == 0 || k == params.n_steps)
            traj.frames.emplace_back(params.dt * static_cast<double>(k), g);
    }
    return traj;
}

LaplaceFunctionalResult laplace_functional_test(const MixingLaw& mixing,
                                                const std::vector<ScalarField>& fields,
                                                const std::vector<double>& times,
                                                const TorusDomain& dom, long n_system,
                                                long n_single, uint64_t seed) {
    if (fields.empty() || fields.size() != times.size())
        throw std::invalid_argument("laplace_functional_test: fields/times mismatch");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("laplace_functional_test: times must increase");
    if (times.front() < 0) throw std::invalid_argument("laplace_functional_test: negative time");

    const Window box = Window::whole_box(dom);
    const IntensityMeasure unit = IntensityMeasure::uniform(1.0);
    const double volume = dom.volume();

    // System side: free evolution of a mixed-Poisson configuration, sampled
    // exactly at the requested times.
    RunningStat lhs;
    {
        Rng rng(seed, 1);
        for (long s = 0; s < n_system; ++s) {
            auto [z, gamma] = sample_mixed_poisson(mixing, unit, dom, box, rng);
            double value = 1.0;
            double t_prev = 0;
            Configuration g = gamma;
            for (size_t i = 0; i < times.size(); ++i) {
                double gap = times[i] - t_prev;
                if (gap > 0) g = free_step(g, gap, rng);
                t_prev = times[i];
                for (size_t k = 0; k < g.size(); ++k) {
                    double f = fields[i].value(g.point(k));
                    if (f <= -1.0 || f > 0)
                        throw std::invalid_argument("laplace_functional_test: field outside (-1, 0]");
                    value *= 1.0 + f;
                }
            }
            lhs.add(value);
        }
    }

    // Particle side: one tagged Brownian particle started uniformly.
    RunningStat single;
    {
        Rng rng(seed, 2);
        for (long s = 0; s < n_single; ++s) {
            Vec x = rng.uniform_in(box);
            double prod = 1.0;
            double t_prev = 0;
            for (size_t i = 0; i < times.size(); ++i) {
                double gap = times[i] - t_prev;
                if (gap > 0) x = dom.wrap(x + rng.normal_vec(dom.d, std::sqrt(2.0 * gap)));
                t_prev = times[i];
                prod *= 1.0 + fields[i].value(x);
            }
            single.add(prod - 1.0);
        }
    }

    LaplaceFunctionalResult out;
    out.lhs = EstimatorResult::from(lhs);
    double m = single.mean();
    double dm = single.std_error();
    double value = 0, deriv = 0;
    for (const auto& [z, p] : mixing.atoms) {
        double e = std::exp(z * volume * m);
        value += p * e;
        deriv += p * e * z * volume;
    }
    out.rhs_value = value;
    out.rhs_error = std::abs(deriv) * dm;
    double pooled = std::sqrt(out.lhs.std_error * out.lhs.std_error + out.rhs_error * out.rhs_error);
    out.z_score = pooled > 0 ? (out.lhs.mean - out.rhs_value) / pooled : 0.0;
    return out;
}

namespace {

EstimatorResult martingale_statistic(const PairPotential& phi, const CylinderFunction& F,
                                     const std::function<Configuration(Rng&)>& start_law,
                                     double horizon, double dt, long n_paths, uint64_t seed,
                                     uint64_t stream_base, long* rejected) {
    const long n_steps = std::max<long>(1, static_cast<long>(std::llround(horizon / dt)));
    RunningStat stat;
    for (long p = 0; p < n_paths; ++p) {
        Rng rng(seed, stream_base + static_cast<uint64_t>(p));
        try {
            Configuration g = start_law(rng);
            double f0 = eval_cyl(F, g);
            double integral = 0;
            double lf_prev = phi.is_zero() ? laplacian_gamma(F, g) : generator_apply(phi, F, g);
            for (long k = 0; k < n_steps; ++k) {
                g = phi.is_zero() ? free_step(g, dt, rng) : interacting_step(phi, g, dt, rng);
                double lf = phi.is_zero() ? laplacian_gamma(F, g) : generator_apply(phi, F, g);
                integral += 0.5 * (lf_prev + lf) * dt;
                lf_prev = lf;
            }
            stat.add(eval_cyl(F, g) - f0 - integral);
        } catch (const std::domain_error&) {
            if (rejected) ++(*rejected);
        }
    }
    return EstimatorResult::from(stat, 0.0);
}

}  // namespace

MartingaleResult martingale_test(const PairPotential& phi, const CylinderFunction& F,
                                 const std::function<Configuration(Rng&)>& start_law, double horizon,
                                 double dt, long n_paths, uint64_t seed) {
    MartingaleResult out;
    out.coarse = martingale_statistic(phi, F, start_law, horizon, dt, n_paths, seed, 1000000,
                                      &out.rejected_paths);
    out.fine = martingale_statistic(phi, F, start_law, horizon, 0.5 * dt, n_paths, seed, 2000000,
                                    &out.rejected_paths);
    out.consistency_z = z_difference(out.coarse, out.fine);
    return out;
}

InvarianceReport invariance_test(const PairPotential& phi, std::vector<Configuration> samples,
                                 double horizon, double dt, int n_bins, double r_max,
                                 uint64_t seed, double z_threshold) {
    if (samples.empty()) throw std::invalid_argument("invariance_test: no samples");
    const TorusDomain& dom = samples.front().domain();
    const double width = r_max / n_bins;

    auto histogram_stats = [&](const std::vector<Configuration>& set) {
        std::vector<RunningStat> bins(static_cast<size_t>(n_bins));
        RunningStat energy;
        for (const auto& g : set) {
            std::vector<Vec> pts = config_points(g);
            energy.add(total_energy(phi, dom, pts));
            std::vector<double> counts(static_cast<size_t>(n_bins), 0.0);
            for (size_t i = 0; i < pts.size(); ++i)
                for (size_t j = i + 1; j < pts.size(); ++j) {
                    double r = dom.distance(pts[i], pts[j]);
                    if (r < r_max) counts[static_cast<size_t>(r / width)] += 1.0;
                }
            for (int b = 0; b < n_bins; ++b) bins[static_cast<size_t>(b)].add(counts[static_cast<size_t>(b)]);
        }
        return std::make_pair(std::move(bins), energy);
    };

    auto [bins_before, energy_before] = histogram_stats(samples);

    const long n_steps =
        horizon <= 0 ? 0 : std::max<long>(1, static_cast<long>(std::llround(horizon / dt)));
    for (size_t s = 0; s < samples.size(); ++s) {
        Rng rng(seed, 3000000 + static_cast<uint64_t>(s));
        Configuration g = samples[s];
        for (long k = 0; k < n_steps; ++k)
            g = phi.is_zero() ? free_step(g, dt, rng) : interacting_step(phi, g, dt, rng);
        samples[s] = g;
    }

    auto [bins_after, energy_after] = histogram_stats(samples);

    InvarianceReport rep;
    rep.energy_before = EstimatorResult::from(energy_before);
    rep.energy_after = EstimatorResult::from(energy_after);
    rep.energy_z = z_difference(rep.energy_before, rep.energy_after);
    rep.pass = std::abs(rep.energy_z) < z_threshold;
    for (int b = 0; b < n_bins; ++b) {
        double z = z_difference(EstimatorResult::from(bins_before[static_cast<size_t>(b)]),
                                EstimatorResult::from(bins_after[static_cast<size_t>(b)]));
        rep.bin_z.push_back(z);
        rep.max_abs_bin_z = std::max(rep.max_abs_bin_z, std::abs(z));
        if (!(std::abs(z) < z_threshold)) rep.pass = false;
    }
    return rep;
}

}  // namespace confsim

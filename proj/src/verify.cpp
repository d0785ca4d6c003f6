#include "confsim/verify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "confsim/dynamics.hpp"
#include "confsim/gibbs.hpp"
#include "confsim/parallel.hpp"
#include "confsim/quadrature.hpp"
#include "confsim/stats.hpp"

namespace confsim {

namespace {
constexpr int kShards = 16;
}

void IdentityRecord::finalize() {
    if (expect_fail) {
        pass = std::abs(z) > kPowerThreshold;
    } else {
        pass = std::abs(z) < kZThreshold;
    }
    if (n > 0 && static_cast<double>(rejections) > kMaxRejectionFraction * static_cast<double>(n))
        pass = false;
}

// ---------------------------------------------------------------------------
// Generic sharded sample mean

namespace {

EstimatorResult sharded_mean(long n_samples, int workers,
                             const std::function<double(long)>& statistic,
                             std::optional<double> target, long* rejections = nullptr) {
    std::vector<RunningStat> stats(kShards);
    std::vector<long> rejected(kShards, 0);
    parallel_shards(kShards, workers, [&](int s) {
        long lo = n_samples * s / kShards;
        long hi = n_samples * (s + 1) / kShards;
        for (long i = lo; i < hi; ++i) {
            try {
                stats[static_cast<size_t>(s)].add(statistic(i));
            } catch (const std::domain_error&) {
                ++rejected[static_cast<size_t>(s)];
            }
        }
    });
    RunningStat merged;
    long total_rejected = 0;
    for (int s = 0; s < kShards; ++s) {
        merged.merge(stats[static_cast<size_t>(s)]);
        total_rejected += rejected[static_cast<size_t>(s)];
    }
    if (rejections) *rejections = total_rejected;
    return EstimatorResult::from(merged, target);
}

}  // namespace

// ---------------------------------------------------------------------------
// Identity tests

MeckeOutcome mecke_test(const ConfigSampler& sampler, const IntensityMeasure& sigma,
                        const PairPotential& phi,
                        const std::function<double(const Configuration&, const Vec&)>& h,
                        const Window& support, long n_samples, int workers, int quad_order,
                        bool drop_energy_factor) {
    // Both sides are evaluated on the same samples and differenced per sample,
    // which keeps the z-score valid whatever the correlation between the sides.
    std::vector<RunningStat> lhs_stats(kShards), rhs_stats(kShards), diff_stats(kShards);
    parallel_shards(kShards, workers, [&](int s) {
        long lo = n_samples * s / kShards;
        long hi = n_samples * (s + 1) / kShards;
        for (long i = lo; i < hi; ++i) {
            Configuration g = sampler(i);
            double lhs = 0;
            for (size_t k = 0; k < g.size(); ++k) lhs += h(g, g.point(k));

            const TorusDomain& dom = g.domain();
            std::vector<Vec> pts = config_points(g);
            CellList cl(dom, phi.is_zero() ? dom.L : phi.r_cut(), pts);
            Configuration buffer = g;
            auto integrand = [&](const Vec& x) {
                double weight = sigma.density_at(x);
                if (!drop_energy_factor && !phi.is_zero()) {
                    double e = 0;
                    cl.for_neighbors_of(x, [&](size_t j) {
                        double r = dom.distance(x, pts[j]);
                        if (r < phi.r_cut()) e += phi.eval(r);
                    });
                    weight *= std::exp(-e);  // e^{-inf} = 0 on hard-core contact
                    if (weight == 0) return 0.0;
                }
                buffer.push_back_unchecked(x);
                double hv = h(buffer, x);
                buffer.pop_back_unchecked();
                return hv * weight;
            };
            double rhs = integrate_window(integrand, support, quad_order);

            lhs_stats[static_cast<size_t>(s)].add(lhs);
            rhs_stats[static_cast<size_t>(s)].add(rhs);
            diff_stats[static_cast<size_t>(s)].add(lhs - rhs);
        }
    });
    RunningStat lhs_all, rhs_all, diff_all;
    for (int s = 0; s < kShards; ++s) {
        lhs_all.merge(lhs_stats[static_cast<size_t>(s)]);
        rhs_all.merge(rhs_stats[static_cast<size_t>(s)]);
        diff_all.merge(diff_stats[static_cast<size_t>(s)]);
    }
    MeckeOutcome out;
    out.lhs = EstimatorResult::from(lhs_all);
    out.rhs = EstimatorResult::from(rhs_all);
    out.z = diff_all.std_error() > 0 ? diff_all.mean() / diff_all.std_error() : 0.0;
    return out;
}

EstimatorResult ibp_test(const ConfigSampler& sampler, const PairPotential& phi,
                         const CylinderFunction& F, const CylinderFunction& G,
                         const VectorFieldV0& v, long n_samples, int workers,
                         const std::function<Vec(const Vec&)>& beta, long* rejections) {
    auto statistic = [&](long i) {
        Configuration g = sampler(i);
        double dvF = directional_derivative(F, v, g);
        double dvG = directional_derivative(G, v, g);
        double fv = eval_cyl(F, g);
        double gv = eval_cyl(G, g);
        double B = L_v_phi(phi, v, g);
        for (size_t k = 0; k < g.size(); ++k) {
            Vec x = g.point(k);
            B += v.divergence(x);
            if (beta) B += dot(beta(x), v.value(x));
        }
        return dvF * gv + fv * dvG + fv * gv * B;
    };
    return sharded_mean(n_samples, workers, statistic, 0.0, rejections);
}

EstimatorResult volume_element_test(const ConfigSampler& sampler, const std::vector<VfcTerm>& V,
                                    const CylinderFunction& F, long n_samples, int workers) {
    auto statistic = [&](long i) {
        Configuration g = sampler(i);
        TangentVector gradF = grad_gamma(F, g);
        double lhs = 0;
        for (const auto& [Fi, vi] : V) {
            double pairing = 0;
            for (size_t k = 0; k < g.size(); ++k) pairing += dot(vi.value(g.point(k)), gradF.at[k]);
            lhs += eval_cyl(Fi, g) * pairing;
        }
        return lhs + div_gamma(V, g) * eval_cyl(F, g);
    };
    return sharded_mean(n_samples, workers, statistic, 0.0);
}

// ---------------------------------------------------------------------------
// Suite plumbing

namespace {

IdentityRecord record_from(const std::string& test, const std::string& params,
                           const VerifyOptions& opts, const EstimatorResult& r,
                           bool expect_fail = false, long rejections = 0) {
    IdentityRecord rec;
    rec.test = test;
    rec.params = params;
    rec.seed = opts.seed;
    rec.n = r.n_samples;
    rec.mean = r.mean;
    rec.std_error = r.std_error;
    rec.target = r.target.value_or(0.0);
    rec.z = r.target ? r.z_score() : 0.0;
    rec.rejections = rejections;
    rec.expect_fail = expect_fail;
    rec.finalize();
    return rec;
}

IdentityRecord record_from_z(const std::string& test, const std::string& params,
                             const VerifyOptions& opts, long n, double mean, double se, double target,
                             double z, bool expect_fail = false) {
    IdentityRecord rec;
    rec.test = test;
    rec.params = params;
    rec.seed = opts.seed;
    rec.n = n;
    rec.mean = mean;
    rec.std_error = se;
    rec.target = target;
    rec.z = z;
    rec.expect_fail = expect_fail;
    rec.finalize();
    return rec;
}

// p-value style record: pass iff p > threshold.
IdentityRecord record_pvalue(const std::string& test, const std::string& params,
                             const VerifyOptions& opts, long n, double p, double threshold) {
    IdentityRecord rec;
    rec.test = test;
    rec.params = params;
    rec.seed = opts.seed;
    rec.n = n;
    rec.mean = p;
    rec.std_error = 0;
    rec.target = threshold;
    rec.z = 0;
    rec.pass = p > threshold;
    return rec;
}

ConfigSampler poisson_sampler(const IntensityMeasure& sigma, const TorusDomain& dom, const Window& w,
                              uint64_t seed, uint64_t stream_base) {
    return [=](long i) {
        Rng rng(seed, stream_base + static_cast<uint64_t>(i));
        return sample_poisson(sigma, dom, w, rng);
    };
}

ConfigSampler mixed_sampler(const MixingLaw& mixing, const IntensityMeasure& sigma,
                            const TorusDomain& dom, const Window& w, uint64_t seed,
                            uint64_t stream_base) {
    return [=](long i) {
        Rng rng(seed, stream_base + static_cast<uint64_t>(i));
        return sample_mixed_poisson(mixing, sigma, dom, w, rng).second;
    };
}

// Pool of Gibbs samples drawn on parallel chains, then indexable as a sampler.
std::vector<Configuration> gibbs_pool(const GibbsSpec& spec, long n_samples, uint64_t seed,
                                      uint64_t stream_base, int workers, long thinning = 1000,
                                      long burn_in = 100000, double move_scale_factor = 0.1) {
    const int n_chains = 8;
    std::vector<std::vector<Configuration>> per_chain(n_chains);
    parallel_shards(n_chains, workers, [&](int c) {
        McmcParams params;
        params.move_scale = move_scale_factor * (spec.phi.is_zero() ? 1.0 : spec.phi.r_cut());
        params.burn_in = burn_in;
        params.thinning = thinning;
        params.n_samples = n_samples * (c + 1) / n_chains - n_samples * c / n_chains;
        params.seed = seed;
        Rng rng(seed, stream_base + static_cast<uint64_t>(c));
        per_chain[static_cast<size_t>(c)] = gc_sample(spec, params, rng);
    });
    std::vector<Configuration> pool;
    pool.reserve(static_cast<size_t>(n_samples));
    for (auto& chain : per_chain)
        for (auto& g : chain) pool.push_back(std::move(g));
    return pool;
}

ConfigSampler pool_sampler(const std::vector<Configuration>& pool) {
    return [&pool](long i) { return pool[static_cast<size_t>(i) % pool.size()]; };
}

ScalarField bump2(const TorusDomain& dom, double cx, double cy, double radius, double amp) {
    Vec c{};
    c[0] = cx;
    c[1] = cy;
    return ScalarField::bump(dom, c, radius, amp);
}

CylinderFunction tanh_pairing(const ScalarField& f) {
    return CylinderFunction(tanh(Expr::var(0)), {f});
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// poisson-identities: Laplace transform and moment formulas

std::vector<IdentityRecord> run_poisson_identities(const VerifyOptions& opts) {
    std::vector<IdentityRecord> recs;
    const TorusDomain dom(2, 4.0);
    const Window box = Window::whole_box(dom);
    const double z = 2.0;
    const IntensityMeasure sigma = IntensityMeasure::uniform(z);
    const long n = 100000;

    ScalarField f_neg = bump2(dom, 2.0, 2.0, 1.2, -0.8);
    ScalarField g = bump2(dom, 1.5, 2.5, 1.0, 1.5);
    auto g_fn = [&](const Vec& x) { return g.value(x); };
    double int_g = integrate_window(g_fn, box, 32);
    double int_g2 = integrate_window([&](const Vec& x) { return g.value(x) * g.value(x); }, box, 32);

    {
        QuadResult target = laplace_transform_target([&](const Vec& x) { return f_neg.value(x); },
                                                     sigma, box);
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x10000000);
        auto r = sharded_mean(n, opts.workers, [&](long i) {
            Configuration gam = sampler(i);
            double s = 0;
            for (size_t k = 0; k < gam.size(); ++k) s += f_neg.value(gam.point(k));
            return std::exp(s);
        }, target.value);
        recs.push_back(record_from("poisson-laplace-2.15",
                                   "d=2 L=4 z=2 bump(-0.8,r1.2) n=" + fmt(n), opts, r));
    }
    {
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x11000000);
        auto r = sharded_mean(n, opts.workers, [&](long i) {
            Configuration gam = sampler(i);
            return pair_sum(g_fn, gam);
        }, z * int_g);
        recs.push_back(record_from("poisson-mean-2.18", "d=2 L=4 z=2 n=" + fmt(n), opts, r));
    }
    {
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x12000000);
        double target = z * int_g2 + z * int_g * z * int_g;
        auto r = sharded_mean(n, opts.workers, [&](long i) {
            Configuration gam = sampler(i);
            double s = pair_sum(g_fn, gam);
            return s * s;
        }, target);
        recs.push_back(record_from("poisson-second-moment-2.19", "d=2 L=4 z=2 n=" + fmt(n), opts, r));
    }

    const MixingLaw mixing({{1.0, 0.5}, {3.0, 0.5}});
    const IntensityMeasure unit = IntensityMeasure::uniform(1.0);
    {
        auto sampler = mixed_sampler(mixing, unit, dom, box, opts.seed, 0x13000000);
        auto r = sharded_mean(n, opts.workers, [&](long i) {
            return pair_sum(g_fn, sampler(i));
        }, mixing.moment(1) * int_g);
        recs.push_back(record_from("mixed-mean-3.2", "atoms={1,3} p=1/2 n=" + fmt(n), opts, r));
    }
    {
        auto sampler = mixed_sampler(mixing, unit, dom, box, opts.seed, 0x14000000);
        double target = mixing.moment(1) * int_g2 + mixing.moment(2) * int_g * int_g;
        auto r = sharded_mean(n, opts.workers, [&](long i) {
            double s = pair_sum(g_fn, sampler(i));
            return s * s;
        }, target);
        recs.push_back(record_from("mixed-second-moment-3.3", "atoms={1,3} p=1/2 n=" + fmt(n), opts, r));
    }
    {
        Vec lo{}, hi{};
        lo[0] = 0.5; lo[1] = 0.5; hi[0] = 3.0; hi[1] = 3.0;
        Window sub(2, lo, hi);
        auto sampler = mixed_sampler(mixing, unit, dom, box, opts.seed, 0x15000000);
        double target = mixing.moment(2) * sub.volume() * sub.volume();
        auto r = sharded_mean(n, opts.workers, [&](long i) {
            double c = static_cast<double>(count_in(sub, sampler(i)));
            return c * (c - 1.0);
        }, target);
        recs.push_back(record_from("mixed-overdispersion-3.3", "factorial moment, atoms={1,3}", opts, r));
    }
    {
        Vec lo1{}, hi1{}, lo2{}, hi2{};
        lo1[0] = 0.0; lo1[1] = 0.0; hi1[0] = 1.5; hi1[1] = 4.0;
        lo2[0] = 2.0; lo2[1] = 0.0; hi2[0] = 4.0; hi2[1] = 4.0;
        Window w1(2, lo1, hi1), w2(2, lo2, hi2);
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x16000000);
        double target = z * w1.volume() * z * w2.volume();
        auto r = sharded_mean(n, opts.workers, [&](long i) {
            Configuration gam = sampler(i);
            return static_cast<double>(count_in(w1, gam)) * static_cast<double>(count_in(w2, gam));
        }, target);
        recs.push_back(record_from("poisson-disjoint-independence", "d=2 L=4 z=2", opts, r));
    }
    {
        // thinning: counts in a sub-window of whole-box samples are Poisson
        Vec lo{}, hi{};
        lo[0] = 1.0; lo[1] = 1.0; hi[0] = 2.5; hi[1] = 3.0;
        Window sub(2, lo, hi);
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x17000000);
        const long n_chi = 20000;
        std::vector<long> counts(static_cast<size_t>(n_chi));
        parallel_shards(kShards, opts.workers, [&](int s) {
            long lo_i = n_chi * s / kShards, hi_i = n_chi * (s + 1) / kShards;
            for (long i = lo_i; i < hi_i; ++i)
                counts[static_cast<size_t>(i)] = static_cast<long>(count_in(sub, sampler(i)));
        });
        auto chi = chi_square_poisson(counts, z * sub.volume());
        recs.push_back(record_pvalue("poisson-thinning-chisq", "subwindow 1.5x2 of d=2 L=4 z=2", opts,
                                     n_chi, chi.p_value, 1e-3));
    }
    return recs;
}

// ---------------------------------------------------------------------------
// mecke: GNZ identity for Poisson and for the Gibbs sampler, plus power check

std::vector<IdentityRecord> run_mecke(const VerifyOptions& opts) {
    std::vector<IdentityRecord> recs;

    // Poisson, phi = 0
    {
        const TorusDomain dom(2, 4.0);
        const Window box = Window::whole_box(dom);
        const double z = 2.0;
        const IntensityMeasure sigma = IntensityMeasure::uniform(z);
        Vec lo{}, hi{};
        lo[0] = 0.5; lo[1] = 0.5; hi[0] = 3.5; hi[1] = 3.5;
        Window sub(2, lo, hi);
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x20000000);
        const long n = 100000;

        auto h1 = [&](const Configuration&, const Vec& x) { return sub.contains(x) ? 1.0 : 0.0; };
        auto out1 = mecke_test(sampler, sigma, PairPotential::zero(), h1, sub, n, opts.workers, 8);
        recs.push_back(record_from_z("mecke-poisson-count", "h=1_B, d=2 L=4 z=2", opts,
                                     out1.lhs.n_samples, out1.lhs.mean, out1.lhs.std_error,
                                     out1.rhs.mean, out1.z));

        auto h2 = [&](const Configuration& g, const Vec& x) {
            return sub.contains(x) ? static_cast<double>(count_in(sub, g)) : 0.0;
        };
        auto out2 = mecke_test(sampler, sigma, PairPotential::zero(), h2, sub, n, opts.workers, 8);
        recs.push_back(record_from_z("mecke-poisson-second-moment", "h=N_B 1_B, links eq 2.19", opts,
                                     out2.lhs.n_samples, out2.lhs.mean, out2.lhs.std_error,
                                     out2.rhs.mean, out2.z));
    }

    // Gibbs with tapered Lennard-Jones at z vol = 10
    {
        const TorusDomain dom(2, 5.0);
        const Window box = Window::whole_box(dom);
        const double z = 0.4;
        const IntensityMeasure sigma = IntensityMeasure::uniform(z);
        PairPotential lj = PairPotential::lennard_jones(1.0, 1.0, 2.5, 0.5);
        GibbsSpec spec(dom, z, lj, box, Configuration(dom));
        const long n = 10000;
        auto pool = gibbs_pool(spec, n, opts.seed, 0x21000000, opts.workers);
        auto sampler = pool_sampler(pool);

        auto h1 = [](const Configuration&, const Vec&) { return 1.0; };
        auto out1 = mecke_test(sampler, sigma, lj, h1, box, n, opts.workers, 32);
        recs.push_back(record_from_z("mecke-gibbs-lj", "h=1, lj(1,1,2.5) z*vol=10 thinned 1e4", opts,
                                     out1.lhs.n_samples, out1.lhs.mean, out1.lhs.std_error,
                                     out1.rhs.mean, out1.z));

        Vec lo{}, hi{};
        lo[0] = 1.0; lo[1] = 1.0; hi[0] = 4.0; hi[1] = 4.0;
        Window sub(2, lo, hi);
        auto h2 = [&](const Configuration& g, const Vec& x) {
            return sub.contains(x) ? static_cast<double>(count_in(sub, g)) : 0.0;
        };
        auto out2 = mecke_test(sampler, sigma, lj, h2, sub, n, opts.workers, 32);
        recs.push_back(record_from_z("mecke-gibbs-lj-weighted", "h=N_B 1_B, lj(1,1,2.5) z*vol=10", opts,
                                     out2.lhs.n_samples, out2.lhs.mean, out2.lhs.std_error,
                                     out2.rhs.mean, out2.z));

        auto broken = mecke_test(sampler, sigma, lj, h1, box, n, opts.workers, 32,
                                 /*drop_energy_factor=*/true);
        recs.push_back(record_from_z("mecke-gibbs-power-check", "e^{-E} factor dropped", opts,
                                     broken.lhs.n_samples, broken.lhs.mean, broken.lhs.std_error,
                                     broken.rhs.mean, broken.z, /*expect_fail=*/true));
    }
    return recs;
}

// ---------------------------------------------------------------------------
// ibp: volume-element and integration-by-parts identities

std::vector<IdentityRecord> run_ibp(const VerifyOptions& opts) {
    std::vector<IdentityRecord> recs;
    const TorusDomain dom(2, 4.0);
    const Window box = Window::whole_box(dom);
    const long n = 100000;

    ScalarField f1 = bump2(dom, 1.2, 1.4, 1.1, 0.9);
    ScalarField f2 = bump2(dom, 2.6, 2.4, 1.3, -0.7);
    ScalarField f3 = bump2(dom, 2.0, 1.0, 0.9, 0.8);

    CylinderFunction F1 = tanh_pairing(f1);
    CylinderFunction F2(tanh(Expr::var(0) * Expr::var(1)), {f1, f2});
    CylinderFunction F3(tanh(0.5 * Expr::var(0) + pow_int(Expr::var(1), 2)), {f2, f3});
    CylinderFunction G1 = tanh_pairing(f2);
    CylinderFunction G2(tanh(Expr::var(0) + Expr::var(1)), {f2, f3});
    CylinderFunction G3 = tanh_pairing(f3);

    VectorFieldV0 v1(dom);
    v1.add_axis_component(0, bump2(dom, 2.0, 2.0, 1.4, 1.0));
    VectorFieldV0 v2(dom);
    v2.add_axis_component(0, bump2(dom, 1.5, 2.5, 1.2, 0.6));
    v2.add_axis_component(1, bump2(dom, 2.5, 1.5, 1.0, -0.8));
    VectorFieldV0 v3(dom);
    v3.add_gradient_term(bump2(dom, 2.2, 2.8, 1.3, 1.2));

    struct Triple {
        const CylinderFunction* F;
        const CylinderFunction* G;
        const VectorFieldV0* v;
        const char* name;
    };
    const Triple triples[] = {{&F1, &G1, &v1, "t1"}, {&F2, &G2, &v2, "t2"}, {&F3, &G3, &v3, "t3"}};

    // Free case, uniform intensity (eq 2.14 via theorem 7.11 with phi = 0)
    {
        const IntensityMeasure sigma = IntensityMeasure::uniform(1.5);
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x30000000);
        for (const auto& t : triples) {
            auto r = ibp_test(sampler, PairPotential::zero(), *t.F, *t.G, *t.v, n, opts.workers);
            recs.push_back(record_from(std::string("ibp-free-") + t.name, "d=2 L=4 z=1.5", opts, r));
        }
    }

    // Sigma-case: density intensity, log-derivative correction (eq 2.22)
    {
        ScalarField rho_bump = bump2(dom, 2.0, 2.0, 1.2, 1.0);
        ScalarField rho = ScalarField(dom, 0.8).plus(rho_bump);
        double rho_max = 0.8 + 1.0 * std::exp(-1.0) * 1.000001;
        auto rho_fn = [rho](const Vec& x) { return rho.value(x); };
        const IntensityMeasure sigma = IntensityMeasure::density(rho_fn, rho_max);
        auto beta = [rho](const Vec& x) {
            double v = rho.value(x);
            return (1.0 / v) * rho.gradient(x);
        };
        auto sampler = poisson_sampler(sigma, dom, box, opts.seed, 0x31000000);
        for (const auto& t : triples) {
            auto r = ibp_test(sampler, PairPotential::zero(), *t.F, *t.G, *t.v, n, opts.workers, beta);
            recs.push_back(record_from(std::string("ibp-sigma-") + t.name,
                                       "rho=0.8+bump, beta=grad rho/rho", opts, r));
        }
    }

    // Gibbs case (theorem 7.11 with B_v^phi)
    {
        const TorusDomain dom5(2, 5.0);
        const Window box5 = Window::whole_box(dom5);
        PairPotential lj = PairPotential::lennard_jones(1.0, 1.0, 2.5, 0.5);
        GibbsSpec spec(dom5, 0.4, lj, box5, Configuration(dom5));
        const long n_gibbs = 10000;
        auto pool = gibbs_pool(spec, n_gibbs, opts.seed, 0x32000000, opts.workers);
        auto sampler = pool_sampler(pool);

        ScalarField u1 = bump2(dom5, 1.5, 1.8, 1.4, 0.9);
        ScalarField u2 = bump2(dom5, 3.2, 3.0, 1.6, -0.8);
        ScalarField u3 = bump2(dom5, 2.5, 1.2, 1.1, 0.7);
        CylinderFunction Fg1 = tanh_pairing(u1);
        CylinderFunction Fg2(tanh(Expr::var(0) * Expr::var(1)), {u1, u2});
        CylinderFunction Fg3(tanh(Expr::var(0) + 0.5 * Expr::var(1)), {u2, u3});
        CylinderFunction Gg1 = tanh_pairing(u2);
        CylinderFunction Gg2 = tanh_pairing(u3);
        CylinderFunction Gg3(tanh(Expr::var(0) * Expr::var(0)), {u1});
        VectorFieldV0 w1(dom5);
        w1.add_axis_component(0, bump2(dom5, 2.5, 2.5, 1.8, 1.0));
        VectorFieldV0 w2(dom5);
        w2.add_axis_component(1, bump2(dom5, 2.0, 3.0, 1.5, 0.8));
        VectorFieldV0 w3(dom5);
        w3.add_gradient_term(bump2(dom5, 3.0, 2.0, 1.7, 1.1));

        const Triple gtriples[] = {{&Fg1, &Gg1, &w1, "t1"}, {&Fg2, &Gg2, &w2, "t2"},
                                   {&Fg3, &Gg3, &w3, "t3"}};
        for (const auto& t : gtriples) {
            long rej = 0;
            auto r = ibp_test(sampler, lj, *t.F, *t.G, *t.v, n_gibbs, opts.workers, nullptr, &rej);
            recs.push_back(record_from(std::string("ibp-gibbs-") + t.name,
                                       "lj(1,1,2.5) z*vol=10 thinned", opts, r, false, rej));
        }
    }

    // Volume element identity over a two-atom mixed Poisson (eq 2.14)
    {
        const MixingLaw mixing({{1.0, 0.5}, {3.0, 0.5}});
        const IntensityMeasure unit = IntensityMeasure::uniform(1.0);
        auto sampler = mixed_sampler(mixing, unit, dom, box, opts.seed, 0x33000000);
        std::vector<VfcTerm> V;
        V.emplace_back(F1, v2);
        V.emplace_back(G2, v3);
        auto r = volume_element_test(sampler, V, F2, n, opts.workers);
        recs.push_back(record_from("volume-element-2.14-mixed", "two-atom mixing, two-term V", opts, r));
    }
    return recs;
}

// ---------------------------------------------------------------------------
// semigroup: heat-semigroup Laplace functionals of the free dynamics

std::vector<IdentityRecord> run_semigroup(const VerifyOptions& opts) {
    std::vector<IdentityRecord> recs;
    const TorusDomain dom(1, 4.0);
    const long n_system = 100000;
    const long n_single = 1000000;

    Vec c1{}, c2{};
    c1[0] = 1.2;
    c2[0] = 2.6;
    ScalarField field1 = ScalarField::bump(dom, c1, 1.0, -0.6);
    ScalarField field2 = ScalarField::bump(dom, c2, 0.9, -0.5);

    {
        MixingLaw pure = MixingLaw::point_mass(1.5);
        auto out = laplace_functional_test(pure, {field1}, {0.08}, dom, n_system, n_single,
                                           opts.seed + 11);
        recs.push_back(record_from_z("semigroup-3.26-N1", "d=1 L=4 z=1.5 t=0.08", opts,
                                     out.lhs.n_samples, out.lhs.mean, out.lhs.std_error,
                                     out.rhs_value, out.z_score));
    }
    {
        MixingLaw mixing({{1.0, 0.5}, {2.0, 0.5}});
        auto out = laplace_functional_test(mixing, {field1, field2}, {0.05, 0.12}, dom, n_system,
                                           n_single, opts.seed + 12);
        recs.push_back(record_from_z("semigroup-3.26-N2", "mixed {1,2}, t={0.05,0.12}", opts,
                                     out.lhs.n_samples, out.lhs.mean, out.lhs.std_error,
                                     out.rhs_value, out.z_score));
    }
    {
        // t = 0 reduces to the static Laplace transform; cross-check the
        // system-side Monte Carlo against the quadrature target of eq 2.15.
        const double z = 1.5;
        MixingLaw pure = MixingLaw::point_mass(z);
        auto out = laplace_functional_test(pure, {field1}, {0.0}, dom, n_system, n_single,
                                           opts.seed + 13);
        const Window box = Window::whole_box(dom);
        QuadResult target = laplace_transform_target(
            [&](const Vec& x) { return std::log1p(field1.value(x)); },
            IntensityMeasure::uniform(z), box);
        double z_quad = (out.lhs.mean - target.value) / out.lhs.std_error;
        recs.push_back(record_from_z("semigroup-t0-vs-laplace-2.15", "t=0 against quadrature", opts,
                                     out.lhs.n_samples, out.lhs.mean, out.lhs.std_error, target.value,
                                     z_quad));
    }
    return recs;
}

// ---------------------------------------------------------------------------
// martingale: eq 8.1 for the free and interacting dynamics

std::vector<IdentityRecord> run_martingale(const VerifyOptions& opts) {
    std::vector<IdentityRecord> recs;
    const long n_paths = 10000;
    const double horizon = 0.1;
    const double dt = 1e-3;

    {
        const TorusDomain dom(1, 4.0);
        const Window box = Window::whole_box(dom);
        const IntensityMeasure sigma = IntensityMeasure::uniform(1.2);
        Vec c{};
        c[0] = 2.0;
        CylinderFunction F = tanh_pairing(ScalarField::bump(dom, c, 1.2, 0.9));
        auto start = [&](Rng& rng) { return sample_poisson(sigma, dom, box, rng); };
        auto out = martingale_test(PairPotential::zero(), F, start, horizon, dt, n_paths,
                                   opts.seed + 21);
        recs.push_back(record_from("martingale-free-dt", "d=1 L=4 z=1.2 T=0.1 dt=1e-3", opts,
                                   out.coarse));
        recs.push_back(record_from("martingale-free-dt2", "dt=5e-4", opts, out.fine));
        recs.push_back(record_from_z("martingale-free-consistency", "coarse vs fine", opts,
                                     out.coarse.n_samples, out.coarse.mean - out.fine.mean, 0.0, 0.0,
                                     out.consistency_z));
    }
    {
        const TorusDomain dom(2, 5.0);
        const Window box = Window::whole_box(dom);
        PairPotential lj = PairPotential::lennard_jones(1.0, 1.0, 2.5, 0.5);
        GibbsSpec spec(dom, 0.4, lj, box, Configuration(dom));
        auto pool = gibbs_pool(spec, 2000, opts.seed, 0x40000000, opts.workers);
        Vec c{};
        c[0] = 2.5;
        c[1] = 2.5;
        CylinderFunction F = tanh_pairing(ScalarField::bump(dom, c, 1.5, 0.8));
        auto start = [&pool](Rng& rng) { return pool[rng.uniform_index(pool.size())]; };
        auto out = martingale_test(lj, F, start, horizon, dt, n_paths, opts.seed + 22);
        recs.push_back(record_from("martingale-lj-dt", "lj(1,1,2.5) z*vol=10 T=0.1 dt=1e-3", opts,
                                   out.coarse, false, out.rejected_paths));
        recs.push_back(record_from("martingale-lj-dt2", "dt=5e-4", opts, out.fine, false,
                                   out.rejected_paths));
        recs.push_back(record_from_z("martingale-lj-consistency", "coarse vs fine", opts,
                                     out.coarse.n_samples, out.coarse.mean - out.fine.mean, 0.0, 0.0,
                                     out.consistency_z));
    }
    return recs;
}

// ---------------------------------------------------------------------------
// invariance: the sampled Gibbs measure is preserved by its gradient dynamics

std::vector<IdentityRecord> run_invariance(const VerifyOptions& opts) {
    std::vector<IdentityRecord> recs;

    {
        // free case: Poisson count law in a window is unchanged by free dynamics
        const TorusDomain dom(2, 4.0);
        const Window box = Window::whole_box(dom);
        const double z = 1.5;
        const IntensityMeasure sigma = IntensityMeasure::uniform(z);
        Vec lo{}, hi{};
        lo[0] = 1.0; lo[1] = 1.0; hi[0] = 3.0; hi[1] = 3.0;
        Window sub(2, lo, hi);
        const long n = 10000;
        std::vector<long> counts(static_cast<size_t>(n));
        parallel_shards(kShards, opts.workers, [&](int s) {
            long lo_i = n * s / kShards, hi_i = n * (s + 1) / kShards;
            for (long i = lo_i; i < hi_i; ++i) {
                Rng rng(opts.seed + 31, 0x50000000 + static_cast<uint64_t>(i));
                Configuration g = sample_poisson(sigma, dom, box, rng);
                for (int k = 0; k < 100; ++k) g = free_step(g, 1e-3, rng);
                counts[static_cast<size_t>(i)] = static_cast<long>(count_in(sub, g));
            }
        });
        auto chi = chi_square_poisson(counts, z * sub.volume());
        recs.push_back(record_pvalue("invariance-free-poisson-chisq", "T=0.1 window 2x2", opts, n,
                                     chi.p_value, 1e-3));
    }
    {
        const TorusDomain dom(2, 5.0);
        const Window box = Window::whole_box(dom);
        PairPotential lj = PairPotential::lennard_jones(1.0, 1.0, 2.5, 0.5);
        GibbsSpec spec(dom, 0.4, lj, box, Configuration(dom));
        auto pool = gibbs_pool(spec, 2000, opts.seed, 0x51000000, opts.workers);
        auto rep = invariance_test(lj, pool, 0.1, 5e-4, 10, 2.4, opts.seed + 32);
        recs.push_back(record_from_z("invariance-lj-energy", "mean energy before vs after, T=0.1",
                                     opts, rep.energy_before.n_samples, rep.energy_after.mean,
                                     rep.energy_after.std_error, rep.energy_before.mean,
                                     rep.energy_z));
        IdentityRecord hist = record_from_z("invariance-lj-pair-histogram",
                                            "max |z| over 10 bins, Bonferroni at 4", opts,
                                            rep.energy_before.n_samples, rep.max_abs_bin_z, 0.0, 0.0,
                                            rep.max_abs_bin_z);
        hist.pass = rep.max_abs_bin_z < kZThreshold;
        recs.push_back(hist);
    }
    return recs;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"poisson-identities", "mecke", "ibp", "semigroup", "martingale", "invariance", "all"};
}

std::vector<IdentityRecord> run_suite(const std::string& name, const VerifyOptions& opts) {
    if (name == "poisson-identities") return run_poisson_identities(opts);
    if (name == "mecke") return run_mecke(opts);
    if (name == "ibp") return run_ibp(opts);
    if (name == "semigroup") return run_semigroup(opts);
    if (name == "martingale") return run_martingale(opts);
    if (name == "invariance") return run_invariance(opts);
    if (name == "all") {
        std::vector<IdentityRecord> all;
        for (const auto& suite : {"poisson-identities", "mecke", "ibp", "semigroup", "martingale",
                                  "invariance"}) {
            auto part = run_suite(suite, opts);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("run_suite: unknown suite '" + name + "'");
}

}  // namespace confsim

#include "confsim/gibbs.hpp"

#include "confsim/estimator.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>

namespace confsim {

GibbsSpec::GibbsSpec(const TorusDomain& d, double activity, PairPotential potential, const Window& w,
                     Configuration bc)
    : dom(d), z(activity), phi(std::move(potential)), window(w), boundary(std::move(bc)) {
    window.validate_in(dom);
    if (!(z > 0) || !std::isfinite(z)) throw std::invalid_argument("GibbsSpec: activity must be positive");
    if (!std::isfinite(z * window.volume())) throw std::invalid_argument("GibbsSpec: z * vol overflows");
    for (size_t i = 0; i < boundary.size(); ++i)
        if (window.contains(boundary.point(i)))
            throw std::invalid_argument("GibbsSpec: boundary point inside the window");
}

void McmcParams::validate(bool canonical) const {
    if (p_birth < 0 || p_death < 0 || p_move < 0 ||
        std::abs(p_birth + p_death + p_move - 1.0) > 1e-12)
        throw std::invalid_argument("McmcParams: move probabilities must be nonnegative and sum to 1");
    if (canonical && (p_birth != 0 || p_death != 0))
        throw std::invalid_argument("McmcParams: canonical runs force p_birth = p_death = 0");
    if (p_move > 0 && !(move_scale > 0))
        throw std::invalid_argument("McmcParams: move_scale must be positive");
    if (burn_in < 0 || thinning < 1 || n_samples < 1)
        throw std::invalid_argument("McmcParams: bad chain lengths");
}

namespace {

class Chain {
public:
    Chain(const GibbsSpec& spec, const McmcParams& params)
        : spec_(spec), params_(params), dom_(spec.dom),
          whole_box_(is_whole_box(spec.window, spec.dom)),
          boundary_pts_(config_points(spec.boundary)),
          boundary_cells_(spec.phi.is_zero() || boundary_pts_.empty()
                              ? nullptr
                              : std::make_unique<CellList>(dom_, spec.phi.r_cut(), boundary_pts_)) {
        if (!spec.phi.is_zero() && spec.phi.r_cut() > 0.5 * dom_.L + 1e-12)
            throw std::invalid_argument("gc_sample: interaction range exceeds half the box");
    }

    static bool is_whole_box(const Window& w, const TorusDomain& dom) {
        for (int a = 0; a < dom.d; ++a)
            if (w.lower[a] != 0.0 || w.upper[a] != dom.L) return false;
        return true;
    }

    // Energy gained by inserting x against current points and the boundary.
    double insertion_energy(const std::vector<Vec>& pts, const Vec& x, size_t skip) const {
        const PairPotential& phi = spec_.phi;
        if (phi.is_zero()) return 0.0;
        double e = 0;
        for (size_t j = 0; j < pts.size(); ++j) {
            if (j == skip) continue;
            double r = dom_.distance(x, pts[j]);
            if (r < phi.r_cut()) {
                e += phi.eval(r);
                if (e == kInf) return kInf;
            }
        }
        if (boundary_cells_) {
            boundary_cells_->for_neighbors_of(x, [&](size_t j) {
                double r = dom_.distance(x, boundary_pts_[j]);
                if (r < phi.r_cut()) e += phi.eval(r);
            });
        }
        return e;
    }

    bool accept(double log_ratio, Rng& rng) const {
        if (params_.force_accept) return true;
        if (log_ratio >= 0) return true;
        if (log_ratio == -kInf) return false;
        return std::log(rng.uniform() + 1e-300) < log_ratio;
    }

    void gc_step(std::vector<Vec>& pts, Rng& rng, McmcDiagnostics& diag) const {
        ++diag.proposals;
        const double zvol = spec_.z * spec_.window.volume();
        double u = rng.uniform();
        if (u < params_.p_birth) {
            Vec x = rng.uniform_in(spec_.window);
            double dE = insertion_energy(pts, x, SIZE_MAX);
            double log_ratio = std::log(params_.p_death / params_.p_birth) +
                               std::log(zvol / (static_cast<double>(pts.size()) + 1.0)) - dE;
            if (accept(log_ratio, rng)) {
                pts.push_back(x);
                ++diag.accepted;
            }
        } else if (u < params_.p_birth + params_.p_death) {
            if (pts.empty()) return;
            size_t i = rng.uniform_index(pts.size());
            double dE = insertion_energy(pts, pts[i], i);
            double log_ratio = std::log(params_.p_birth / params_.p_death) +
                               std::log(static_cast<double>(pts.size()) / zvol) + dE;
            if (accept(log_ratio, rng)) {
                pts[i] = pts.back();
                pts.pop_back();
                ++diag.accepted;
            }
        } else {
            move_step(pts, rng, diag);
        }
    }

    void move_step(std::vector<Vec>& pts, Rng& rng, McmcDiagnostics& diag) const {
        if (pts.empty()) return;
        size_t i = rng.uniform_index(pts.size());
        Vec proposal = pts[i] + rng.normal_vec(dom_.d, params_.move_scale);
        proposal = dom_.wrap(proposal);
        if (!whole_box_ && !spec_.window.contains(proposal)) return;
        double e_old = insertion_energy(pts, pts[i], i);
        double e_new = insertion_energy(pts, proposal, i);
        if (accept(e_old - e_new, rng)) {
            pts[i] = proposal;
            ++diag.accepted;
        }
    }

    Configuration snapshot(const std::vector<Vec>& pts) const {
        Configuration g(dom_);
        for (const Vec& p : pts) g.push_back_unchecked(p);
        return g;
    }

    const GibbsSpec& spec_;
    const McmcParams& params_;
    const TorusDomain& dom_;
    bool whole_box_;
    std::vector<Vec> boundary_pts_;
    std::unique_ptr<CellList> boundary_cells_;
};

}  // namespace

std::vector<Configuration> gc_sample(const GibbsSpec& spec, const McmcParams& params, Rng& rng,
                                     McmcDiagnostics* diag) {
    params.validate();
    Chain chain(spec, params);
    McmcDiagnostics local;
    std::vector<Vec> pts;  // empty start is always feasible

    for (long k = 0; k < params.burn_in; ++k) chain.gc_step(pts, rng, local);

    std::vector<Configuration> out;
    out.reserve(static_cast<size_t>(params.n_samples));
    for (long s = 0; s < params.n_samples; ++s) {
        for (long k = 0; k < params.thinning; ++k) chain.gc_step(pts, rng, local);
        out.push_back(chain.snapshot(pts));
    }
    if (diag) *diag = local;
    return out;
}

std::vector<Configuration> canonical_sample(const GibbsSpec& spec, long n, const McmcParams& params,
                                            Rng& rng, McmcDiagnostics* diag) {
    params.validate(/*canonical=*/true);
    if (n < 0) throw std::invalid_argument("canonical_sample: negative count");
    Chain chain(spec, params);
    McmcDiagnostics local;

    std::vector<Vec> pts;
    if (n > 0) {
        const long max_attempts = 1000;
        bool found = false;
        for (long attempt = 0; attempt < max_attempts && !found; ++attempt) {
            pts.clear();
            double e = 0;
            for (long i = 0; i < n; ++i) {
                Vec x = rng.uniform_in(spec.window);
                e += chain.insertion_energy(pts, x, SIZE_MAX);
                pts.push_back(x);
                if (e == kInf) break;
            }
            found = e < kInf;
        }
        if (!found) throw std::runtime_error("canonical_sample: feasible-start search exhausted");
    }

    for (long k = 0; k < params.burn_in; ++k) {
        ++local.proposals;
        chain.move_step(pts, rng, local);
    }
    std::vector<Configuration> out;
    out.reserve(static_cast<size_t>(params.n_samples));
    for (long s = 0; s < params.n_samples; ++s) {
        for (long k = 0; k < params.thinning; ++k) {
            ++local.proposals;
            chain.move_step(pts, rng, local);
        }
        out.push_back(chain.snapshot(pts));
    }
    if (diag) *diag = local;
    return out;
}

CorrelationEstimate estimate_correlations(const std::vector<Configuration>& samples,
                                          const Window& window, int n_bins, double r_max) {
    if (samples.size() < 2) throw std::invalid_argument("estimate_correlations: need at least 2 samples");
    if (n_bins < 1) throw std::invalid_argument("estimate_correlations: need at least one bin");
    const TorusDomain& dom = samples.front().domain();
    if (!(r_max > 0) || r_max > 0.5 * dom.L + 1e-12)
        throw std::invalid_argument("estimate_correlations: bin radii must stay below L/2");

    const double vol = window.volume();
    const double width = r_max / n_bins;

    std::vector<RunningStat> pair_stats(static_cast<size_t>(n_bins));
    RunningStat count_stat;
    for (const auto& g : samples) {
        Configuration in = restrict_to(g, window);
        count_stat.add(static_cast<double>(in.size()));
        std::vector<double> counts(static_cast<size_t>(n_bins), 0.0);
        std::vector<Vec> pts = config_points(in);
        for (size_t i = 0; i < pts.size(); ++i) {
            for (size_t j = i + 1; j < pts.size(); ++j) {
                double r = dom.distance(pts[i], pts[j]);
                if (r < r_max) counts[static_cast<size_t>(r / width)] += 1.0;
            }
        }
        for (int b = 0; b < n_bins; ++b) pair_stats[static_cast<size_t>(b)].add(counts[static_cast<size_t>(b)]);
    }

    CorrelationEstimate est;
    est.intensity = count_stat.mean() / vol;
    est.intensity_se = count_stat.std_error() / vol;

    // d-ball volume coefficient
    const int d = dom.d;
    const double unit_ball = std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);

    double sup_rho2 = 0;
    for (int b = 0; b < n_bins; ++b) {
        double lo = b * width, hi = (b + 1) * width;
        est.bin_lo.push_back(lo);
        est.bin_hi.push_back(hi);
        double shell = unit_ball * (std::pow(hi, d) - std::pow(lo, d));
        double reference = 0.5 * est.intensity * est.intensity * vol * shell;
        const auto& st = pair_stats[static_cast<size_t>(b)];
        bool empty = st.mean() == 0;
        est.empty_bin.push_back(empty);
        if (reference > 0 && !empty) {
            est.g2.push_back(st.mean() / reference);
            est.g2_se.push_back(st.std_error() / reference);
            sup_rho2 = std::max(sup_rho2, est.g2.back() * est.intensity * est.intensity);
        } else {
            est.g2.push_back(0.0);
            est.g2_se.push_back(0.0);
        }
    }
    est.xi_hat = std::max(est.intensity, std::sqrt(sup_rho2));
    return est;
}

}  // namespace confsim

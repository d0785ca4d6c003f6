#include "confsim/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace confsim {

namespace {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Newton iteration on Legendre polynomials; standard construction.
Rule make_rule(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

const Rule& cached_rule(int order) {
    static std::map<int, Rule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int order) { return cached_rule(order).nodes; }
const std::vector<double>& gl_weights(int order) { return cached_rule(order).weights; }

double integrate_window(const std::function<double(const Vec&)>& f, const Window& w, int order,
                        int panels) {
    const auto& nodes = gl_nodes(order);
    const auto& wts = gl_weights(order);
    const int d = w.dim;
    if (panels < 1) throw std::invalid_argument("integrate_window: panels must be >= 1");

    // Per-axis mapped nodes and weights over all panels.
    std::vector<std::vector<double>> ax_nodes(d), ax_wts(d);
    for (int a = 0; a < d; ++a) {
        const double step = (w.upper[a] - w.lower[a]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = w.lower[a] + (p + 0.5) * step;
            const double half = 0.5 * step;
            for (size_t i = 0; i < nodes.size(); ++i) {
                ax_nodes[a].push_back(mid + half * nodes[i]);
                ax_wts[a].push_back(half * wts[i]);
            }
        }
    }

    const size_t per_axis = nodes.size() * static_cast<size_t>(panels);
    std::vector<size_t> idx(d, 0);
    Vec x{};
    double total = 0;
    while (true) {
        double wt = 1;
        for (int a = 0; a < d; ++a) {
            x[a] = ax_nodes[a][idx[a]];
            wt *= ax_wts[a][idx[a]];
        }
        total += wt * f(x);
        int a = 0;
        for (; a < d; ++a) {
            if (++idx[a] < per_axis) break;
            idx[a] = 0;
        }
        if (a == d) break;
    }
    return total;
}

QuadResult integrate_window_checked(const std::function<double(const Vec&)>& f, const Window& w,
                                    int order, int check_order, double rel_tol, int panels) {
    double v1 = integrate_window(f, w, order, panels);
    double v2 = integrate_window(f, w, check_order, panels);
    double err = std::abs(v2 - v1);
    // Mixed criterion: relative where the integral has size, absolute near zero.
    if (err > rel_tol * std::max(std::abs(v2), 1.0))
        throw QuadratureError("integrate_window_checked: no convergence at requested orders");
    return {v2, err};
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int order,
                    int panels) {
    Vec lo{}, hi{};
    lo[0] = a;
    hi[0] = b;
    return integrate_window([&](const Vec& x) { return f(x[0]); }, Window(1, lo, hi), order, panels);
}

}  // namespace confsim

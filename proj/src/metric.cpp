#include "confsim/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "confsim/potential.hpp"

namespace confsim {

bool MatchingResult::finite() const { return std::isfinite(cost); }

// Jonker-Volgenant style row-by-row augmentation with dual potentials; O(n^3).
std::vector<size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
    const size_t n = cost.size();
    for (const auto& row : cost)
        if (row.size() != n) throw std::invalid_argument("solve_assignment: matrix not square");
    if (n == 0) return {};

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<size_t> match(n + 1, n);  // match[col] = row, n = free

    for (size_t i = 0; i < n; ++i) {
        std::vector<double> min_slack(n + 1, inf);
        std::vector<size_t> slack_from(n + 1, n);
        std::vector<bool> visited(n + 1, false);
        size_t j0 = n;  // virtual column holding the current row
        match[n] = i;
        do {
            visited[j0] = true;
            size_t i0 = match[j0];
            double delta = inf;
            size_t j1 = n;
            for (size_t j = 0; j < n; ++j) {
                if (visited[j]) continue;
                double slack = cost[i0][j] - u[i0] - v[j];
                if (slack < min_slack[j]) {
                    min_slack[j] = slack;
                    slack_from[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (size_t j = 0; j <= n; ++j) {
                if (visited[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != n);
        // augment along the alternating path
        while (j0 != n) {
            size_t j1 = slack_from[j0];
            match[j0] = match[j1];
            j0 = j1;
        }
    }

    std::vector<size_t> assignment(n);
    for (size_t j = 0; j < n; ++j)
        if (match[j] != n) assignment[match[j]] = j;
    return assignment;
}

MatchingResult rho(const Configuration& gamma, const Configuration& omega) {
    if (!(gamma.domain() == omega.domain()))
        throw std::invalid_argument("rho: configurations on different domains");
    MatchingResult out;
    if (gamma.size() != omega.size()) {
        out.cost = kInf;
        return out;
    }
    const size_t n = gamma.size();
    if (n == 0) {
        out.cost = 0;
        return out;
    }
    const TorusDomain& dom = gamma.domain();
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            cost[i][j] = dom.distance2(gamma.point(i), omega.point(j));

    out.assignment = solve_assignment(cost);

    // canonical total: per-pair squared distances summed in sorted order
    std::vector<double> terms(n);
    for (size_t i = 0; i < n; ++i) terms[i] = cost[i][out.assignment[i]];
    std::sort(terms.begin(), terms.end());
    double total = 0;
    for (double t : terms) total += t;
    out.cost = std::sqrt(total);
    return out;
}

double rho_to_set(const Configuration& gamma, const std::vector<Configuration>& set) {
    if (set.empty()) throw std::invalid_argument("rho_to_set: empty set");
    double best = kInf;
    for (const auto& omega : set) best = std::min(best, rho(gamma, omega).cost);
    return best;
}

LipschitzReport lipschitz_certificate(const ScalarField& f,
                                      const std::vector<std::pair<Configuration, Configuration>>& pairs,
                                      int grid_per_axis) {
    LipschitzReport rep;
    rep.lip_constant = 1.01 * f.sup_grad_norm_on_grid(grid_per_axis);
    for (size_t k = 0; k < pairs.size(); ++k) {
        const auto& [gamma, omega] = pairs[k];
        if (gamma.size() != omega.size())
            throw std::invalid_argument("lipschitz_certificate: pair with unequal cardinality");
        auto value = [&](const Configuration& g) {
            double s = 0;
            for (size_t i = 0; i < g.size(); ++i) s += f.value(g.point(i));
            return s;
        };
        double lhs = std::abs(value(gamma) - value(omega));
        double bound = rep.lip_constant * std::sqrt(static_cast<double>(gamma.size())) *
                       rho(gamma, omega).cost;
        ++rep.checked;
        if (lhs > bound + 1e-12) {
            rep.pass = false;
            rep.witness = static_cast<long>(k);
            rep.lhs = lhs;
            rep.bound = bound;
            return rep;
        }
    }
    return rep;
}

}  // namespace confsim

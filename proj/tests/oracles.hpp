#pragma once
// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "mssc/instance.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Dense two-phase tableau simplex with Bland's rule. Solves
//   min c'x  s.t.  A x (sense) b,  0 <= x <= ub  (ub may be +inf).
// Returns nullopt when infeasible; unbounded problems are not expected here.
struct DenseLp {
    std::vector<double> c;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<int> sense;  // +1: >=, -1: <=, 0: =
    std::vector<double> ub;  // per column
};

inline std::optional<double> tableau_solve(DenseLp lp) {
    const double eps = 1e-10;
    const std::size_t n0 = lp.c.size();
    // Finite upper bounds become <= rows.
    for (std::size_t j = 0; j < n0; ++j) {
        if (j < lp.ub.size() && std::isfinite(lp.ub[j])) {
            std::vector<double> row(n0, 0.0);
            row[j] = 1.0;
            lp.a.push_back(row);
            lp.b.push_back(lp.ub[j]);
            lp.sense.push_back(-1);
        }
    }
    const std::size_t m = lp.a.size();
    // Columns: originals, one slack/surplus per inequality row, one artificial per row.
    std::size_t n_slack = 0;
    for (auto s : lp.sense) n_slack += s != 0;
    const std::size_t n = n0 + n_slack + m;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + 1, 0.0));
    std::vector<std::size_t> basis(m);
    std::size_t slack = n0;
    for (std::size_t i = 0; i < m; ++i) {
        double sign = lp.b[i] < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n0; ++j) t[i][j] = sign * lp.a[i][j];
        if (lp.sense[i] != 0) {
            t[i][slack++] = sign * (lp.sense[i] > 0 ? -1.0 : 1.0);
        }
        t[i][n0 + n_slack + i] = 1.0;
        t[i][n] = sign * lp.b[i];
        basis[i] = n0 + n_slack + i;
    }
    auto pivot = [&](std::size_t r, std::size_t col) {
        const double p = t[r][col];
        for (auto& v : t[r]) v /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == r || std::abs(t[i][col]) < 1e-15) continue;
            const double f = t[i][col];
            for (std::size_t j = 0; j <= n; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = col;
    };
    auto run = [&](const std::vector<double>& cost, std::size_t allowed) {
        // Objective row: reduced costs.
        for (std::size_t j = 0; j <= n; ++j) t[m][j] = j < n ? cost[j] : 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double cb = cost[basis[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= n; ++j) t[m][j] -= cb * t[i][j];
        }
        for (int it = 0; it < 100000; ++it) {
            std::size_t enter = n;
            for (std::size_t j = 0; j < allowed; ++j)
                if (t[m][j] < -eps) {
                    enter = j;
                    break;
                }
            if (enter == n) return true;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] > eps) {
                    const double r = t[i][n] / t[i][enter];
                    if (r < best - 1e-12 || (std::abs(r - best) <= 1e-12 && basis[i] < basis[leave])) {
                        best = r;
                        leave = i;
                    }
                }
            }
            if (leave == m) return false;  // unbounded
            pivot(leave, enter);
        }
        return false;
    };
    std::vector<double> phase1(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1[n0 + n_slack + i] = 1.0;
    run(phase1, n);
    if (-t[m][n] > 1e-7) return std::nullopt;
    // Drive artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n0 + n_slack) continue;
        for (std::size_t j = 0; j < n0 + n_slack; ++j)
            if (std::abs(t[i][j]) > 1e-9) {
                pivot(i, j);
                break;
            }
    }
    std::vector<double> phase2(n, 0.0);
    for (std::size_t j = 0; j < n0; ++j) phase2[j] = lp.c[j];
    // Artificials stay at zero: forbid them from entering.
    if (!run(phase2, n0 + n_slack)) return std::nullopt;
    return -t[m][n];
}

// ---------------------------------------------------------------------------
// Exact MSSC optimum by enumerating every partition into exactly k blocks.
inline double sse(const std::vector<mssc::Point>& pts, const std::vector<std::size_t>& members) {
    if (members.empty()) return 0.0;
    double mx = 0, my = 0;
    for (auto i : members) {
        mx += pts[i].x;
        my += pts[i].y;
    }
    mx /= static_cast<double>(members.size());
    my /= static_cast<double>(members.size());
    double s = 0;
    for (auto i : members) s += (pts[i].x - mx) * (pts[i].x - mx) + (pts[i].y - my) * (pts[i].y - my);
    return s;
}

inline double mssc_optimum(const std::vector<mssc::Point>& pts, std::size_t k) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> label(n, 0);
    double best = std::numeric_limits<double>::infinity();
    // Restricted growth strings.
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (n - i < k - std::min(k, used)) return;
        if (i == n) {
            if (used != k) return;
            std::vector<std::vector<std::size_t>> blocks(k);
            for (std::size_t p = 0; p < n; ++p) blocks[label[p]].push_back(p);
            double f = 0;
            for (auto& bl : blocks) f += sse(pts, bl);
            best = std::min(best, f);
            return;
        }
        for (std::size_t l = 0; l <= used && l < k; ++l) {
            label[i] = l;
            rec(i + 1, std::max(used, l + 1));
        }
    };
    rec(0, 0);
    return best;
}

// Every nonempty subset S of the points: sigma + sum_{i in S} (|p_i - bar(S)|^2 - lambda_i),
// minimized over subsets accepted by `feasible`.
inline double subset_minimum(const std::vector<mssc::Point>& pts, const std::vector<double>& lambda, double sigma,
                             const std::function<bool(unsigned)>& feasible = {}) {
    const std::size_t n = pts.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (feasible && !feasible(mask)) continue;
        std::vector<std::size_t> m;
        double lam = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) {
                m.push_back(i);
                lam += lambda[i];
            }
        best = std::min(best, sigma + sse(pts, m) - lam);
    }
    return best;
}

// ---------------------------------------------------------------------------
inline std::vector<mssc::Point> random_points(std::mt19937_64& rng, std::size_t n, double scale = 10.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<mssc::Point> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

// Gaussian blobs around k random centers.
inline std::vector<mssc::Point> clustered_points(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                                 double spread = 1.0, double scale = 30.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::normal_distribution<double> g(0.0, spread);
    std::vector<mssc::Point> centers(k);
    for (auto& c : centers) c = {u(rng), u(rng)};
    std::vector<mssc::Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {centers[i % k].x + g(rng), centers[i % k].y + g(rng)};
    return pts;
}

}  // namespace oracle

#include "mssc/branching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_set>

#include "column_collector.hpp"
#include "mssc/arrangement.hpp"
#include "mssc/error.hpp"
#include "mssc/lp.hpp"

namespace mssc {

namespace {

PointPair ordered(std::size_t i, std::size_t j) { return i < j ? PointPair{i, j} : PointPair{j, i}; }

constexpr double kFractional = 1e-6;

}  // namespace

BranchState BranchState::with_must_link(std::size_t i, std::size_t j) const {
    BranchState s = *this;
    s.must_link.push_back(ordered(i, j));
    ++s.depth;
    return s;
}

BranchState BranchState::with_cannot_link(std::size_t i, std::size_t j) const {
    BranchState s = *this;
    s.cannot_link.push_back(ordered(i, j));
    ++s.depth;
    return s;
}

bool BranchState::respects(const PointSet& members) const {
    for (const auto& [i, j] : must_link)
        if (members.contains(i) != members.contains(j)) return false;
    for (const auto& [i, j] : cannot_link)
        if (members.contains(i) && members.contains(j)) return false;
    return true;
}

GroupGraph contract(const BranchState& state, std::size_t n) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [i, j] : state.must_link) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    GroupGraph g;
    g.group_of.assign(n, 0);
    std::vector<std::size_t> root_group(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (root_group[r] == n) {
            root_group[r] = g.groups.size();
            g.groups.emplace_back();
        }
        g.group_of[i] = root_group[r];
        g.groups[root_group[r]].push_back(i);
    }
    g.conflicts.resize(g.groups.size());
    for (const auto& [i, j] : state.cannot_link) {
        const std::size_t a = g.group_of[i], b = g.group_of[j];
        if (a == b) {
            g.consistent = false;
            continue;
        }
        g.conflicts[a].push_back(b);
        g.conflicts[b].push_back(a);
    }
    for (auto& c : g.conflicts) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    return g;
}

bool is_bipartite_cl_graph(const BranchState& state, std::size_t n) {
    const GroupGraph g = contract(state, n);
    if (!g.consistent) return false;
    std::vector<int> color(g.groups.size(), -1);
    for (std::size_t s = 0; s < g.groups.size(); ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        std::queue<std::size_t> q;
        q.push(s);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (auto v : g.conflicts[u]) {
                if (color[v] < 0) {
                    color[v] = 1 - color[u];
                    q.push(v);
                } else if (color[v] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

BranchPair find_branch_pair(std::span<const double> z, std::span<const Column> pool) {
    std::vector<std::size_t> frac;
    for (std::size_t t = 0; t < z.size(); ++t)
        if (z[t] > kFractional && z[t] < 1.0 - kFractional) frac.push_back(t);
    if (frac.empty()) throw Error(ErrorCode::SolutionIntegral, "master solution is integral");

    std::vector<std::size_t> support;
    for (std::size_t t = 0; t < z.size(); ++t)
        if (z[t] > 1e-9) support.push_back(t);

    // Candidate pairs: both points inside a fractional column.
    std::map<PointPair, char> seen;
    BranchPair best;
    double best_score = -1.0;
    for (auto t1 : frac) {
        const auto members = pool[t1].members.members();
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                const PointPair p{members[a], members[b]};
                if (!seen.emplace(p, 1).second) continue;
                double f = 0.0;
                for (auto t : support)
                    if (pool[t].members.contains(p.first) && pool[t].members.contains(p.second)) f += z[t];
                if (f <= kFractional || f >= 1.0 - kFractional) continue;
                // Second witness: a fractional column holding exactly one of them.
                bool witness = false;
                for (auto t2 : frac) {
                    if (pool[t2].members.contains(p.first) != pool[t2].members.contains(p.second)) {
                        witness = true;
                        break;
                    }
                }
                if (!witness) continue;
                const double score = std::min(f, 1.0 - f);
                if (score > best_score + 1e-12 ||
                    (std::abs(score - best_score) <= 1e-12 && p < PointPair{best.i, best.j})) {
                    best_score = score;
                    best = {p.first, p.second, f};
                }
            }
        }
    }
    if (best_score < 0.0) throw Error(ErrorCode::SolutionIntegral, "no fractional pair found");
    return best;
}

namespace {

// Maximum-weight independent set on a small conflict graph; weights > 0.
class MwisSolver {
public:
    MwisSolver(const std::vector<double>& weight, const std::vector<std::vector<std::size_t>>& adj)
        : w_(weight), adj_(adj), chosen_(weight.size(), 0), best_set_(weight.size(), 0) {}

    std::vector<char> solve() {
        std::vector<char> alive(w_.size(), 1);
        recurse(alive, 0.0);
        return best_set_;
    }

private:
    void recurse(std::vector<char>& alive, double value) {
        double bound = value;
        std::size_t pick = w_.size();
        std::size_t pick_deg = 0;
        for (std::size_t v = 0; v < w_.size(); ++v) {
            if (!alive[v]) continue;
            bound += w_[v];
            std::size_t deg = 0;
            for (auto u : adj_[v]) deg += alive[u];
            if (pick == w_.size() || deg > pick_deg) {
                pick = v;
                pick_deg = deg;
            }
        }
        if (bound <= best_ + 1e-12) return;
        if (pick == w_.size() || pick_deg == 0) {
            // Remaining vertices are isolated: take them all.
            for (std::size_t v = 0; v < w_.size(); ++v)
                if (alive[v]) chosen_[v] = 1;
            best_ = bound;
            best_set_ = chosen_;
            for (std::size_t v = 0; v < w_.size(); ++v)
                if (alive[v]) chosen_[v] = 0;
            return;
        }
        // Include pick.
        std::vector<std::size_t> removed{pick};
        for (auto u : adj_[pick])
            if (alive[u]) removed.push_back(u);
        for (auto u : removed) alive[u] = 0;
        chosen_[pick] = 1;
        recurse(alive, value + w_[pick]);
        chosen_[pick] = 0;
        for (auto u : removed) alive[u] = 1;
        // Exclude pick.
        alive[pick] = 0;
        recurse(alive, value);
        alive[pick] = 1;
    }

    const std::vector<double>& w_;
    const std::vector<std::vector<std::size_t>>& adj_;
    std::vector<char> chosen_;
    std::vector<char> best_set_;
    double best_ = 0.0;
};

}  // namespace

namespace {

lp::LpSolution relaxation(const GroupGraph& g, const std::vector<double>& coef) {
    const std::size_t ng = g.groups.size();
    lp::LinearProgram prob;
    for (std::size_t a = 0; a < ng; ++a) prob.add_column({coef[a], 0.0, 1.0, {}, {}});
    for (std::size_t a = 0; a < ng; ++a)
        for (auto b : g.conflicts[a])
            if (a < b) {
                const auto r = prob.add_row(lp::RowSense::Less, 1.0);
                prob.add_entry(r, a, 1.0);
                prob.add_entry(r, b, 1.0);
            }
    return lp::solve(prob);
}

std::vector<double> group_coefficients(std::span<const Point> points, std::span<const double> lambda, Point y,
                                       const GroupGraph& g) {
    std::vector<double> coef(g.groups.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) coef[g.group_of[i]] += squared_distance(points[i], y) - lambda[i];
    return coef;
}

}  // namespace

std::vector<double> assignment_lp_relaxation(std::span<const Point> points, std::span<const double> lambda, Point y,
                                             const BranchState& state) {
    const GroupGraph g = contract(state, points.size());
    if (!g.consistent) throw Error(ErrorCode::InfeasibleConstraints, "cannot-link pair inside a must-link group");
    const auto sol = relaxation(g, group_coefficients(points, lambda, y, g));
    if (sol.status != lp::Status::Optimal) throw Error(ErrorCode::NumericalFailure, "assignment relaxation failed");
    return sol.primal;
}

PointSet assignment_step(std::span<const Point> points, std::span<const double> lambda, Point y,
                         const BranchState& state, AssignmentInfo* info) {
    const std::size_t n = points.size();
    const GroupGraph g = contract(state, n);
    if (!g.consistent) throw Error(ErrorCode::InfeasibleConstraints, "cannot-link pair inside a must-link group");
    const std::size_t ng = g.groups.size();
    const std::vector<double> coef = group_coefficients(points, lambda, y, g);

    std::vector<char> take(ng, 0);
    // Free groups follow the sign of their coefficient.
    std::vector<std::size_t> constrained;
    for (std::size_t a = 0; a < ng; ++a) {
        if (coef[a] >= 0.0) continue;
        bool has_conflict = false;
        for (auto b : g.conflicts[a]) has_conflict |= coef[b] < 0.0;
        if (has_conflict) constrained.push_back(a);
        else take[a] = 1;
    }

    bool solved = false;
    if (info) *info = AssignmentInfo{};
    if (!constrained.empty() && is_bipartite_cl_graph(state, n)) {
        // LP relaxation over all groups; integral by total unimodularity.
        const auto sol = relaxation(g, coef);
        if (sol.status == lp::Status::Optimal) {
            bool integral = true;
            for (auto v : sol.primal) integral &= std::min(std::abs(v), std::abs(1.0 - v)) <= 1e-7;
            if (info) {
                info->used_lp = true;
                info->lp_values = sol.primal;
            }
            if (integral) {
                for (std::size_t a = 0; a < ng; ++a) take[a] = sol.primal[a] > 0.5;
                solved = true;
            }
        }
    }
    if (!solved && !constrained.empty()) {
        std::vector<std::size_t> local(ng, ng);
        for (std::size_t a = 0; a < constrained.size(); ++a) local[constrained[a]] = a;
        std::vector<double> w(constrained.size());
        std::vector<std::vector<std::size_t>> adj(constrained.size());
        for (std::size_t a = 0; a < constrained.size(); ++a) {
            w[a] = -coef[constrained[a]];
            for (auto b : g.conflicts[constrained[a]])
                if (local[b] < ng) adj[a].push_back(local[b]);
        }
        const auto pick = MwisSolver(w, adj).solve();
        for (std::size_t a = 0; a < constrained.size(); ++a) take[constrained[a]] = pick[a];
    }

    PointSet out(n);
    double obj = 0.0;
    for (std::size_t a = 0; a < ng; ++a) {
        if (!take[a]) continue;
        obj += coef[a];
        for (auto i : g.groups[a]) out.insert(i);
    }
    if (info) info->objective = obj;
    return out;
}

PricingOutput heuristic_constrained_pricing(const Instance& instance, std::span<const double> lambda, double sigma,
                                            const BranchState& state, std::span<const PointSet> seeds,
                                            const AggregationPartition* q, std::size_t max_columns,
                                            double tolerance, std::vector<HeuristicTrace>* traces) {
    ColumnCollector collector(instance, lambda, sigma, tolerance, q, max_columns);
    const auto pts = instance.points();
    for (const auto& seed : seeds) {
        HeuristicTrace trace;
        if (seed.empty()) continue;
        Point y = cluster_cost(instance, seed).centroid;
        std::unordered_set<PointSet, PointSetHash> visited;
        for (std::size_t it = 0; it < 200; ++it) {
            AssignmentInfo info;
            PointSet s = assignment_step(pts, lambda, y, state, &info);
            trace.objective.push_back(sigma + info.objective);
            ++trace.iterations;
            if (s.empty() || !visited.insert(s).second) break;
            collector.visit(s.members());
            y = cluster_cost(instance, s).centroid;
        }
        if (traces) traces->push_back(std::move(trace));
    }
    PricingOutput out = collector.finish();
    out.exact = false;
    return out;
}

namespace {

// Weighted group statistics: weight, sums and squared sums, dual mass.
struct GroupData {
    std::vector<double> w, sx, sy, sq, lam;
    std::vector<Point> centroid;
    std::vector<double> scatter;
};

GroupData group_data(const Instance& instance, std::span<const double> lambda, const GroupGraph& g) {
    GroupData d;
    const std::size_t ng = g.groups.size();
    d.w.resize(ng);
    d.sx.resize(ng);
    d.sy.resize(ng);
    d.sq.resize(ng);
    d.lam.resize(ng);
    d.centroid.resize(ng);
    d.scatter.resize(ng);
    // Shift to the global mean so the quadratic forms stay well conditioned.
    Point mean;
    for (const auto& p : instance.points()) {
        mean.x += p.x / static_cast<double>(instance.size());
        mean.y += p.y / static_cast<double>(instance.size());
    }
    for (std::size_t a = 0; a < ng; ++a) {
        ClusterStats st;
        double l = 0.0;
        for (auto i : g.groups[a]) {
            st.add({instance[i].x - mean.x, instance[i].y - mean.y});
            l += lambda[i];
        }
        d.w[a] = st.weight;
        d.sx[a] = st.sx;
        d.sy[a] = st.sy;
        d.sq[a] = st.sq;
        d.lam[a] = l;
        d.scatter[a] = cluster_cost(instance, std::span<const std::size_t>(g.groups[a])).cost;
        const Point c = st.centroid();
        d.centroid[a] = {c.x + mean.x, c.y + mean.y};
    }
    return d;
}

// min F(v) = sum_a lin_a v_a + sum_{a<b} quad_ab v_a v_b over nonempty binary
// v without conflicting pairs, by depth-first implicit enumeration.
class QuadraticEnumerator {
public:
    QuadraticEnumerator(std::vector<double> lin, std::vector<std::vector<double>> quad,
                        const std::vector<std::vector<char>>& conflict)
        : lin_(std::move(lin)), quad_(std::move(quad)), conflict_(conflict), v_(lin_.size(), 0) {}

    std::pair<double, std::vector<char>> solve() {
        best_ = std::numeric_limits<double>::infinity();
        // Seed with the best singleton so the empty set is never reported.
        for (std::size_t a = 0; a < lin_.size(); ++a) {
            if (lin_[a] < best_) {
                best_ = lin_[a];
                best_v_.assign(lin_.size(), 0);
                best_v_[a] = 1;
            }
        }
        recurse(0, 0.0, 0);
        return {best_, best_v_};
    }

private:
    void recurse(std::size_t idx, double value, std::size_t ones) {
        const std::size_t n = lin_.size();
        if (idx == n) {
            if (ones > 0 && value < best_) {
                best_ = value;
                best_v_ = v_;
            }
            return;
        }
        // Bound: each undecided variable contributes at best
        // min(0, lin + links to chosen + half of negative links to undecided).
        double bound = value;
        for (std::size_t a = idx; a < n; ++a) {
            double c = lin_[a];
            bool blocked = false;
            for (std::size_t b = 0; b < idx; ++b) {
                if (!v_[b]) continue;
                if (conflict_[a][b]) blocked = true;
                c += quad_[a][b];
            }
            if (blocked) continue;
            for (std::size_t b = idx; b < n; ++b)
                if (b != a) c += 0.5 * std::min(0.0, quad_[a][b]);
            bound += std::min(0.0, c);
        }
        if (bound >= best_ - 1e-12) return;

        bool allowed = true;
        double delta = lin_[idx];
        for (std::size_t b = 0; b < idx; ++b) {
            if (!v_[b]) continue;
            if (conflict_[idx][b]) allowed = false;
            delta += quad_[idx][b];
        }
        // Try the more promising branch first.
        if (allowed && delta < 0.0) {
            v_[idx] = 1;
            recurse(idx + 1, value + delta, ones + 1);
            v_[idx] = 0;
            recurse(idx + 1, value, ones);
        } else {
            recurse(idx + 1, value, ones);
            if (allowed) {
                v_[idx] = 1;
                recurse(idx + 1, value + delta, ones + 1);
                v_[idx] = 0;
            }
        }
    }

    std::vector<double> lin_;
    std::vector<std::vector<double>> quad_;
    const std::vector<std::vector<char>>& conflict_;
    std::vector<char> v_;
    std::vector<char> best_v_;
    double best_ = 0.0;
};

}  // namespace

ExactPricingResult exact_constrained_pricing(const Instance& instance, std::span<const double> lambda, double sigma,
                                             const BranchState& state, const PointSet* initial,
                                             std::size_t max_groups) {
    const std::size_t n = instance.size();
    const GroupGraph g = contract(state, n);
    if (!g.consistent) throw Error(ErrorCode::InfeasibleConstraints, "cannot-link pair inside a must-link group");
    const GroupData d = group_data(instance, lambda, g);

    // A group whose dual mass does not exceed its own scatter never lowers
    // the reduced cost of any set it joins.
    std::vector<std::size_t> rel;
    for (std::size_t a = 0; a < g.groups.size(); ++a)
        if (d.lam[a] > d.scatter[a]) rel.push_back(a);

    ExactPricingResult res;
    auto finish = [&](const std::vector<std::size_t>& groups) {
        PointSet s(n);
        for (auto a : groups)
            for (auto i : g.groups[a]) s.insert(i);
        const auto cc = cluster_cost(instance, s);
        double l = 0.0;
        s.for_each([&](std::size_t i) { l += lambda[i]; });
        res.members = std::move(s);
        res.reduced_cost = cc.cost + sigma - l;
    };
    if (rel.empty()) {
        // Every set costs at least sigma - (best group dual mass - scatter).
        std::size_t best = 0;
        for (std::size_t a = 1; a < g.groups.size(); ++a)
            if (d.scatter[a] - d.lam[a] < d.scatter[best] - d.lam[best]) best = a;
        finish({best});
        res.ratio_trace.push_back(res.reduced_cost - sigma);
        return res;
    }
    if (rel.size() > max_groups)
        throw Error(ErrorCode::TooLargeForExact, "too many profitable groups for exact pricing");

    const std::size_t r = rel.size();
    // N(v) = sum_a (intra_a - L_a w_a) v_a + sum_{a<b} (cross_ab - L_a w_b - L_b w_a) v_a v_b,
    // D(v) = sum_a w_a v_a, with intra_a = w_a q_a - |s_a|^2 and
    // cross_ab = w_a q_b + w_b q_a - 2 s_a . s_b.
    std::vector<double> nlin(r), w(r);
    std::vector<std::vector<double>> nquad(r, std::vector<double>(r, 0.0));
    std::vector<std::vector<char>> conflict(r, std::vector<char>(r, 0));
    std::vector<std::size_t> local(g.groups.size(), r);
    for (std::size_t a = 0; a < r; ++a) local[rel[a]] = a;
    for (std::size_t a = 0; a < r; ++a) {
        const std::size_t ga = rel[a];
        w[a] = d.w[ga];
        nlin[a] = d.w[ga] * d.sq[ga] - (d.sx[ga] * d.sx[ga] + d.sy[ga] * d.sy[ga]) - d.lam[ga] * d.w[ga];
        for (std::size_t b = 0; b < r; ++b) {
            if (a == b) continue;
            const std::size_t gb = rel[b];
            nquad[a][b] = d.w[ga] * d.sq[gb] + d.w[gb] * d.sq[ga] -
                          2.0 * (d.sx[ga] * d.sx[gb] + d.sy[ga] * d.sy[gb]) - d.lam[ga] * d.w[gb] -
                          d.lam[gb] * d.w[ga];
        }
        for (auto gb : g.conflicts[ga])
            if (local[gb] < r) conflict[a][local[gb]] = 1;
    }
    auto ratio = [&](const std::vector<char>& v) {
        double num = 0.0, den = 0.0;
        for (std::size_t a = 0; a < r; ++a) {
            if (!v[a]) continue;
            num += nlin[a];
            den += w[a];
            for (std::size_t b = a + 1; b < r; ++b)
                if (v[b]) num += nquad[a][b];
        }
        return num / den;
    };

    // Starting ratio: the initial set restricted to profitable groups, else the best singleton.
    std::vector<char> v(r, 0);
    if (initial) {
        for (std::size_t a = 0; a < r; ++a) v[a] = initial->contains(g.groups[rel[a]][0]);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                if (v[a] && v[b] && conflict[a][b]) v[b] = 0;
    }
    if (std::find(v.begin(), v.end(), 1) == v.end()) {
        std::size_t best = 0;
        for (std::size_t a = 1; a < r; ++a)
            if (nlin[a] / w[a] < nlin[best] / w[best]) best = a;
        v.assign(r, 0);
        v[best] = 1;
    }
    double qv = ratio(v);
    res.ratio_trace.push_back(qv);
    double scale = 1.0;
    for (auto x : nlin) scale = std::max(scale, std::abs(x));
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<double> lin(r);
        for (std::size_t a = 0; a < r; ++a) lin[a] = nlin[a] - qv * w[a];
        auto [val, sol] = QuadraticEnumerator(lin, nquad, conflict).solve();
        if (val >= -1e-12 * scale) break;
        const double next = ratio(sol);
        if (next >= qv) break;
        qv = next;
        v = std::move(sol);
        res.ratio_trace.push_back(qv);
    }
    std::vector<std::size_t> groups;
    for (std::size_t a = 0; a < r; ++a)
        if (v[a]) groups.push_back(rel[a]);
    finish(groups);
    return res;
}

namespace {

// All maximal independent sets of the graph induced on `verts` (Bron-Kerbosch
// on the complement). Returns false if `limit` sets were exceeded.
bool enumerate_mis(const std::vector<std::size_t>& verts, const std::vector<std::vector<std::size_t>>& conflicts,
                   std::size_t limit, const std::function<void(const std::vector<std::size_t>&)>& emit) {
    std::size_t count = 0;
    bool complete = true;
    std::vector<std::size_t> r;
    auto adjacent = [&](std::size_t a, std::size_t b) {
        return std::binary_search(conflicts[a].begin(), conflicts[a].end(), b);
    };
    std::function<void(std::vector<std::size_t>, std::vector<std::size_t>)> bk = [&](std::vector<std::size_t> p,
                                                                                    std::vector<std::size_t> x) {
        if (!complete) return;
        if (p.empty()) {
            if (x.empty()) {
                if (++count > limit) {
                    complete = false;
                    return;
                }
                emit(r);
            }
            return;
        }
        while (!p.empty()) {
            const std::size_t v = p.back();
            std::vector<std::size_t> np, nx;
            for (auto u : p)
                if (u != v && !adjacent(u, v)) np.push_back(u);
            for (auto u : x)
                if (!adjacent(u, v)) nx.push_back(u);
            r.push_back(v);
            bk(std::move(np), std::move(nx));
            r.pop_back();
            p.pop_back();
            x.push_back(v);
            if (!complete) return;
        }
    };
    bk(verts, {});
    return complete;
}

}  // namespace

PricingOutput arrangement_constrained_pricing(const Instance& instance, std::span<const double> lambda, double sigma,
                                              const BranchState& state, const AggregationPartition* q,
                                              std::size_t max_columns, double tolerance) {
    const std::size_t n = instance.size();
    const GroupGraph g = contract(state, n);
    if (!g.consistent) throw Error(ErrorCode::InfeasibleConstraints, "cannot-link pair inside a must-link group");
    const GroupData d = group_data(instance, lambda, g);
    const std::size_t ng = g.groups.size();

    // Group a improves a set at center y iff w_a |c_a - y|^2 + scatter_a - L_a < 0.
    std::vector<DiscSite> sites(ng);
    for (std::size_t a = 0; a < ng; ++a) sites[a] = {d.centroid[a], (d.lam[a] - d.scatter[a]) / d.w[a]};

    ColumnCollector collector(instance, lambda, sigma, tolerance, q, max_columns);
    std::vector<std::size_t> points;
    auto emit_groups = [&](const std::vector<std::size_t>& groups) {
        points.clear();
        for (auto a : groups) points.insert(points.end(), g.groups[a].begin(), g.groups[a].end());
        std::sort(points.begin(), points.end());
        collector.visit(points);
    };
    for (std::size_t a = 0; a < ng; ++a) emit_groups({a});

    bool exact = true;
    std::unordered_set<PointSet, PointSetHash> seen_cells;
    std::vector<std::size_t> free_part, constrained;
    std::vector<char> in_cell(ng, 0);
    DiscArrangement(sites).enumerate([&](const std::vector<std::size_t>& cell) {
        if (!seen_cells.insert(PointSet::from(ng, cell)).second) return;
        for (auto a : cell) in_cell[a] = 1;
        free_part.clear();
        constrained.clear();
        for (auto a : cell) {
            bool c = false;
            for (auto b : g.conflicts[a]) c |= in_cell[b] != 0;
            (c ? constrained : free_part).push_back(a);
        }
        for (auto a : cell) in_cell[a] = 0;
        if (constrained.empty()) {
            emit_groups(free_part);
            return;
        }
        std::vector<std::size_t> groups;
        exact &= enumerate_mis(constrained, g.conflicts, 4096, [&](const std::vector<std::size_t>& mis) {
            groups = free_part;
            groups.insert(groups.end(), mis.begin(), mis.end());
            emit_groups(groups);
        });
    });
    PricingOutput out = collector.finish();
    out.exact = exact;
    return out;
}

}  // namespace mssc

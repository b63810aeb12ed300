#include "mssc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <unordered_map>

#include "mssc/error.hpp"
#include "mssc/random.hpp"

namespace mssc {

void SolverConfig::validate() const {
    if (k < 1) throw Error(ErrorCode::InvalidK, "k must be at least 1");
    if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
    if (columns_per_iter < 1) throw Error(ErrorCode::InvalidArgument, "columns per iteration must be at least 1");
    if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be at least 1");
    if (!(time_limit > 0.0)) throw Error(ErrorCode::InvalidArgument, "time limit must be positive");
    if (disaggregation == Disaggregation::Complementary)
        throw Error(ErrorCode::InvalidArgument, "complementary disaggregation is not implemented");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double relative_gap(double ub, double lb) {
    const double denom = std::max(std::abs(ub), 1e-12);
    return std::max(0.0, (ub - lb) / denom);
}

// Bound at which a node cannot hold anything better than the incumbent.
double cutoff(double ub, double epsilon) { return ub - epsilon * std::abs(ub) - 1e-9 * std::max(1.0, std::abs(ub)); }

struct NodePricing {
    PricingOutput out;
    bool exact = true;
    // Lower bound on the minimum reduced cost over all columns feasible at the node.
    double min_rc_bound = -std::numeric_limits<double>::infinity();
};

NodePricing price_node(const Instance& inst, const DisaggregatedDuals& duals, const BranchState& state,
                       const AggregationPartition& q, const SolverConfig& cfg, double tol) {
    const std::size_t max_cols = std::max<std::size_t>(cfg.columns_per_iter, 100);
    PricingInput in;
    in.lambda = duals.lambda;
    in.sigma = duals.sigma;
    in.partition = &q;
    in.max_columns = max_cols;
    in.tolerance = tol;
    in.method = cfg.pricing;

    NodePricing res;
    res.out = price(inst, in);
    res.exact = res.out.exact;
    // The unconstrained minimum bounds the constrained one from below.
    if (res.out.exact) res.min_rc_bound = res.out.best_reduced_cost;
    if (state.empty()) return res;

    std::vector<PricedColumn> feasible;
    for (const auto& c : res.out.columns)
        if (state.respects(c.column.members)) feasible.push_back(c);
    if (res.out.columns.empty() && res.out.exact) {
        res.out.compatible.clear();
        return res;
    }
    if (!feasible.empty()) {
        std::vector<PricedColumn> compatible;
        finalize_columns(feasible, compatible, &q, max_cols);
        const double bound = res.min_rc_bound;
        res.out.columns = std::move(feasible);
        res.out.compatible = std::move(compatible);
        res.out.best_reduced_cost = res.out.columns.front().reduced_cost;
        res.min_rc_bound = bound;
        res.exact = false;  // nothing proven about other feasible columns
        return res;
    }

    // Alternating heuristic seeded from the unconstrained columns.
    std::vector<PointSet> seeds;
    for (std::size_t t = 0; t < res.out.columns.size() && seeds.size() < 10; ++t)
        seeds.push_back(res.out.columns[t].column.members);
    if (!seeds.empty()) {
        PricingOutput h = heuristic_constrained_pricing(inst, duals.lambda, duals.sigma, state, seeds, &q, max_cols, tol);
        if (!h.columns.empty()) {
            const double bound = res.min_rc_bound;
            res.out = std::move(h);
            res.min_rc_bound = bound;
            res.exact = false;
            return res;
        }
    }

    // Exact constrained pricing.
    if (cfg.exact_pricing == ExactPricing::Arrangement) {
        res.out = arrangement_constrained_pricing(inst, duals.lambda, duals.sigma, state, &q, max_cols, tol);
        res.exact = res.out.exact;
        if (res.exact) res.min_rc_bound = res.out.best_reduced_cost;
        return res;
    }
    PricingOutput out;
    try {
        const auto ex = exact_constrained_pricing(inst, duals.lambda, duals.sigma, state, nullptr,
                                                  cfg.max_exact_groups);
        out.best_reduced_cost = ex.reduced_cost;
        out.best_members = ex.members;
        out.exact = true;
        if (ex.reduced_cost < -tol) {
            Column c = Column::make(inst, ex.members);
            out.columns.push_back({c, ex.reduced_cost});
            if (is_compatible(c.members, q)) out.compatible.push_back({c, ex.reduced_cost});
        }
        res.min_rc_bound = ex.reduced_cost;
        res.exact = true;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TooLargeForExact) throw;
        out.exact = false;
        res.exact = false;
    }
    res.out = std::move(out);
    return res;
}

}  // namespace

CgResult cg_dca(const Instance& instance, const NodeRecord& node, const SolverConfig& config,
                const Clustering& x_bar, double upper_bound, lp::Backend& backend, const Deadline& deadline) {
    const std::size_t k = config.k;
    const double tol = std::max(config.rc_tolerance, 1e-10 * std::abs(upper_bound));
    const double cut = cutoff(upper_bound, config.epsilon);

    CgResult res;
    res.lower_bound = node.lower_bound;
    res.m_start = node.q.size();

    Master master(instance, k, node.q, node.box, backend);
    std::unordered_map<PointSet, Column, PointSetHash> side_pool;  // incompatible columns kept for later
    for (const auto& c : node.columns) {
        if (!node.state.respects(c.members)) continue;
        if (is_compatible(c.members, master.partition())) master.add_column(c);
        else side_pool.emplace(c.members, c);
    }

    std::uint64_t disagg_round = 0;
    while (true) {
        if (deadline.expired()) {
            res.time_limit = true;
            break;
        }
        auto t0 = Clock::now();
        MasterSolution sol = master.solve();
        res.master_time += seconds_since(t0);
        if (sol.status != lp::Status::Optimal)
            throw Error(ErrorCode::NumericalFailure, std::string("master LP ended with status ") + lp::to_string(sol.status));
        ++res.iterations;
        res.m_sum += static_cast<double>(master.partition().size());
        res.master = sol;

        const auto duals = disaggregate(sol.lambda_bar, sol.sigma, master.partition(), config.disaggregation,
                                        derive_seed(config.seed, 0xd15a + disagg_round++));
        res.lambda = duals.lambda;

        t0 = Clock::now();
        NodePricing np = price_node(instance, duals, node.state, master.partition(), config, tol);
        res.pricing_time += seconds_since(t0);

        if (std::isfinite(np.min_rc_bound)) {
            const double lag = sol.dual_objective(k) + static_cast<double>(k) * std::min(0.0, np.min_rc_bound);
            res.lower_bound = std::max(res.lower_bound, lag);
            if (config.lagrangian_cutoff && res.lower_bound >= cut) {
                res.pruned = true;
                break;
            }
        }

        auto& t_p = np.out.columns;
        auto& c_q = np.out.compatible;
        for (const auto& c : t_p)
            if (!is_compatible(c.column.members, master.partition()) && side_pool.size() < 5000)
                side_pool.emplace(c.column.members, c.column);

        bool added = false;
        if (!c_q.empty()) {
            const std::size_t take = std::min(config.columns_per_iter, c_q.size());
            for (std::size_t t = 0; t < take; ++t) {
                if (master.add_column(c_q[t].column)) {
                    added = true;
                    ++res.columns_added;
                }
            }
        } else if (!t_p.empty()) {
            // Every negative column is incompatible: refine Q with one of them.
            const std::size_t pick = select_incompatible(t_p, master.partition(), config.q_update);
            const PointSet members = t_p[pick].column.members;
            res.u_sum += static_cast<double>(count_incompatibilities(members, master.partition()));
            ++res.q_updates;
            AggregationPartition nq = update_partition(master.partition(), members);
            StabilizationBox nb = config.box_on_split == BoxOnSplit::Reestimate && config.stabilization
                                      ? estimate_dual_bounds(instance, x_bar, nq)
                                      : inherit_box(master.box(), master.partition(), nq);
            if (node.state.depth > 0)
                for (auto& u : nb.upper)
                    if (std::isinf(u)) u = std::max(1.0, std::abs(upper_bound));
            master.refine(std::move(nq), std::move(nb));
            for (auto it = side_pool.begin(); it != side_pool.end();) {
                if (is_compatible(it->first, master.partition())) {
                    master.add_column(it->second);
                    it = side_pool.erase(it);
                } else {
                    ++it;
                }
            }
            master.add_column(t_p[pick].column);
            side_pool.erase(members);
            ++res.columns_added;
            continue;
        }
        if (added) continue;

        // No usable negative column (or only duplicates of pooled ones).
        if (!np.exact && t_p.empty()) res.exact = false;
        if (sol.any_active()) {
            if (res.box_updates >= config.max_box_updates) break;
            master.set_box(update_box(master.box(), sol.active));
            ++res.box_updates;
            continue;
        }
        res.converged = true;
        res.lower_bound = std::max(res.lower_bound, sol.objective);
        break;
    }

    res.m_end = master.partition().size();
    res.pool = master.pool().columns();
    res.q = master.partition();
    res.box = master.box();
    if (!config.lp_dump_path.empty() && node.id == 0) {
        std::ofstream os(config.lp_dump_path);
        os << lp::to_cplex_lp(master.lp());
    }
    return res;
}

namespace {

// Splits off far points until there are k clusters (never increases the cost).
Clustering fill_clusters(const Instance& instance, Clustering c, std::size_t k) {
    if (c.k >= k) return c;
    auto label = c.assignment;
    std::size_t kk = c.k;
    std::vector<std::size_t> sizes(kk, 0);
    for (auto l : label) ++sizes[l];
    auto cur = make_clustering(instance, label, kk);
    while (kk < k) {
        std::size_t far = instance.size();
        double fd = -1.0;
        for (std::size_t i = 0; i < instance.size(); ++i) {
            if (sizes[label[i]] < 2) continue;
            const double d = squared_distance(instance[i], cur.centroids[label[i]]);
            if (d > fd) {
                fd = d;
                far = i;
            }
        }
        if (far == instance.size()) break;
        --sizes[label[far]];
        label[far] = kk++;
        sizes.push_back(1);
        cur = make_clustering(instance, label, kk);
    }
    return cur;
}

bool integral(const MasterSolution& sol) {
    if (sol.any_active()) return false;
    for (auto v : sol.z)
        if (std::min(std::abs(v), std::abs(1.0 - v)) > 1e-6) return false;
    return true;
}

struct OpenNode {
    double lb;
    std::size_t id;
    bool operator<(const OpenNode& o) const { return lb > o.lb || (lb == o.lb && id > o.id); }
};

}  // namespace

SolveResult branch_and_price(const Instance& instance, const SolverConfig& config) {
    config.validate();
    if (config.k > instance.size()) throw Error(ErrorCode::InvalidK, "k exceeds the number of points");
    const Clustering x_bar =
        multi_start(instance, config.k, config.restarts, derive_seed(config.seed, 1), config.threads);
    return branch_and_price(instance, config, x_bar);
}

SolveResult branch_and_price(const Instance& instance, const SolverConfig& config, const Clustering& incumbent) {
    config.validate();
    const auto start = Clock::now();
    const Deadline deadline(config.time_limit);
    const std::size_t k = config.k;
    if (k > instance.size()) throw Error(ErrorCode::InvalidK, "k exceeds the number of points");
    if (incumbent.k != k || incumbent.assignment.size() != instance.size())
        throw Error(ErrorCode::InvalidArgument, "incumbent does not match instance and k");
    auto backend = lp::make_backend(config.lp_backend, config.lp_command);

    SolveResult result;
    result.clustering = incumbent;
    double ub = incumbent.cost;
    const Clustering& x_bar = incumbent;

    NodeRecord root;
    root.q = initial_partition(instance, x_bar, config.aggregation, derive_seed(config.seed, 2),
                               std::min<std::size_t>(config.restarts, 10));
    root.box = config.stabilization ? estimate_dual_bounds(instance, x_bar, root.q)
                                    : StabilizationBox::unbounded(root.q.size());
    for (const auto& cl : x_bar.clusters())
        if (!cl.empty()) root.columns.push_back(Column::make(instance, PointSet::from(instance.size(), cl)));

    std::unordered_map<std::size_t, NodeRecord> store;
    std::priority_queue<OpenNode> open;
    std::size_t next_id = 0;
    root.id = next_id++;
    open.push({root.lower_bound, root.id});
    store.emplace(root.id, std::move(root));

    bool all_exact = true;
    bool stopped_early = false;
    double pruned_min = std::numeric_limits<double>::infinity();  // nodes closed by the gap rule
    SolveStats& st = result.stats;

    while (!open.empty()) {
        const OpenNode top = open.top();
        if (relative_gap(ub, top.lb) <= config.epsilon && std::isfinite(top.lb)) break;
        if (deadline.expired() || st.nodes_explored >= config.max_nodes) {
            stopped_early = true;
            result.time_limit_hit = deadline.expired();
            break;
        }
        open.pop();
        NodeRecord node = std::move(store.at(top.id));
        store.erase(top.id);
        if (!contract(node.state, instance.size()).consistent) continue;

        CgResult cg = cg_dca(instance, node, config, x_bar, ub, *backend, deadline);
        ++st.nodes_explored;
        st.cg_iterations += cg.iterations;
        st.box_updates += cg.box_updates;
        st.columns_added += cg.columns_added;
        st.master_time += cg.master_time;
        st.pricing_time += cg.pricing_time;
        if (node.id == 0) {
            st.m_start = cg.m_start;
            st.m_end = cg.m_end;
            st.m_avg = cg.iterations ? cg.m_sum / static_cast<double>(cg.iterations) : 0.0;
            st.q_updates = cg.q_updates;
            st.u_avg = cg.q_updates ? cg.u_sum / static_cast<double>(cg.q_updates) : 0.0;
            st.root_lower_bound = cg.lower_bound;
        }
        all_exact = all_exact && cg.exact;
        const double node_lb = std::max(node.lower_bound, cg.lower_bound);

        if (cg.time_limit) {
            // Unfinished node: its bound stays open.
            open.push({node_lb, node.id});
            store.emplace(node.id, std::move(node));
            stopped_early = true;
            result.time_limit_hit = true;
            break;
        }
        if (cg.pruned || node_lb >= cutoff(ub, config.epsilon)) {
            if (node_lb < ub) pruned_min = std::min(pruned_min, node_lb);
            continue;
        }

        if (integral(cg.master)) {
            std::vector<Column> chosen;
            for (std::size_t t = 0; t < cg.master.z.size(); ++t)
                if (cg.master.z[t] > 0.5) chosen.push_back(cg.pool[t]);
            Clustering c = fill_clusters(instance, cover_to_clustering(instance, chosen), k);
            if (c.cost < ub) {
                ub = c.cost;
                result.clustering = std::move(c);
            }
            if (!cg.converged) pruned_min = std::min(pruned_min, node_lb);
            continue;
        }
        if (!cg.converged) {
            // Box update cap reached with a fractional master; keep its bound.
            pruned_min = std::min(pruned_min, node_lb);
            all_exact = false;
            continue;
        }
        if (config.root_only) {
            open.push({node_lb, node.id});
            store.emplace(node.id, std::move(node));
            stopped_early = true;
            break;
        }

        BranchPair pair;
        try {
            pair = find_branch_pair(cg.master.z, cg.pool);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SolutionIntegral) throw;
            pruned_min = std::min(pruned_min, node_lb);
            all_exact = false;
            continue;
        }

        // Columns handed to the children: the LP support plus pool columns
        // whose reduced cost lies within the gap, at most 2m of the latter.
        std::vector<std::pair<double, std::size_t>> by_rc;
        std::vector<char> basic(cg.pool.size(), 0);
        for (std::size_t t = 0; t < cg.pool.size(); ++t) {
            if (cg.master.z[t] > 1e-9) {
                basic[t] = 1;
                continue;
            }
            const double rc = reduced_cost(cg.pool[t], cg.lambda, cg.master.sigma);
            if (rc <= ub - node_lb) by_rc.push_back({rc, t});
        }
        std::sort(by_rc.begin(), by_rc.end());
        if (by_rc.size() > 2 * cg.q.size()) by_rc.resize(2 * cg.q.size());
        for (auto& [rc, t] : by_rc) basic[t] = 1;

        StabilizationBox child_box = cg.box;
        for (auto& u : child_box.upper)
            if (std::isinf(u)) u = std::max(1.0, std::abs(ub));

        for (int side = 0; side < 2; ++side) {
            NodeRecord child;
            child.state = side == 0 ? node.state.with_must_link(pair.i, pair.j)
                                    : node.state.with_cannot_link(pair.i, pair.j);
            child.q = cg.q;
            child.box = child_box;
            child.lower_bound = node_lb;
            for (std::size_t t = 0; t < cg.pool.size(); ++t)
                if (basic[t] && child.state.respects(cg.pool[t].members)) child.columns.push_back(cg.pool[t]);
            for (const auto& cl : result.clustering.clusters()) {
                if (cl.empty()) continue;
                PointSet s = PointSet::from(instance.size(), cl);
                if (child.state.respects(s)) child.columns.push_back(Column::make(instance, std::move(s)));
            }
            child.id = next_id++;
            open.push({child.lower_bound, child.id});
            store.emplace(child.id, std::move(child));
        }
    }

    double lb = std::min(ub, pruned_min);
    if (!open.empty()) lb = std::min(lb, open.top().lb);
    result.objective = result.clustering.cost;
    result.lower_bound = lb;
    result.gap = relative_gap(result.objective, std::isfinite(lb) ? lb : -std::numeric_limits<double>::infinity());
    if (!std::isfinite(lb)) result.gap = std::numeric_limits<double>::infinity();
    result.certified = all_exact && !stopped_early && result.gap <= config.epsilon + 1e-12;
    if (config.root_only) result.certified = all_exact && result.gap <= config.epsilon + 1e-12;
    st.root_gap_percent = 100.0 * relative_gap(result.objective, st.root_lower_bound);
    st.total_time = seconds_since(start);
    return result;
}

}  // namespace mssc

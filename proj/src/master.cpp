#include "mssc/master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mssc/error.hpp"

namespace mssc {

bool StabilizationBox::valid() const {
    if (lower.size() != upper.size()) return false;
    for (std::size_t j = 0; j < lower.size(); ++j)
        if (!(lower[j] >= 0.0) || !(upper[j] >= lower[j]) || std::isinf(lower[j])) return false;
    return true;
}

bool MasterSolution::any_active() const {
    return std::any_of(active.begin(), active.end(), [](BoundActivity a) { return a != BoundActivity::None; });
}

double MasterSolution::dual_objective(std::size_t k) const {
    double s = 0.0;
    for (auto v : lambda_bar) s += v;
    return s - static_cast<double>(k) * sigma;
}

std::pair<std::size_t, bool> ColumnPool::add(Column c) {
    auto [it, inserted] = index_.try_emplace(c.members, columns_.size());
    if (!inserted) return {it->second, false};
    columns_.push_back(std::move(c));
    return {columns_.size() - 1, true};
}

std::optional<std::size_t> ColumnPool::find(const PointSet& members) const {
    auto it = index_.find(members);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

constexpr double kActiveTol = 1e-9;

// Rows covered by a compatible column, in increasing order.
std::vector<lp::Entry> covering_entries(const PointSet& members, const AggregationPartition& q) {
    std::vector<lp::Entry> out;
    std::vector<std::size_t> hits;
    members.for_each([&](std::size_t i) { hits.push_back(q.component_of(i)); });
    std::sort(hits.begin(), hits.end());
    for (std::size_t a = 0; a < hits.size();) {
        std::size_t b = a;
        while (b < hits.size() && hits[b] == hits[a]) ++b;
        if (b - a != q[hits[a]].members.size())
            throw Error(ErrorCode::IncompatibleColumnInPool, "pooled column cuts an aggregated component");
        out.push_back({hits[a], 1.0});
        a = b;
    }
    return out;
}

lp::ColumnSpec z_column(const Column& c, const AggregationPartition& q) {
    lp::ColumnSpec spec;
    spec.cost = c.cost;
    spec.entries = covering_entries(c.members, q);
    spec.entries.push_back({q.size(), 1.0});
    return spec;
}

void set_stabilization(lp::LinearProgram& lp, std::size_t j, double lower, double upper) {
    lp.set_cost(MasterLp::xi(j), -lower);
    if (std::isinf(upper)) {
        lp.set_cost(MasterLp::eta(j), 0.0);
        lp.set_bounds(MasterLp::eta(j), 0.0, 0.0);
    } else {
        lp.set_cost(MasterLp::eta(j), upper);
        lp.set_bounds(MasterLp::eta(j), 0.0, lp::kInf);
    }
}

}  // namespace

MasterLp build_agrmp(std::span<const Column> pool, const AggregationPartition& q, std::size_t k,
                     const StabilizationBox& box) {
    const std::size_t m = q.size();
    if (box.size() != m) throw Error(ErrorCode::DimensionMismatch, "box size differs from component count");
    MasterLp out;
    out.m = m;
    out.num_pool = pool.size();
    for (std::size_t j = 0; j < m; ++j) out.lp.add_row(lp::RowSense::Greater, 1.0, "cover" + std::to_string(q[j].id));
    out.lp.add_row(lp::RowSense::Less, static_cast<double>(k), "card");
    for (std::size_t j = 0; j < m; ++j) {
        out.lp.add_column({0.0, 0.0, lp::kInf, {{j, -1.0}}, "xi" + std::to_string(j)});
        out.lp.add_column({0.0, 0.0, lp::kInf, {{j, 1.0}}, "eta" + std::to_string(j)});
        set_stabilization(out.lp, j, box.lower[j], box.upper[j]);
    }
    for (std::size_t t = 0; t < pool.size(); ++t) {
        auto spec = z_column(pool[t], q);
        spec.name = "z" + std::to_string(t);
        out.lp.add_column(spec);
    }
    return out;
}

MasterSolution solve_master(const MasterLp& master, lp::Backend& backend, const lp::Basis* warm,
                            lp::Basis* basis_out) {
    lp::LpSolution sol = backend.solve(master.lp, warm);
    MasterSolution out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    if (basis_out) *basis_out = sol.basis;
    if (sol.status != lp::Status::Optimal) return out;
    out.objective = sol.objective;
    out.lambda_bar.resize(master.m);
    out.active.assign(master.m, BoundActivity::None);
    for (std::size_t j = 0; j < master.m; ++j) {
        out.lambda_bar[j] = std::max(0.0, sol.duals[j]);
        if (sol.primal[MasterLp::xi(j)] > kActiveTol) out.active[j] = BoundActivity::AtLower;
        else if (sol.primal[MasterLp::eta(j)] > kActiveTol) out.active[j] = BoundActivity::AtUpper;
    }
    out.sigma = std::max(0.0, -sol.duals[master.m]);
    out.z.resize(master.num_pool);
    for (std::size_t t = 0; t < master.num_pool; ++t) out.z[t] = sol.primal[master.z(t)];
    return out;
}

StabilizationBox estimate_dual_bounds(const Instance& instance, const Clustering& x_bar,
                                      const AggregationPartition& q) {
    const std::size_t k = x_bar.k;
    std::vector<ClusterStats> stats(k);
    std::vector<double> cost(k, 0.0);
    for (std::size_t i = 0; i < instance.size(); ++i) stats[x_bar.assignment[i]].add(instance[i]);
    const auto groups = x_bar.clusters();
    for (std::size_t s = 0; s < k; ++s)
        if (!groups[s].empty()) cost[s] = cluster_cost(instance, std::span<const std::size_t>(groups[s])).cost;

    StabilizationBox box;
    box.lower.resize(q.size());
    box.upper.resize(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        const auto& members = q[j].members;
        const std::size_t s = x_bar.assignment[members[0]];
        for (auto i : members)
            if (x_bar.assignment[i] != s)
                throw Error(ErrorCode::ComponentSpansClusters, "component is split across incumbent clusters");
        const auto comp = cluster_cost(instance, std::span<const std::size_t>(members));
        const double b = static_cast<double>(members.size());

        // Removing I_j from s: c^s = c^s_{-j} + S_j + r b / a |c_rest - c_j|^2.
        const double a = stats[s].weight;
        const double r = a - b;
        double lower = cost[s];
        if (r > 0.0) {
            const Point cs = stats[s].centroid();
            const Point rest{(a * cs.x - b * comp.centroid.x) / r, (a * cs.y - b * comp.centroid.y) / r};
            lower = comp.cost + r * b / a * squared_distance(rest, comp.centroid);
        }

        // Adding I_j to s': c^{s'}_{+j} - c^{s'} = S_j + a' b / (a' + b) |c_{s'} - c_j|^2.
        double upper = lp::kInf;
        for (std::size_t t = 0; t < k; ++t) {
            if (t == s) continue;
            const double at = stats[t].weight;
            double add = comp.cost;
            if (at > 0.0) add += at * b / (at + b) * squared_distance(stats[t].centroid(), comp.centroid);
            upper = std::min(upper, add);
        }
        box.lower[j] = std::max(0.0, std::min(lower, upper));
        box.upper[j] = upper;
    }
    return box;
}

StabilizationBox update_box(const StabilizationBox& box, std::span<const BoundActivity> active) {
    StabilizationBox out = box;
    for (std::size_t j = 0; j < box.size() && j < active.size(); ++j) {
        if (active[j] == BoundActivity::None) continue;
        const double u = box.upper[j];
        double alpha = u - box.lower[j];
        if (std::isinf(u)) {
            out.lower[j] = 0.0;
            continue;
        }
        if (alpha <= 0.0) alpha = std::max(1.0, 0.05 * u);
        out.lower[j] = std::max(0.0, box.lower[j] - alpha / 2.0);
        out.upper[j] = u + alpha / 2.0;
    }
    return out;
}

StabilizationBox inherit_box(const StabilizationBox& box, const AggregationPartition& old_q,
                             const AggregationPartition& new_q) {
    StabilizationBox out;
    out.lower.resize(new_q.size());
    out.upper.resize(new_q.size());
    for (std::size_t j = 0; j < new_q.size(); ++j) {
        const std::size_t parent = old_q.component_of(new_q[j].members[0]);
        out.lower[j] = box.lower[parent];
        out.upper[j] = box.upper[parent];
    }
    return out;
}

Clustering cover_to_clustering(const Instance& instance, std::span<const Column> chosen) {
    const std::size_t n = instance.size();
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(n, none);
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < chosen.size(); ++c) {
        chosen[c].members.for_each([&](std::size_t i) {
            const double d = squared_distance(instance[i], chosen[c].centroid);
            if (d < dist[i]) {
                dist[i] = d;
                label[i] = c;
            }
        });
    }
    std::vector<std::size_t> remap(chosen.size(), none);
    std::size_t k = 0;
    for (auto& l : label) {
        if (l == none) throw Error(ErrorCode::InvalidArgument, "columns do not cover every point");
        if (remap[l] == none) remap[l] = k++;
        l = remap[l];
    }
    return make_clustering(instance, std::move(label), k);
}

Master::Master(const Instance& instance, std::size_t k, AggregationPartition q, StabilizationBox box,
               lp::Backend& backend)
    : instance_(instance), k_(k), q_(std::move(q)), box_(std::move(box)), backend_(backend) {
    if (box_.size() != q_.size()) throw Error(ErrorCode::DimensionMismatch, "box size differs from component count");
    rebuild();
}

bool Master::add_column(Column c) {
    auto spec = z_column(c, q_);  // validates compatibility before the pool changes
    auto [t, fresh] = pool_.add(std::move(c));
    if (!fresh) return false;
    spec.name = "z" + std::to_string(t);
    lp_.lp.add_column(spec);
    ++lp_.num_pool;
    return true;
}

void Master::refine(AggregationPartition q, StabilizationBox box) {
    if (box.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "box size differs from component count");
    const std::size_t old_m = q_.size();
    lp::Basis old = basis_;
    q_ = std::move(q);
    box_ = std::move(box);
    rebuild();
    if (old.empty()) return;

    // Old rows keep their positions; appended rows start with a basic slack.
    const std::size_t m = q_.size();
    lp::Basis nb;
    nb.rows.assign(m + 1, lp::VarStatus::Basic);
    nb.cols.assign(2 * m + pool_.size(), lp::VarStatus::AtLower);
    for (std::size_t j = 0; j < old_m && j < old.rows.size(); ++j) nb.rows[j] = old.rows[j];
    if (old_m < old.rows.size()) nb.rows[m] = old.rows[old_m];
    for (std::size_t c = 0; c < 2 * old_m && c < old.cols.size(); ++c) nb.cols[c] = old.cols[c];
    for (std::size_t t = 0; t < pool_.size() && 2 * old_m + t < old.cols.size(); ++t)
        nb.cols[2 * m + t] = old.cols[2 * old_m + t];
    basis_ = std::move(nb);
}

void Master::set_box(StabilizationBox box) {
    if (box.size() != q_.size()) throw Error(ErrorCode::DimensionMismatch, "box size differs from component count");
    box_ = std::move(box);
    apply_box_to_lp();
}

void Master::apply_box_to_lp() {
    for (std::size_t j = 0; j < q_.size(); ++j) {
        set_stabilization(lp_.lp, j, box_.lower[j], box_.upper[j]);
        // A fixed eta that was sitting at its (now removed) upper bound must
        // restart from the lower one.
        if (std::isinf(box_.upper[j]) && MasterLp::eta(j) < basis_.cols.size() &&
            basis_.cols[MasterLp::eta(j)] == lp::VarStatus::AtUpper)
            basis_.cols[MasterLp::eta(j)] = lp::VarStatus::AtLower;
    }
}

void Master::rebuild() { lp_ = build_agrmp(pool_.columns(), q_, k_, box_); }

MasterSolution Master::solve() {
    lp::Basis out;
    MasterSolution sol = solve_master(lp_, backend_, basis_.empty() ? nullptr : &basis_, &out);
    // The master is bounded and feasible by construction (sum z <= k, box
    // columns on every row), so any other status is numerical; retry cold.
    if (sol.status != lp::Status::Optimal && !basis_.empty()) {
        out = {};
        sol = solve_master(lp_, backend_, nullptr, &out);
    }
    if (!out.empty()) basis_ = std::move(out);
    return sol;
}

}  // namespace mssc

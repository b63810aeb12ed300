#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mssc/column.hpp"
#include "mssc/kmeans.hpp"
#include "mssc/lp.hpp"
#include "mssc/partition.hpp"

namespace mssc {

// Dual box l <= lambda_bar_j <= u per component. u = +inf disables the upper
// stabilization variable of that row.
struct StabilizationBox {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const noexcept { return lower.size(); }
    static StabilizationBox unbounded(std::size_t m) { return {std::vector<double>(m, 0.0), std::vector<double>(m, lp::kInf)}; }
    bool valid() const;
};

enum class BoundActivity : unsigned char { None, AtLower, AtUpper };

struct MasterSolution {
    lp::Status status = lp::Status::IterationLimit;
    double objective = 0.0;
    std::vector<double> lambda_bar;  // per component, >= 0
    double sigma = 0.0;              // >= 0
    std::vector<double> z;           // per pooled column
    std::vector<BoundActivity> active;
    std::size_t iterations = 0;

    bool any_active() const;
    // Dual objective sum(lambda_bar) - k sigma.
    double dual_objective(std::size_t k) const;
};

// Deduplicating column store; indices are stable.
class ColumnPool {
public:
    // Index of the stored column and whether it was new.
    std::pair<std::size_t, bool> add(Column c);
    std::optional<std::size_t> find(const PointSet& members) const;
    std::size_t size() const noexcept { return columns_.size(); }
    const Column& operator[](std::size_t t) const { return columns_[t]; }
    const std::vector<Column>& columns() const noexcept { return columns_; }

private:
    std::vector<Column> columns_;
    std::unordered_map<PointSet, std::size_t, PointSetHash> index_;
};

// LP layout: for every component j the columns xi_j (cost -l_j, coefficient
// -1) and eta_j (cost u_j, coefficient +1; fixed at 0 when u_j is infinite),
// then one z column per pooled column. Rows 0..m-1 are the covering rows
// (>= 1), row m is the cardinality row (<= k).
struct MasterLp {
    lp::LinearProgram lp;
    std::size_t m = 0;
    std::size_t num_pool = 0;

    static std::size_t xi(std::size_t j) { return 2 * j; }
    static std::size_t eta(std::size_t j) { return 2 * j + 1; }
    std::size_t z(std::size_t t) const { return 2 * m + t; }
};

// Throws Error(IncompatibleColumnInPool) if some column cuts a component.
MasterLp build_agrmp(std::span<const Column> pool, const AggregationPartition& q, std::size_t k,
                     const StabilizationBox& box);

MasterSolution solve_master(const MasterLp& master, lp::Backend& backend, const lp::Basis* warm,
                            lp::Basis* basis_out = nullptr);

// Box estimate from the incumbent: l_j = c^s - c^s_{-j}, u_j = min over other
// clusters s' of c^{s'}_{+j} - c^{s'}. Throws Error(ComponentSpansClusters).
StabilizationBox estimate_dual_bounds(const Instance& instance, const Clustering& x_bar, const AggregationPartition& q);

// Halves-out widening of every active row; alpha = 0 rows use max(1, 0.05 u).
StabilizationBox update_box(const StabilizationBox& box, std::span<const BoundActivity> active);

// Box of a refined partition: each component takes the box of the old
// component that contains it.
StabilizationBox inherit_box(const StabilizationBox& box, const AggregationPartition& old_q,
                             const AggregationPartition& new_q);

// Turns an integral cover into a partition: each multiply covered point stays
// only in the column whose centroid is closest; empty columns are dropped.
// Labels are compacted, so the result may have fewer than k clusters.
Clustering cover_to_clustering(const Instance& instance, std::span<const Column> chosen);

// Owns the pool, the current partition and box, and a warm basis across solves.
class Master {
public:
    Master(const Instance& instance, std::size_t k, AggregationPartition q, StabilizationBox box,
           lp::Backend& backend);

    // False for duplicates. Throws Error(IncompatibleColumnInPool).
    bool add_column(Column c);
    void refine(AggregationPartition q, StabilizationBox box);
    void set_box(StabilizationBox box);
    MasterSolution solve();

    const ColumnPool& pool() const noexcept { return pool_; }
    const AggregationPartition& partition() const noexcept { return q_; }
    const StabilizationBox& box() const noexcept { return box_; }
    std::size_t k() const noexcept { return k_; }
    const lp::LinearProgram& lp() const noexcept { return lp_.lp; }

private:
    void rebuild();
    void apply_box_to_lp();

    const Instance& instance_;
    std::size_t k_;
    AggregationPartition q_;
    StabilizationBox box_;
    lp::Backend& backend_;
    ColumnPool pool_;
    MasterLp lp_;
    lp::Basis basis_;
};

}  // namespace mssc

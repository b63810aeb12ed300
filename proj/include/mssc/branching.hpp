#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mssc/column.hpp"
#include "mssc/instance.hpp"
#include "mssc/partition.hpp"
#include "mssc/pricing.hpp"

namespace mssc {

using PointPair = std::pair<std::size_t, std::size_t>;

struct BranchState {
    std::vector<PointPair> must_link;
    std::vector<PointPair> cannot_link;
    std::size_t depth = 0;

    bool empty() const noexcept { return must_link.empty() && cannot_link.empty(); }
    BranchState with_must_link(std::size_t i, std::size_t j) const;
    BranchState with_cannot_link(std::size_t i, std::size_t j) const;
    // Both or neither of every must-link pair; never both of a cannot-link pair.
    bool respects(const PointSet& members) const;
};

// Must-link closure (union-find) with the cannot-link graph on the groups.
struct GroupGraph {
    std::vector<std::size_t> group_of;             // point -> group
    std::vector<std::vector<std::size_t>> groups;  // sorted points, groups ordered by smallest point
    std::vector<std::vector<std::size_t>> conflicts;
    bool consistent = true;  // no cannot-link pair inside a group
};

GroupGraph contract(const BranchState& state, std::size_t n);

bool is_bipartite_cl_graph(const BranchState& state, std::size_t n);

struct BranchPair {
    std::size_t i = 0;
    std::size_t j = 0;
    double fraction = 0.0;  // sum of z over columns holding both
};

// Most fractional eligible Ryan-Foster pair (max min(f, 1 - f), ties to the
// smallest (i, j)). Throws Error(SolutionIntegral) when no column is fractional.
BranchPair find_branch_pair(std::span<const double> z, std::span<const Column> pool);

struct AssignmentInfo {
    bool used_lp = false;
    std::vector<double> lp_values;  // per group, when the LP was used
    double objective = 0.0;         // sum over chosen points of |p - y|^2 - lambda
};

// min sum_i (|p_i - y|^2 - lambda_i) v_i  s.t. must-link / cannot-link, v binary.
// Bipartite cannot-link graphs go through the LP relaxation (integral there);
// otherwise an exact maximum-weight independent set search over the
// constrained groups. Throws Error(InfeasibleConstraints).
PointSet assignment_step(std::span<const Point> points, std::span<const double> lambda, Point y,
                         const BranchState& state, AssignmentInfo* info = nullptr);

// LP relaxation of the assignment step, one value per must-link group (groups
// ordered by smallest point).
std::vector<double> assignment_lp_relaxation(std::span<const Point> points, std::span<const double> lambda, Point y,
                                             const BranchState& state);

struct HeuristicTrace {
    std::vector<double> objective;  // assignment objective per iteration (plus sigma)
    std::size_t iterations = 0;
};

// Alternating assignment / barycenter steps from the centroid of each seed.
PricingOutput heuristic_constrained_pricing(const Instance& instance, std::span<const double> lambda, double sigma,
                                            const BranchState& state, std::span<const PointSet> seeds,
                                            const AggregationPartition* q, std::size_t max_columns,
                                            double tolerance = kReducedCostTol,
                                            std::vector<HeuristicTrace>* traces = nullptr);

struct ExactPricingResult {
    PointSet members;
    double reduced_cost = 0.0;
    std::vector<double> ratio_trace;  // Dinkelbach ratio sequence
};

// Dinkelbach over must-link groups with an implicit-enumeration inner solver.
// Throws Error(TooLargeForExact) beyond `max_groups` profitable groups.
ExactPricingResult exact_constrained_pricing(const Instance& instance, std::span<const double> lambda, double sigma,
                                             const BranchState& state, const PointSet* initial = nullptr,
                                             std::size_t max_groups = 30);

// Exact constrained pricing over the arrangement of group discs: every cell
// set, reduced to each of its maximal cannot-link-independent subsets.
// `exact` is false if an independent-set enumeration had to be truncated.
PricingOutput arrangement_constrained_pricing(const Instance& instance, std::span<const double> lambda, double sigma,
                                              const BranchState& state, const AggregationPartition* q,
                                              std::size_t max_columns, double tolerance = kReducedCostTol);

}  // namespace mssc

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mssc/column.hpp"
#include "mssc/point_set.hpp"

namespace mssc {

// Partition of the covering constraints (one per point) into aggregated
// components. Component ids are stable across refinements: a split keeps the
// old id on the part inside the column and assigns a fresh id to the rest,
// which is appended at the end, so existing positions never move.
class AggregationPartition {
public:
    struct Component {
        std::size_t id = 0;
        std::vector<std::size_t> members;  // sorted
    };

    AggregationPartition() = default;

    static AggregationPartition singletons(std::size_t n);
    // Components ordered by their smallest member.
    static AggregationPartition from_labels(std::span<const std::size_t> labels);
    // Throws Error(InvalidArgument) unless the lists form an exact partition of 0..n-1.
    static AggregationPartition from_components(std::size_t n, std::vector<std::vector<std::size_t>> components);

    std::size_t size() const noexcept { return components_.size(); }
    std::size_t universe() const noexcept { return point_to_component_.size(); }
    const std::vector<Component>& components() const noexcept { return components_; }
    const Component& operator[](std::size_t j) const { return components_[j]; }
    std::size_t component_of(std::size_t point) const { return point_to_component_[point]; }
    std::size_t next_id() const noexcept { return next_id_; }

    // Position of the component with the given id, or size() if absent.
    std::size_t position_of_id(std::size_t id) const;

    PointSet component_set(std::size_t j) const;

    // Checks disjointness, coverage, nonemptiness and the inverse map.
    bool valid() const;

private:
    friend AggregationPartition update_partition(const AggregationPartition& q, const PointSet& column);
    void rebuild_index();

    std::vector<Component> components_;
    std::vector<std::size_t> point_to_component_;
    std::size_t next_id_ = 0;
};

// u(t, Q): number of components the column intersects without containing.
std::size_t count_incompatibilities(const PointSet& column, const AggregationPartition& q);
inline bool is_compatible(const PointSet& column, const AggregationPartition& q) {
    return count_incompatibilities(column, q) == 0;
}

enum class Disaggregation { Average, Sparse, Complementary };

struct DisaggregatedDuals {
    std::vector<double> lambda;  // per point
    double sigma = 0.0;
};

// Spreads each aggregated dual over its component's points so that the
// per-component sums are preserved. Complementary is not available and throws
// Error(InvalidArgument).
DisaggregatedDuals disaggregate(std::span<const double> aggregated, double sigma, const AggregationPartition& q,
                                Disaggregation strategy, std::uint64_t seed);

enum class QUpdateRule { MinRC, MinINC };

// Index of the chosen incompatible candidate. Throws Error(NoCandidates).
std::size_t select_incompatible(std::span<const PricedColumn> candidates, const AggregationPartition& q,
                                QUpdateRule rule);

// Splits every component the column cuts into (I_j ∩ t, I_j \ t).
// Throws Error(ColumnAlreadyCompatible) when nothing needs splitting.
AggregationPartition update_partition(const AggregationPartition& q, const PointSet& column);

}  // namespace mssc

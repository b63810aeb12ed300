#include "mssc/partition.hpp"

#include <algorithm>
#include <limits>

#include "mssc/error.hpp"
#include "mssc/random.hpp"

namespace mssc {

AggregationPartition AggregationPartition::singletons(std::size_t n) {
    AggregationPartition q;
    q.components_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) q.components_.push_back({i, {i}});
    q.next_id_ = n;
    q.point_to_component_.resize(n);
    q.rebuild_index();
    return q;
}

AggregationPartition AggregationPartition::from_labels(std::span<const std::size_t> labels) {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t l = labels[i];
        if (l >= slot.size()) slot.resize(l + 1, std::numeric_limits<std::size_t>::max());
        if (slot[l] == std::numeric_limits<std::size_t>::max()) {
            slot[l] = groups.size();
            groups.emplace_back();
        }
        groups[slot[l]].push_back(i);
    }
    return from_components(labels.size(), std::move(groups));
}

AggregationPartition AggregationPartition::from_components(std::size_t n,
                                                           std::vector<std::vector<std::size_t>> components) {
    std::vector<char> seen(n, 0);
    for (auto& c : components) {
        if (c.empty()) throw Error(ErrorCode::InvalidArgument, "empty component");
        std::sort(c.begin(), c.end());
        for (auto i : c) {
            if (i >= n || seen[i]) throw Error(ErrorCode::InvalidArgument, "components do not partition the points");
            seen[i] = 1;
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw Error(ErrorCode::InvalidArgument, "components do not cover every point");
    std::sort(components.begin(), components.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });

    AggregationPartition q;
    q.components_.reserve(components.size());
    for (std::size_t j = 0; j < components.size(); ++j) q.components_.push_back({j, std::move(components[j])});
    q.next_id_ = q.components_.size();
    q.point_to_component_.resize(n);
    q.rebuild_index();
    return q;
}

void AggregationPartition::rebuild_index() {
    for (std::size_t j = 0; j < components_.size(); ++j)
        for (auto i : components_[j].members) point_to_component_[i] = j;
}

std::size_t AggregationPartition::position_of_id(std::size_t id) const {
    for (std::size_t j = 0; j < components_.size(); ++j)
        if (components_[j].id == id) return j;
    return components_.size();
}

PointSet AggregationPartition::component_set(std::size_t j) const {
    return PointSet::from(universe(), components_[j].members);
}

bool AggregationPartition::valid() const {
    const std::size_t n = universe();
    std::vector<char> seen(n, 0);
    for (std::size_t j = 0; j < components_.size(); ++j) {
        const auto& c = components_[j];
        if (c.members.empty() || !std::is_sorted(c.members.begin(), c.members.end())) return false;
        for (auto i : c.members) {
            if (i >= n || seen[i] || point_to_component_[i] != j) return false;
            seen[i] = 1;
        }
    }
    return std::find(seen.begin(), seen.end(), 0) == seen.end();
}

namespace {

// Calls f(j, hits) for every component j the column touches.
template <class F>
void for_each_hit(const PointSet& column, const AggregationPartition& q, F&& f) {
    thread_local std::vector<std::size_t> counts;
    thread_local std::vector<std::size_t> touched;
    if (counts.size() < q.size()) counts.resize(q.size(), 0);
    touched.clear();
    column.for_each([&](std::size_t i) {
        const std::size_t j = q.component_of(i);
        if (counts[j]++ == 0) touched.push_back(j);
    });
    for (auto j : touched) {
        f(j, counts[j]);
        counts[j] = 0;
    }
}

}  // namespace

std::size_t count_incompatibilities(const PointSet& column, const AggregationPartition& q) {
    std::size_t u = 0;
    for_each_hit(column, q, [&](std::size_t j, std::size_t c) {
        if (c != q[j].members.size()) ++u;
    });
    return u;
}

DisaggregatedDuals disaggregate(std::span<const double> aggregated, double sigma, const AggregationPartition& q,
                                Disaggregation strategy, std::uint64_t seed) {
    if (aggregated.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "one dual per component expected");
    DisaggregatedDuals out;
    out.sigma = sigma;
    out.lambda.assign(q.universe(), 0.0);
    switch (strategy) {
        case Disaggregation::Average:
            for (std::size_t j = 0; j < q.size(); ++j) {
                const auto& m = q[j].members;
                const double v = aggregated[j] / static_cast<double>(m.size());
                for (auto i : m) out.lambda[i] = v;
            }
            break;
        case Disaggregation::Sparse:
            for (std::size_t j = 0; j < q.size(); ++j) {
                const auto& m = q[j].members;
                // Seeded per component id so the choice survives unrelated splits.
                Rng rng(derive_seed(seed, q[j].id));
                out.lambda[m[uniform_index(rng, m.size())]] = aggregated[j];
            }
            break;
        case Disaggregation::Complementary:
            throw Error(ErrorCode::InvalidArgument, "complementary disaggregation is not implemented");
    }
    return out;
}

std::size_t select_incompatible(std::span<const PricedColumn> candidates, const AggregationPartition& q,
                                QUpdateRule rule) {
    // Compatible candidates are skipped; ties go to the secondary key, then to
    // the lexicographically smaller member list.
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::size_t best = none, best_u = 0;
    for (std::size_t t = 0; t < candidates.size(); ++t) {
        const std::size_t u = count_incompatibilities(candidates[t].column.members, q);
        if (u == 0) continue;
        if (best == none) {
            best = t;
            best_u = u;
            continue;
        }
        const auto& a = candidates[t];
        const auto& b = candidates[best];
        bool better;
        if (rule == QUpdateRule::MinRC)
            better = a.reduced_cost < b.reduced_cost ||
                     (a.reduced_cost == b.reduced_cost && a.column.members.lex_less(b.column.members));
        else
            better = u < best_u || (u == best_u && (a.reduced_cost < b.reduced_cost ||
                                                    (a.reduced_cost == b.reduced_cost &&
                                                     a.column.members.lex_less(b.column.members))));
        if (better) {
            best = t;
            best_u = u;
        }
    }
    if (best == none) throw Error(ErrorCode::NoCandidates, "no incompatible candidate to select");
    return best;
}

AggregationPartition update_partition(const AggregationPartition& q, const PointSet& column) {
    std::vector<std::size_t> cut;
    for_each_hit(column, q, [&](std::size_t j, std::size_t c) {
        if (c != q[j].members.size()) cut.push_back(j);
    });
    if (cut.empty()) throw Error(ErrorCode::ColumnAlreadyCompatible, "column is already compatible with the partition");
    std::sort(cut.begin(), cut.end());

    AggregationPartition out = q;
    for (auto j : cut) {
        std::vector<std::size_t> inside, outside;
        for (auto i : q[j].members) (column.contains(i) ? inside : outside).push_back(i);
        out.components_[j].members = std::move(inside);
        out.components_.push_back({out.next_id_++, std::move(outside)});
    }
    out.rebuild_index();
    return out;
}

}  // namespace mssc

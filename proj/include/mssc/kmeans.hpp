#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mssc/instance.hpp"
#include "mssc/partition.hpp"

namespace mssc {

struct Clustering {
    std::vector<std::size_t> assignment;  // label per point, < k
    std::vector<Point> centroids;
    double cost = 0.0;
    std::size_t k = 0;

    std::vector<std::vector<std::size_t>> clusters() const;
};

// Builds a clustering from labels, recomputing centroids and cost. Throws
// Error(EmptyCluster) if some label in 0..k-1 is unused.
Clustering make_clustering(const Instance& instance, std::vector<std::size_t> assignment, std::size_t k);

enum class KMeansInit { Random, PlusPlus };

struct LloydOptions {
    KMeansInit init = KMeansInit::Random;
    std::size_t max_iterations = 1000;
    std::vector<double>* cost_trace = nullptr;  // objective after every assignment step
};

// Throws Error(InvalidK) unless 1 <= k <= n.
Clustering lloyd(const Instance& instance, std::size_t k, std::uint64_t seed, const LloydOptions& options = {});

// Best of `restarts` Lloyd runs; restart r uses derive_seed(seed, r). Ties go
// to the lowest restart index, so the result does not depend on `threads`.
Clustering multi_start(const Instance& instance, std::size_t k, std::size_t restarts, std::uint64_t seed,
                       std::size_t threads = 1, KMeansInit init = KMeansInit::Random);

enum class AggregationLevel { N, NHalf, NQuarter, K };

// level N: singletons; K: the clusters of x_bar; NHalf / NQuarter: nonempty
// intersections of x_bar with a fresh k-means solution using n/2 (n/4) clusters.
AggregationPartition initial_partition(const Instance& instance, const Clustering& x_bar, AggregationLevel level,
                                       std::uint64_t seed, std::size_t restarts = 10);

// Components common to both labelings.
AggregationPartition intersect_labelings(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace mssc

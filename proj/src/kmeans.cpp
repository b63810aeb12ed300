#include "mssc/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include "mssc/error.hpp"
#include "mssc/random.hpp"

namespace mssc {

std::vector<std::vector<std::size_t>> Clustering::clusters() const {
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
    return out;
}

Clustering make_clustering(const Instance& instance, std::vector<std::size_t> assignment, std::size_t k) {
    if (assignment.size() != instance.size()) throw Error(ErrorCode::DimensionMismatch, "one label per point expected");
    Clustering c;
    c.k = k;
    c.assignment = std::move(assignment);
    for (auto l : c.assignment)
        if (l >= k) throw Error(ErrorCode::InvalidK, "label out of range");
    c.centroids.resize(k);
    const auto groups = c.clusters();
    for (std::size_t s = 0; s < k; ++s) {
        const auto cc = cluster_cost(instance, std::span<const std::size_t>(groups[s]));
        c.centroids[s] = cc.centroid;
        c.cost += cc.cost;
    }
    return c;
}

namespace {

std::vector<Point> seed_centroids(const Instance& inst, std::size_t k, Rng& rng, KMeansInit init) {
    const std::size_t n = inst.size();
    std::vector<Point> centroids;
    centroids.reserve(k);
    if (init == KMeansInit::Random) {
        // Partial Fisher-Yates: k distinct points.
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t s = 0; s < k; ++s) {
            const std::size_t r = s + uniform_index(rng, n - s);
            std::swap(idx[s], idx[r]);
            centroids.push_back(inst[idx[s]]);
        }
        return centroids;
    }
    centroids.push_back(inst[uniform_index(rng, n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(inst[i], centroids[0]);
    while (centroids.size() < k) {
        double total = 0.0;
        for (auto d : d2) total += d;
        std::size_t pick = 0;
        if (total <= 0.0) {
            pick = uniform_index(rng, n);
        } else {
            double target = uniform_real(rng) * total;
            for (pick = 0; pick + 1 < n; ++pick) {
                target -= d2[pick];
                if (target < 0.0) break;
            }
        }
        centroids.push_back(inst[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(inst[i], inst[pick]));
    }
    return centroids;
}

double assignment_cost(const Instance& inst, const std::vector<std::size_t>& label, const std::vector<Point>& c) {
    double f = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) f += squared_distance(inst[i], c[label[i]]);
    return f;
}

void update_centroids(const Instance& inst, const std::vector<std::size_t>& label, std::vector<Point>& c,
                      std::vector<std::size_t>& sizes) {
    const std::size_t k = c.size();
    std::vector<ClusterStats> st(k);
    for (std::size_t i = 0; i < inst.size(); ++i) st[label[i]].add(inst[i]);
    sizes.assign(k, 0);
    for (std::size_t s = 0; s < k; ++s) {
        sizes[s] = static_cast<std::size_t>(st[s].weight);
        if (sizes[s]) c[s] = st[s].centroid();
    }
}

}  // namespace

Clustering lloyd(const Instance& instance, std::size_t k, std::uint64_t seed, const LloydOptions& options) {
    const std::size_t n = instance.size();
    if (k < 1 || k > n) throw Error(ErrorCode::InvalidK, "k must lie in [1, n]");
    Rng rng(seed);
    std::vector<Point> centroids = seed_centroids(instance, k, rng, options.init);
    std::vector<std::size_t> label(n, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> sizes;

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double bd = squared_distance(instance[i], centroids[0]);
            for (std::size_t s = 1; s < k; ++s) {
                const double d = squared_distance(instance[i], centroids[s]);
                if (d < bd) {
                    bd = d;
                    best = s;
                }
            }
            if (label[i] != best) {
                label[i] = best;
                changed = true;
            }
        }
        if (!changed) break;

        update_centroids(instance, label, centroids, sizes);
        // Empty clusters take the point farthest from its centroid among
        // clusters that can spare one.
        for (std::size_t s = 0; s < k; ++s) {
            if (sizes[s]) continue;
            std::size_t far = n;
            double fd = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[label[i]] < 2) continue;
                const double d = squared_distance(instance[i], centroids[label[i]]);
                if (d > fd) {
                    fd = d;
                    far = i;
                }
            }
            --sizes[label[far]];
            label[far] = s;
            sizes[s] = 1;
            update_centroids(instance, label, centroids, sizes);
        }
        if (options.cost_trace) options.cost_trace->push_back(assignment_cost(instance, label, centroids));
    }
    return make_clustering(instance, std::move(label), k);
}

Clustering multi_start(const Instance& instance, std::size_t k, std::size_t restarts, std::uint64_t seed,
                       std::size_t threads, KMeansInit init) {
    if (k < 1 || k > instance.size()) throw Error(ErrorCode::InvalidK, "k must lie in [1, n]");
    if (restarts == 0) throw Error(ErrorCode::InvalidArgument, "at least one restart is required");
    threads = std::max<std::size_t>(1, std::min(threads, restarts));

    struct Best {
        Clustering c;
        std::size_t index = std::numeric_limits<std::size_t>::max();
    };
    std::vector<Best> best(threads);
    LloydOptions opts;
    opts.init = init;
    auto work = [&](std::size_t t) {
        for (std::size_t r = t; r < restarts; r += threads) {
            Clustering c = lloyd(instance, k, derive_seed(seed, r), opts);
            if (best[t].index == std::numeric_limits<std::size_t>::max() || c.cost < best[t].c.cost) {
                best[t].c = std::move(c);
                best[t].index = r;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    std::size_t pick = 0;
    for (std::size_t t = 1; t < threads; ++t) {
        const auto& a = best[t];
        const auto& b = best[pick];
        if (a.c.cost < b.c.cost || (a.c.cost == b.c.cost && a.index < b.index)) pick = t;
    }
    return std::move(best[pick].c);
}

AggregationPartition intersect_labelings(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "labelings differ in length");
    std::size_t kb = 0;
    for (auto l : b) kb = std::max(kb, l + 1);
    std::vector<std::size_t> joint(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) joint[i] = a[i] * kb + b[i];
    return AggregationPartition::from_labels(joint);
}

AggregationPartition initial_partition(const Instance& instance, const Clustering& x_bar, AggregationLevel level,
                                       std::uint64_t seed, std::size_t restarts) {
    const std::size_t n = instance.size();
    if (x_bar.assignment.size() != n) throw Error(ErrorCode::DimensionMismatch, "clustering does not match instance");
    switch (level) {
        case AggregationLevel::N:
            return AggregationPartition::singletons(n);
        case AggregationLevel::K:
            return AggregationPartition::from_labels(x_bar.assignment);
        case AggregationLevel::NHalf:
        case AggregationLevel::NQuarter: {
            const std::size_t kt = std::max<std::size_t>(1, level == AggregationLevel::NHalf ? n / 2 : n / 4);
            const Clustering x_tilde = multi_start(instance, kt, restarts, derive_seed(seed, 0x51a7));
            return intersect_labelings(x_bar.assignment, x_tilde.assignment);
        }
    }
    throw Error(ErrorCode::InvalidLevel, "unknown aggregation level");
}

}  // namespace mssc

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mssc/error.hpp"
#include "mssc/kmeans.hpp"
#include "mssc/random.hpp"
#include "oracles.hpp"

using namespace mssc;

namespace {

std::set<std::vector<std::size_t>> as_set(const AggregationPartition& q) {
    std::set<std::vector<std::size_t>> s;
    for (const auto& c : q.components()) s.insert(c.members);
    return s;
}

}  // namespace

TEST_CASE("degenerate k") {
    std::mt19937_64 rng(1);
    const Instance inst("r", oracle::random_points(rng, 12));
    const auto all = lloyd(inst, 12, 4);
    CHECK(all.cost == doctest::Approx(0.0).scale(1.0));
    std::set<std::size_t> labels(all.assignment.begin(), all.assignment.end());
    CHECK(labels.size() == 12);

    const auto one = lloyd(inst, 1, 4);
    std::vector<std::size_t> every(12);
    for (std::size_t i = 0; i < 12; ++i) every[i] = i;
    const auto cc = cluster_cost(inst, every);
    CHECK(one.cost == doctest::Approx(cc.cost).epsilon(1e-12));
    CHECK(one.centroids[0].x == doctest::Approx(cc.centroid.x));
    CHECK(one.centroids[0].y == doctest::Approx(cc.centroid.y));

    CHECK_THROWS_AS(lloyd(inst, 0, 1), Error);
    CHECK_THROWS_AS(lloyd(inst, 13, 1), Error);
}

TEST_CASE("two well-separated pairs") {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {50, 50}, {50, 51}};
    const Instance inst("pairs", pts);
    const auto c = multi_start(inst, 2, 5, 3);
    CHECK(c.cost == doctest::Approx(oracle::mssc_optimum(pts, 2)));
    CHECK(c.cost == doctest::Approx(1.0));
    CHECK(c.assignment[0] == c.assignment[1]);
    CHECK(c.assignment[2] == c.assignment[3]);
    CHECK(c.assignment[0] != c.assignment[2]);
}

TEST_CASE("Lloyd objective never increases") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst("r", oracle::random_points(rng, 40));
        std::vector<double> trace;
        LloydOptions o;
        o.cost_trace = &trace;
        o.init = trial % 2 ? KMeansInit::PlusPlus : KMeansInit::Random;
        const auto c = lloyd(inst, 5, trial, o);
        REQUIRE(!trace.empty());
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-9);
        CHECK(c.cost == doctest::Approx(trace.back()).epsilon(1e-9));
        // Every point sits with its nearest centroid.
        for (std::size_t i = 0; i < inst.size(); ++i) {
            const double own = squared_distance(inst[i], c.centroids[c.assignment[i]]);
            for (const auto& ctr : c.centroids) CHECK(own <= squared_distance(inst[i], ctr) + 1e-9);
        }
    }
}

TEST_CASE("multi-start") {
    std::mt19937_64 rng(4);
    const Instance inst("r", oracle::random_points(rng, 30));
    const auto single = multi_start(inst, 3, 1, 77);
    const auto direct = lloyd(inst, 3, derive_seed(77, 0));
    CHECK(single.cost == direct.cost);
    CHECK(single.assignment == direct.assignment);

    // Thread count does not change the result.
    const auto a = multi_start(inst, 4, 40, 9, 1);
    const auto b = multi_start(inst, 4, 40, 9, 4);
    CHECK(a.cost == b.cost);
    CHECK(a.assignment == b.assignment);

    for (int trial = 0; trial < 10; ++trial) {
        const auto pts = oracle::random_points(rng, 6 + trial % 5);
        const Instance small("s", pts);
        CHECK(multi_start(small, 2, 100, trial).cost ==
              doctest::Approx(oracle::mssc_optimum(pts, 2)).epsilon(1e-9));
    }
}

TEST_CASE("make_clustering") {
    const Instance inst("t", {{0, 0}, {2, 0}, {9, 9}});
    const auto c = make_clustering(inst, {0, 0, 1}, 2);
    CHECK(c.cost == doctest::Approx(2.0));
    CHECK(c.clusters() == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
    CHECK_THROWS_AS(make_clustering(inst, {0, 0, 0}, 2), Error);
}

TEST_CASE("initial partitions") {
    std::mt19937_64 rng(8);
    const Instance inst("r", oracle::random_points(rng, 40));
    const auto x_bar = multi_start(inst, 4, 10, 1);

    const auto qn = initial_partition(inst, x_bar, AggregationLevel::N, 1);
    CHECK(qn.size() == 40);
    CHECK(qn.valid());

    const auto qk = initial_partition(inst, x_bar, AggregationLevel::K, 1);
    CHECK(qk.size() == 4);
    std::set<std::vector<std::size_t>> clusters;
    for (auto& c : x_bar.clusters()) clusters.insert(c);
    CHECK(as_set(qk) == clusters);

    for (auto level : {AggregationLevel::NHalf, AggregationLevel::NQuarter}) {
        const auto q = initial_partition(inst, x_bar, level, 1);
        CHECK(q.valid());
        CHECK(q.size() >= (level == AggregationLevel::NHalf ? 20u : 10u));
        // Every component lies inside one cluster of x_bar.
        for (const auto& c : q.components())
            for (auto i : c.members) CHECK(x_bar.assignment[i] == x_bar.assignment[c.members[0]]);
    }
}

TEST_CASE("intersection of two labelings") {
    // x_bar = {{1,2,3},{4,5,6}}, x_tilde = {{1,2},{3},{4,5,6}} (0-based here).
    const std::vector<std::size_t> a{0, 0, 0, 1, 1, 1};
    const std::vector<std::size_t> b{0, 0, 1, 2, 2, 2};
    const auto q = intersect_labelings(a, b);
    CHECK(q.size() == 3);
    CHECK(as_set(q) == std::set<std::vector<std::size_t>>{{0, 1}, {2}, {3, 4, 5}});
    for (const auto& c : q.components())
        for (auto i : c.members) {
            CHECK(a[i] == a[c.members[0]]);
            CHECK(b[i] == b[c.members[0]]);
        }
}

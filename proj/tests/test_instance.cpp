#include <doctest.h>

#include <cmath>
#include <random>

#include "mssc/error.hpp"
#include "mssc/instance.hpp"
#include "oracles.hpp"

using namespace mssc;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no exception");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("minimal TSPLIB text") {
    const auto inst = parse_tsplib("NAME: tiny\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\n"
                                   "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n");
    CHECK(inst.size() == 3);
    CHECK(inst.name() == "tiny");
    CHECK(inst[1] == Point{1, 0});
    CHECK(inst[2] == Point{0, 1});
}

TEST_CASE("TSPLIB errors") {
    CHECK(code_of([] {
              parse_tsplib("DIMENSION: 5\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\n4 1 1\n");
          }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n"); }) ==
          ErrorCode::UnsupportedEdgeWeightType);
    CHECK(code_of([] { parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 zero\n2 1 0\n"); }) ==
          ErrorCode::MalformedLine);
    CHECK(code_of([] { load_instance("/nonexistent/file.tsp"); }) == ErrorCode::Io);
}

TEST_CASE("bundled berlin52 file") {
    const auto inst = load_instance(MSSC_TEST_DATA "/berlin52.tsp");
    CHECK(inst.size() == 52);
    CHECK(inst.name() == "berlin52");
    CHECK(inst[0] == Point{565.0, 575.0});
    CHECK(inst[51] == Point{1740.0, 245.0});
}

TEST_CASE("TSPLIB round trip") {
    std::mt19937_64 rng(3);
    const auto pts = oracle::random_points(rng, 17, 1000.0);
    const Instance a("rt", pts);
    const Instance b = parse_tsplib(serialize_tsplib(a));
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == a[i]);
}

TEST_CASE("plain coordinate files") {
    const auto inst = parse_xy("# comment\n0 0\n1,2\n\n3.5 -4\n");
    CHECK(inst.size() == 3);
    CHECK(inst[1] == Point{1, 2});
    CHECK(inst[2] == Point{3.5, -4});
    CHECK(code_of([] { parse_xy("1 2\nfoo\n"); }) == ErrorCode::MalformedLine);
}

TEST_CASE("squared distance") {
    CHECK(squared_distance({0, 0}, {0, 0}) == 0.0);
    CHECK(squared_distance({0, 0}, {3, 4}) == 25.0);
    CHECK(squared_distance({1, 2}, {4, 6}) == 25.0);
}

TEST_CASE("cluster cost basics") {
    const Instance inst("pair", {{0, 0}, {2, 0}, {7, 7}});
    const std::vector<std::size_t> single{2};
    const auto s = cluster_cost(inst, single);
    CHECK(s.cost == 0.0);
    CHECK(s.centroid == Point{7, 7});
    const std::vector<std::size_t> pair{0, 1};
    const auto p = cluster_cost(inst, pair);
    CHECK(p.cost == doctest::Approx(2.0));
    CHECK(p.centroid == Point{1, 0});
    CHECK_THROWS_AS(cluster_cost(inst, std::vector<std::size_t>{}), Error);
}

TEST_CASE("cluster cost equals the pairwise-distance identity") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = oracle::random_points(rng, 6, trial % 2 ? 1e4 : 1.0);
        const Instance inst("r", pts);
        const std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
        double pair_sum = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j) pair_sum += squared_distance(pts[i], pts[j]);
        const double expected = pair_sum / 6.0;
        CHECK(cluster_cost(inst, all).cost == doctest::Approx(expected).epsilon(1e-9));
        CHECK(cluster_cost(inst, PointSet::from(6, all)).cost == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("running statistics agree with the two-pass cost") {
    std::mt19937_64 rng(21);
    const auto pts = oracle::random_points(rng, 30, 50.0);
    ClusterStats st;
    std::vector<std::size_t> mem;
    for (std::size_t i = 0; i < 30; ++i) {
        st.add(pts[i]);
        mem.push_back(i);
        CHECK(st.cost() == doctest::Approx(oracle::sse(pts, mem)).epsilon(1e-9).scale(1.0));
    }
    for (std::size_t i = 0; i < 10; ++i) st.remove(pts[i]);
    mem.erase(mem.begin(), mem.begin() + 10);
    CHECK(st.cost() == doctest::Approx(oracle::sse(pts, mem)).epsilon(1e-9));
}

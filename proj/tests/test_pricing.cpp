#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mssc/arrangement.hpp"
#include "mssc/error.hpp"
#include "mssc/geometry.hpp"
#include "mssc/pricing.hpp"
#include "oracles.hpp"

using namespace mssc;

namespace {

struct Duals {
    std::vector<double> lambda;
    double sigma;
};

Duals random_duals(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Duals d;
    d.lambda.resize(n);
    for (auto& l : d.lambda) l = u(rng) < 0.1 ? 0.0 : u(rng) * scale;
    d.sigma = u(rng) * 2.0 * scale;
    return d;
}

bool near(const Point& a, const Point& b) { return squared_distance(a, b) < 1e-18; }

}  // namespace

TEST_CASE("reduced cost") {
    const Instance inst("t", {{0, 0}, {2, 0}, {5, 5}});
    const std::vector<double> zero(3, 0.0);
    const auto pair = Column::make(inst, PointSet(3, {0, 1}));
    CHECK(reduced_cost(pair, zero, 0.0) == doctest::Approx(2.0));
    const std::vector<double> lam{1.0, 2.0, 3.0};
    const auto single = Column::make(inst, PointSet(3, {2}));
    CHECK(reduced_cost(single, lam, 4.0) == doctest::Approx(1.0));

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = oracle::random_points(rng, 9);
        const Instance r("r", pts);
        const auto d = random_duals(rng, 9, 20.0);
        PointSet s(9);
        std::vector<std::size_t> mem;
        double lam_sum = 0;
        for (std::size_t i = 0; i < 9; ++i)
            if (rng() % 2) {
                s.insert(i);
                mem.push_back(i);
                lam_sum += d.lambda[i];
            }
        if (mem.empty()) continue;
        const double expected = oracle::sse(pts, mem) + d.sigma - lam_sum;
        CHECK(reduced_cost(Column::make(r, s), d.lambda, d.sigma) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("circle intersections") {
    const std::vector<Point> p{{0, 0}, {2, 0}};
    const auto tangent = candidate_centers(p, std::vector<double>{1.0, 1.0});
    REQUIRE(tangent.size() == 3);
    CHECK(near(tangent[0], {1, 0}));
    CHECK(near(tangent[1], {0, 0}));
    CHECK(near(tangent[2], {2, 0}));

    const auto two = candidate_centers(p, std::vector<double>{2.0, 2.0});
    REQUIRE(two.size() == 4);
    const bool order_a = near(two[0], {1, 1}) && near(two[1], {1, -1});
    const bool order_b = near(two[0], {1, -1}) && near(two[1], {1, 1});
    CHECK((order_a || order_b));

    const auto apart = intersect({{0, 0}, 1.0}, {{5, 0}, 1.0});
    CHECK(apart.count == 0);
    const auto inner = intersect({{0, 0}, 3.0}, {{1, 0}, 2.0});
    CHECK(inner.count == 1);
    CHECK(near(inner.points[0], {3, 0}));
    const auto same = intersect({{1, 1}, 2.0}, {{1, 1}, 2.0});
    CHECK(same.coincident);

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = oracle::random_points(rng, 10);
        const auto d = random_duals(rng, 10, 30.0);
        const auto c = candidate_centers(pts, d.lambda);
        CHECK(c.size() <= 2 * 45 + 10);
        // Every vertex lies on both circles it came from (checked loosely: on some two circles).
        for (std::size_t v = 0; v + 10 < c.size(); ++v) {
            int on = 0;
            for (std::size_t i = 0; i < 10; ++i)
                if (std::abs(squared_distance(c[v], pts[i]) - d.lambda[i]) < 1e-6 * std::max(1.0, d.lambda[i])) ++on;
            CHECK(on >= 2);
        }
    }
}

TEST_CASE("center refinement") {
    // Inside one disc only: converges to that point.
    const std::vector<Point> p{{0, 0}, {10, 0}};
    const auto r = refine_center(p, std::vector<double>{4.0, 4.0}, {0.5, 0.5});
    CHECK(near(r.center, {0, 0}));
    CHECK(r.members == PointSet(2, {0}));

    // Symmetric pair, both discs cover the midpoint.
    const auto m = refine_center(std::vector<Point>{{0, 0}, {2, 0}}, std::vector<double>{4.0, 4.0}, {1.0, 0.3});
    CHECK(near(m.center, {1, 0}));
    CHECK(m.members == PointSet(2, {0, 1}));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = oracle::random_points(rng, 12);
        const auto d = random_duals(rng, 12, 25.0);
        std::vector<double> trace;
        refine_center(pts, d.lambda, pts[trial % 12], &trace);
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-9);
        CHECK(trace.size() <= 101);
    }
}

TEST_CASE("exhaustive oracle") {
    const std::vector<Point> one{{3, 4}};
    const auto r1 = oracle_price(one, std::vector<double>{2.5}, 1.0);
    CHECK(r1.members == PointSet(1, {0}));
    CHECK(r1.reduced_cost == doctest::Approx(1.0 - 2.5));

    // Pair at distance 2: subsets {0}, {1} give sigma - L, both give 2 + sigma - 2L.
    const std::vector<Point> two{{0, 0}, {2, 0}};
    const auto r2 = oracle_price(two, std::vector<double>{10.0, 10.0}, 1.0);
    CHECK(r2.members == PointSet(2, {0, 1}));
    CHECK(r2.reduced_cost == doctest::Approx(2.0 + 1.0 - 20.0));

    std::vector<Point> big(21);
    CHECK_THROWS_AS(oracle_price(big, std::vector<double>(21, 1.0), 0.0), Error);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 11;
        const auto pts = oracle::random_points(rng, n);
        const auto d = random_duals(rng, n, 20.0);
        CHECK(oracle_price(pts, d.lambda, d.sigma).reduced_cost ==
              doctest::Approx(oracle::subset_minimum(pts, d.lambda, d.sigma)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("pricing with zero duals finds nothing") {
    std::mt19937_64 rng(5);
    const Instance inst("r", oracle::random_points(rng, 10));
    const std::vector<double> zero(10, 0.0);
    PricingInput in;
    in.lambda = zero;
    in.sigma = 0.5;
    const auto out = price(inst, in);
    CHECK(out.columns.empty());
    CHECK(out.best_reduced_cost == doctest::Approx(0.5));
}

TEST_CASE("arrangement pricing equals the oracle") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 13;  // up to 14
        const auto pts = trial % 3 ? oracle::random_points(rng, n) : oracle::clustered_points(rng, n, 3, 1.0, 10.0);
        const Instance inst("r", pts);
        const auto d = random_duals(rng, n, trial % 2 ? 30.0 : 5.0);
        PricingInput in;
        in.lambda = d.lambda;
        in.sigma = d.sigma;
        const auto out = price(inst, in);
        const auto ref = oracle_price(pts, d.lambda, d.sigma);
        CHECK(out.exact);
        CHECK(std::abs(out.best_reduced_cost - ref.reduced_cost) <= 1e-6);
        for (std::size_t t = 0; t < out.columns.size(); ++t) {
            const auto& c = out.columns[t];
            const auto cc = cluster_cost(inst, c.column.members);
            CHECK(std::abs(c.column.cost - cc.cost) <= 1e-9 * std::max(1.0, cc.cost));
            CHECK(c.reduced_cost < -kReducedCostTol);
            CHECK(c.reduced_cost == doctest::Approx(reduced_cost(c.column, d.lambda, d.sigma)).epsilon(1e-9));
            if (t) CHECK(out.columns[t - 1].reduced_cost <= c.reduced_cost);
        }
        if (ref.reduced_cost < -kReducedCostTol) {
            REQUIRE(!out.columns.empty());
            CHECK(std::abs(out.columns.front().reduced_cost - ref.reduced_cost) <= 1e-6);
        } else {
            CHECK(out.columns.empty());
        }
    }
}

TEST_CASE("refinement pricing never beats the oracle and is usually exact") {
    std::mt19937_64 rng(7);
    int exact = 0, total = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 13;
        const auto pts = oracle::random_points(rng, n);
        const Instance inst("r", pts);
        const auto d = random_duals(rng, n, 30.0);
        PricingInput in;
        in.lambda = d.lambda;
        in.sigma = d.sigma;
        in.method = PricingMethod::Refinement;
        const auto out = price(inst, in);
        const auto ref = oracle_price(pts, d.lambda, d.sigma);
        CHECK_FALSE(out.exact);
        CHECK(out.best_reduced_cost >= ref.reduced_cost - 1e-9);
        ++total;
        exact += std::abs(out.best_reduced_cost - ref.reduced_cost) <= 1e-6;
    }
    MESSAGE("refinement matched the oracle on " << exact << " of " << total);
    CHECK(exact >= total * 9 / 10);
}

TEST_CASE("compatible split and truncation") {
    std::mt19937_64 rng(8);
    const auto pts = oracle::random_points(rng, 12);
    const Instance inst("r", pts);
    const auto d = random_duals(rng, 12, 40.0);
    const auto q = AggregationPartition::from_labels(std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5});
    PricingInput in;
    in.lambda = d.lambda;
    in.sigma = 0.0;
    in.partition = &q;
    const auto full = price(inst, in);
    for (const auto& c : full.compatible) CHECK(is_compatible(c.column.members, q));
    std::size_t n_compat = 0;
    for (const auto& c : full.columns) n_compat += is_compatible(c.column.members, q);
    CHECK(n_compat == full.compatible.size());
    for (std::size_t a = 0; a < full.columns.size(); ++a)
        for (std::size_t b = a + 1; b < full.columns.size(); ++b)
            CHECK(full.columns[a].column.members != full.columns[b].column.members);

    in.max_columns = 3;
    const auto few = price(inst, in);
    CHECK(few.columns.size() <= 3);
    CHECK(few.compatible.size() <= 3);
    for (std::size_t t = 0; t < few.columns.size(); ++t)
        CHECK(few.columns[t].column.members == full.columns[t].column.members);
}

TEST_CASE("pricing is deterministic") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst("r", oracle::random_points(rng, 14));
        const auto d = random_duals(rng, 14, 30.0);
        PricingInput in;
        in.lambda = d.lambda;
        in.sigma = d.sigma;
        const auto a = price(inst, in);
        const auto b = price(inst, in);
        REQUIRE(a.columns.size() == b.columns.size());
        for (std::size_t t = 0; t < a.columns.size(); ++t) {
            CHECK(a.columns[t].column.members == b.columns[t].column.members);
            CHECK(a.columns[t].reduced_cost == b.columns[t].reduced_cost);
        }
        CHECK(a.best_members == b.best_members);
    }
}

TEST_CASE("degenerate geometry") {
    // Coincident points and concentric discs.
    const std::vector<Point> pts{{1, 1}, {1, 1}, {1, 1}, {4, 1}, {1, 4}};
    const Instance inst("dup", pts);
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = random_duals(rng, 5, 12.0);
        auto lam = d.lambda;
        if (trial % 3 == 0) lam[1] = lam[0];
        if (trial % 4 == 0) lam[3] = 9.0, lam[4] = 9.0;  // both boundaries pass through (1,1)
        PricingInput in;
        in.lambda = lam;
        in.sigma = d.sigma;
        const auto out = price(inst, in);
        CHECK(std::abs(out.best_reduced_cost - oracle_price(pts, lam, d.sigma).reduced_cost) <= 1e-6);
    }
}

namespace {

// Records the sets reported through either arrangement interface.
struct SetRecorder {
    std::set<std::vector<std::size_t>> sets;
    std::set<std::size_t> running;

    void visit(const std::vector<std::size_t>& s) { sets.insert(s); }
    void clear_running() { running.clear(); }
    void set_running(std::size_t i, bool in) { in ? (void)running.insert(i) : (void)running.erase(i); }
    void visit_running(std::size_t a, std::size_t b) {
        for (int mask = 0; mask < 4; ++mask) {
            std::set<std::size_t> s = running;
            if (mask & 1) s.insert(a);
            if (mask & 2) s.insert(b);
            if (!s.empty()) sets.emplace(s.begin(), s.end());
        }
    }
};

std::set<std::vector<std::size_t>> enumerated(const DiscArrangement& arr) {
    SetRecorder r;
    arr.enumerate([&](const std::vector<std::size_t>& s) { r.visit(s); });
    return r.sets;
}

}  // namespace

TEST_CASE("arrangement sweep reports the same cells as enumeration") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 40;
        std::vector<DiscSite> sites(n);
        for (auto& s : sites) s = {{u(rng), u(rng)}, u(rng) < 1.0 ? 0.0 : u(rng) * u(rng)};
        const DiscArrangement arr(sites);
        SetRecorder swept;
        REQUIRE(arr.sweep(swept));
        CHECK(swept.sets == enumerated(arr));
    }
}

TEST_CASE("arrangement sweep on cocircular grids") {
    // Unit grid with radius 1: four circles meet at every grid point.
    std::vector<DiscSite> sites;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) sites.push_back({{double(x), double(y)}, 1.0});
    const DiscArrangement arr(sites);
    SetRecorder swept;
    REQUIRE(arr.sweep(swept));
    const auto all = enumerated(arr);
    CHECK(std::includes(swept.sets.begin(), swept.sets.end(), all.begin(), all.end()));

    sites.push_back(sites.front());
    SetRecorder again;
    CHECK_FALSE(DiscArrangement(sites).sweep(again));
}

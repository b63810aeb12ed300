#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mssc/error.hpp"
#include "mssc/kmeans.hpp"
#include "mssc/master.hpp"
#include "oracles.hpp"

using namespace mssc;

namespace {

std::vector<Column> all_columns(const Instance& inst) {
    std::vector<Column> cols;
    const std::size_t n = inst.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        PointSet s(n);
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) s.insert(i);
        cols.push_back(Column::make(inst, s));
    }
    return cols;
}

// Plain aggregated master without stabilization variables, solved by the dense oracle.
std::optional<double> plain_agrmp(std::span<const Column> pool, const AggregationPartition& q, std::size_t k) {
    oracle::DenseLp d;
    const std::size_t m = q.size();
    d.a.assign(m + 1, std::vector<double>(pool.size(), 0.0));
    for (std::size_t t = 0; t < pool.size(); ++t) {
        d.c.push_back(pool[t].cost);
        d.ub.push_back(lp::kInf);
        for (std::size_t j = 0; j < m; ++j)
            if (pool[t].members.contains(q[j].members[0])) d.a[j][t] = 1.0;
        d.a[m][t] = 1.0;
    }
    for (std::size_t j = 0; j < m; ++j) {
        d.b.push_back(1.0);
        d.sense.push_back(1);
    }
    d.b.push_back(static_cast<double>(k));
    d.sense.push_back(-1);
    return oracle::tableau_solve(d);
}

// Random pool compatible with q: unions of random components, plus a cover of q itself.
std::vector<Column> random_compatible_pool(std::mt19937_64& rng, const Instance& inst, const AggregationPartition& q,
                                           std::size_t size) {
    std::vector<Column> pool;
    std::bernoulli_distribution b(0.35);
    for (const auto& c : q.components()) pool.push_back(Column::make(inst, PointSet::from(inst.size(), c.members)));
    while (pool.size() < size) {
        PointSet s(inst.size());
        for (const auto& c : q.components())
            if (b(rng))
                for (auto i : c.members) s.insert(i);
        if (!s.empty()) pool.push_back(Column::make(inst, s));
    }
    return pool;
}

double rc_aggregated(const Column& c, const AggregationPartition& q, const MasterSolution& s) {
    double rc = c.cost + s.sigma;
    for (std::size_t j = 0; j < q.size(); ++j)
        if (c.members.contains(q[j].members[0])) rc -= s.lambda_bar[j];
    return rc;
}

}  // namespace

TEST_CASE("full enumeration on singletons gives the MSSC optimum") {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {4, 0}, {4, 2}};
    const Instance inst("toy4", pts);
    const auto pool = all_columns(inst);
    const auto q = AggregationPartition::singletons(4);
    lp::BundledSimplex be;
    const auto mlp = build_agrmp(pool, q, 2, StabilizationBox::unbounded(4));
    const auto s = solve_master(mlp, be, nullptr);
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(oracle::mssc_optimum(pts, 2)).epsilon(1e-10));
    CHECK(s.dual_objective(2) == doctest::Approx(s.objective).epsilon(1e-9));
    for (const auto& c : pool) CHECK(rc_aggregated(c, q, s) >= -1e-7);
}

TEST_CASE("only one feasible combination") {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}, {9, 9}, {10, 9}, {9, 10}};
    const Instance inst("toy6", pts);
    const auto x_bar = make_clustering(inst, {0, 0, 0, 1, 1, 1}, 2);
    const auto q = AggregationPartition::from_components(6, {{0, 1}, {2}, {3, 4, 5}});
    std::vector<Column> pool;
    for (const auto& c : x_bar.clusters()) pool.push_back(Column::make(inst, PointSet::from(6, c)));
    lp::BundledSimplex be;
    const auto s = solve_master(build_agrmp(pool, q, 2, StabilizationBox::unbounded(3)), be, nullptr);
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(x_bar.cost).epsilon(1e-12));
    CHECK(s.z[0] == doctest::Approx(1.0));
    CHECK(s.z[1] == doctest::Approx(1.0));
}

TEST_CASE("pool must be compatible") {
    const Instance inst("t", {{0, 0}, {1, 0}, {2, 0}});
    const auto q = AggregationPartition::from_components(3, {{0, 1}, {2}});
    const std::vector<Column> pool{Column::make(inst, PointSet(3, {0, 2}))};
    try {
        build_agrmp(pool, q, 1, StabilizationBox::unbounded(2));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompatibleColumnInPool);
    }
}

TEST_CASE("unbounded boxes leave the master unchanged") {
    std::mt19937_64 rng(6);
    lp::BundledSimplex be;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 8 + trial % 10;
        const Instance inst("r", oracle::random_points(rng, n));
        std::vector<std::size_t> labels(n);
        for (auto& l : labels) l = rng() % std::max<std::size_t>(2, n / 2);
        const auto q = AggregationPartition::from_labels(labels);
        const auto pool = random_compatible_pool(rng, inst, q, q.size() + 15);
        const std::size_t k = 1 + trial % 4;
        const auto ref = plain_agrmp(pool, q, k);
        const auto s = solve_master(build_agrmp(pool, q, k, StabilizationBox::unbounded(q.size())), be, nullptr);
        if (!ref) {
            CHECK(s.status == lp::Status::Infeasible);
            continue;
        }
        REQUIRE(s.status == lp::Status::Optimal);
        CHECK(s.objective == doctest::Approx(*ref).epsilon(1e-8));
        CHECK_FALSE(s.any_active());
    }
}

TEST_CASE("stabilized duals stay inside the box unless penalized") {
    std::mt19937_64 rng(7);
    lp::BundledSimplex be;
    for (int trial = 0; trial < 30; ++trial) {
        const Instance inst("r", oracle::random_points(rng, 10));
        const auto q = AggregationPartition::singletons(10);
        const auto pool = random_compatible_pool(rng, inst, q, 30);
        StabilizationBox box;
        std::uniform_real_distribution<double> u(0.0, 20.0);
        for (std::size_t j = 0; j < 10; ++j) {
            const double a = u(rng), b = u(rng);
            box.lower.push_back(std::min(a, b));
            box.upper.push_back(std::max(a, b));
        }
        const auto s = solve_master(build_agrmp(pool, q, 3, box), be, nullptr);
        REQUIRE(s.status == lp::Status::Optimal);
        for (std::size_t j = 0; j < 10; ++j) {
            if (s.active[j] == BoundActivity::None) {
                CHECK(s.lambda_bar[j] >= box.lower[j] - 1e-7);
                CHECK(s.lambda_bar[j] <= box.upper[j] + 1e-7);
            } else if (s.active[j] == BoundActivity::AtLower) {
                CHECK(s.lambda_bar[j] == doctest::Approx(box.lower[j]).epsilon(1e-7));
            } else {
                CHECK(s.lambda_bar[j] == doctest::Approx(box.upper[j]).epsilon(1e-7));
            }
        }
        // The stabilized value never exceeds the unstabilized one.
        const auto ref = plain_agrmp(pool, q, 3);
        REQUIRE(ref);
        CHECK(s.objective <= *ref + 1e-7);
    }
}

TEST_CASE("box estimate against direct recomputation") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 12, k = 1 + trial % 4;
        const auto pts = oracle::random_points(rng, n);
        const Instance inst("r", pts);
        const auto x_bar = multi_start(inst, k, 3, trial);
        // Random refinement of x_bar's clusters.
        std::vector<std::size_t> extra(n);
        for (auto& e : extra) e = rng() % 3;
        const auto q = intersect_labelings(x_bar.assignment, extra);
        const auto box = estimate_dual_bounds(inst, x_bar, q);
        REQUIRE(box.size() == q.size());
        CHECK(box.valid());
        const auto clusters = x_bar.clusters();
        for (std::size_t j = 0; j < q.size(); ++j) {
            const auto& comp = q[j].members;
            const std::size_t s = x_bar.assignment[comp[0]];
            std::vector<std::size_t> rest;
            for (auto i : clusters[s])
                if (!std::binary_search(comp.begin(), comp.end(), i)) rest.push_back(i);
            const double lower = oracle::sse(pts, clusters[s]) - oracle::sse(pts, rest);
            double upper = lp::kInf;
            for (std::size_t t = 0; t < k; ++t) {
                if (t == s) continue;
                auto grown = clusters[t];
                grown.insert(grown.end(), comp.begin(), comp.end());
                upper = std::min(upper, oracle::sse(pts, grown) - oracle::sse(pts, clusters[t]));
            }
            if (k == 1) {
                CHECK(std::isinf(box.upper[j]));
            } else {
                CHECK(box.upper[j] == doctest::Approx(upper).epsilon(1e-9).scale(1.0));
            }
            const double expected = std::max(0.0, std::min(lower, upper));
            CHECK(box.lower[j] == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
            if (rest.empty()) CHECK(box.lower[j] == doctest::Approx(std::min(oracle::sse(pts, clusters[s]), upper)));
        }
    }
}

TEST_CASE("box estimate rejects components spanning clusters") {
    const Instance inst("t", {{0, 0}, {1, 0}, {5, 5}, {6, 5}});
    const auto x_bar = make_clustering(inst, {0, 0, 1, 1}, 2);
    const auto q = AggregationPartition::from_components(4, {{0, 2}, {1}, {3}});
    CHECK_THROWS_AS(estimate_dual_bounds(inst, x_bar, q), Error);
}

TEST_CASE("box widening") {
    StabilizationBox b{{2.0, 0.0, 5.0, 1.0}, {6.0, 4.0, 5.0, 3.0}};
    const std::vector<BoundActivity> act{BoundActivity::AtUpper, BoundActivity::AtLower, BoundActivity::AtUpper,
                                         BoundActivity::None};
    const auto w = update_box(b, act);
    CHECK(w.lower[0] == 0.0);
    CHECK(w.upper[0] == 8.0);
    CHECK(w.lower[1] == 0.0);
    CHECK(w.upper[1] == 6.0);
    CHECK(w.lower[2] < 5.0);
    CHECK(w.upper[2] > 5.0);
    CHECK(w.lower[3] == 1.0);
    CHECK(w.upper[3] == 3.0);

    StabilizationBox inf{{3.0}, {lp::kInf}};
    const auto wi = update_box(inf, std::vector<BoundActivity>{BoundActivity::AtLower});
    CHECK(wi.lower[0] == 0.0);
}

TEST_CASE("a degenerate box is left by the next solve") {
    // Two points, k = 2: the optimal duals lie in [0, 0.5], so a box pinned at
    // 5 must bind; widening has to release it.
    const Instance inst("t", {{0, 0}, {1, 0}});
    const auto q = AggregationPartition::singletons(2);
    std::vector<Column> pool{Column::make(inst, PointSet(2, {0})), Column::make(inst, PointSet(2, {1})),
                             Column::make(inst, PointSet(2, {0, 1}))};
    lp::BundledSimplex be;
    StabilizationBox box{{5.0, 5.0}, {5.0, 5.0}};
    auto s = solve_master(build_agrmp(pool, q, 2, box), be, nullptr);
    REQUIRE(s.status == lp::Status::Optimal);
    REQUIRE(s.any_active());
    int rounds = 0;
    while (s.any_active() && rounds < 50) {
        box = update_box(box, s.active);
        s = solve_master(build_agrmp(pool, q, 2, box), be, nullptr);
        ++rounds;
    }
    CHECK_FALSE(s.any_active());
    const auto ref = plain_agrmp(pool, q, 2);
    CHECK(rounds > 0);
    CHECK(s.objective == doctest::Approx(*ref).epsilon(1e-9));
}

TEST_CASE("box inheritance") {
    const auto q = AggregationPartition::from_components(4, {{0, 1}, {2, 3}});
    const StabilizationBox b{{1.0, 2.0}, {3.0, 4.0}};
    const auto nq = update_partition(q, PointSet(4, {1, 2}));
    const auto nb = inherit_box(b, q, nq);
    REQUIRE(nb.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        const auto parent = q.component_of(nq[j].members[0]);
        CHECK(nb.lower[j] == b.lower[parent]);
        CHECK(nb.upper[j] == b.upper[parent]);
    }
}

TEST_CASE("incremental master matches rebuilt masters") {
    std::mt19937_64 rng(9);
    lp::BundledSimplex be;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 12;
        const Instance inst("r", oracle::random_points(rng, n));
        auto q = AggregationPartition::from_labels(std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3});
        auto box = StabilizationBox::unbounded(q.size());
        if (trial % 2) {
            box.lower.assign(q.size(), 1.0);
            box.upper.assign(q.size(), 30.0);
        }
        Master master(inst, 3, q, box, be);
        auto pool = random_compatible_pool(rng, inst, q, 8);
        for (const auto& c : pool) master.add_column(c);
        CHECK_FALSE(master.add_column(pool[0]));
        for (int step = 0; step < 4; ++step) {
            const auto s = master.solve();
            const auto fresh = solve_master(build_agrmp(master.pool().columns(), master.partition(), 3, master.box()),
                                            be, nullptr);
            REQUIRE(s.status == fresh.status);
            CHECK(s.objective == doctest::Approx(fresh.objective).epsilon(1e-9));
            // Split a component and add a column that needs it.
            PointSet cut(n);
            cut.insert(master.partition()[0].members[0]);
            if (master.partition()[0].members.size() > 1) {
                auto nq = update_partition(master.partition(), cut);
                auto nb = inherit_box(master.box(), master.partition(), nq);
                master.refine(nq, nb);
                master.add_column(Column::make(inst, cut));
            } else {
                auto nb = master.box();
                for (auto& l : nb.lower) l *= 0.5;
                master.set_box(nb);
            }
        }
    }
}

TEST_CASE("integral covers become partitions") {
    const Instance inst("t", {{0, 0}, {1, 0}, {10, 0}, {11, 0}});
    const std::vector<Column> chosen{Column::make(inst, PointSet(4, {0, 1, 2})), Column::make(inst, PointSet(4, {2, 3}))};
    const auto c = cover_to_clustering(inst, chosen);
    CHECK(c.assignment[0] == c.assignment[1]);
    CHECK(c.assignment[2] == c.assignment[3]);
    CHECK(c.assignment[0] != c.assignment[2]);
    CHECK(c.cost == doctest::Approx(1.0));
}

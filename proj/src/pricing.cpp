#include "mssc/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "column_collector.hpp"
#include "mssc/arrangement.hpp"
#include "mssc/error.hpp"
#include "mssc/geometry.hpp"
#include "mssc/random.hpp"

namespace mssc {

double reduced_cost(const Column& column, std::span<const double> lambda, double sigma) {
    double s = 0.0;
    column.members.for_each([&](std::size_t i) { s += lambda[i]; });
    return column.cost + sigma - s;
}

Refinement refine_center(std::span<const Point> points, std::span<const double> lambda, Point y0,
                         std::vector<double>* objective_trace) {
    const std::size_t n = points.size();
    auto radius_sq = [&](std::size_t i) { return lambda[i] < kZeroRadiusSq ? 0.0 : lambda[i]; };
    PointSet prev(n);
    Point y = y0;
    for (int round = 0; round < 100; ++round) {
        PointSet s(n);
        double g = 0.0;
        ClusterStats st;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = squared_distance(points[i], y);
            g += std::min(0.0, d - radius_sq(i));
            if (d <= radius_sq(i)) {
                s.insert(i);
                st.add(points[i]);
            }
        }
        if (objective_trace) objective_trace->push_back(g);
        if (s.empty()) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (lambda[i] > lambda[best]) best = i;
            return {points[best], PointSet(n, {best})};
        }
        if (s == prev) return {y, std::move(s)};
        y = st.centroid();
        prev = std::move(s);
    }
    return {y, std::move(prev)};
}

void finalize_columns(std::vector<PricedColumn>& all, std::vector<PricedColumn>& compatible,
                      const AggregationPartition* q, std::size_t max_columns) {
    std::sort(all.begin(), all.end(), [](const PricedColumn& a, const PricedColumn& b) {
        if (a.reduced_cost != b.reduced_cost) return a.reduced_cost < b.reduced_cost;
        return a.column.members.lex_less(b.column.members);
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const PricedColumn& a, const PricedColumn& b) {
                              return a.column.members == b.column.members;
                          }),
              all.end());
    compatible.clear();
    for (const auto& c : all) {
        if (compatible.size() >= max_columns) break;
        if (!q || is_compatible(c.column.members, *q)) compatible.push_back(c);
    }
    if (all.size() > max_columns) all.resize(max_columns);
}

PricingOutput price(const Instance& instance, const PricingInput& input) {
    const std::size_t n = instance.size();
    if (input.lambda.size() != n) throw Error(ErrorCode::DimensionMismatch, "one dual per point expected");
    ColumnCollector scorer(instance, input.lambda, input.sigma, input.tolerance, input.partition, input.max_columns);

    std::vector<std::size_t> single(1);
    for (std::size_t i = 0; i < n; ++i) {
        single[0] = i;
        scorer.visit(single);
    }
    if (input.method == PricingMethod::Arrangement) {
        std::vector<DiscSite> sites(n);
        for (std::size_t i = 0; i < n; ++i) sites[i] = {instance[i], input.lambda[i]};
        const DiscArrangement arrangement(sites);
        if (!arrangement.sweep(scorer))
            arrangement.enumerate([&](const std::vector<std::size_t>& s) { scorer.visit(s); });
    } else {
        for (const auto& y0 : candidate_centers(instance.points(), input.lambda)) {
            const auto r = refine_center(instance.points(), input.lambda, y0);
            scorer.visit(r.members.members());
        }
    }
    PricingOutput out = scorer.finish();
    out.exact = input.method == PricingMethod::Arrangement;
    return out;
}

OracleResult oracle_price(std::span<const Point> points, std::span<const double> lambda, double sigma) {
    const std::size_t n = points.size();
    if (n > 20) throw Error(ErrorCode::TooLarge, "exhaustive pricing is limited to 20 points");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "no points");
    Point mean;
    for (const auto& p : points) {
        mean.x += p.x / static_cast<double>(n);
        mean.y += p.y / static_cast<double>(n);
    }
    std::vector<Point> sh(n);
    for (std::size_t i = 0; i < n; ++i) sh[i] = {points[i].x - mean.x, points[i].y - mean.y};

    // Gray-code walk: one insertion or removal per step.
    ClusterStats st;
    double lam = 0.0;
    std::uint32_t gray = 0;
    std::uint32_t best_mask = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t step = 1; step < (std::uint32_t{1} << n); ++step) {
        const std::uint32_t next = step ^ (step >> 1);
        const std::uint32_t bit = next ^ gray;
        const auto i = static_cast<std::size_t>(std::countr_zero(bit));
        if (next & bit) {
            st.add(sh[i]);
            lam += lambda[i];
        } else {
            st.remove(sh[i]);
            lam -= lambda[i];
        }
        gray = next;
        const double v = st.cost() + sigma - lam;
        if (v < best) {
            best = v;
            best_mask = gray;
        }
    }
    OracleResult out{PointSet(n), 0.0};
    std::vector<Point> chosen;
    double lsum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (best_mask >> i & 1u) {
            out.members.insert(i);
            chosen.push_back(points[i]);
            lsum += lambda[i];
        }
    out.reduced_cost = cluster_cost(chosen).cost + sigma - lsum;
    return out;
}

}  // namespace mssc

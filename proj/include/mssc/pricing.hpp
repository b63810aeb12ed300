#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "mssc/column.hpp"
#include "mssc/instance.hpp"
#include "mssc/partition.hpp"

namespace mssc {

inline constexpr double kReducedCostTol = 1e-6;

// c_t + sigma - sum_{i in t} lambda_i
double reduced_cost(const Column& column, std::span<const double> lambda, double sigma);

struct Refinement {
    Point center;
    PointSet members;
};

// Fixed point of S(y) = {i : |p_i - y|^2 <= lambda_i}, y <- barycenter(S),
// at most 100 rounds. `objective_trace` receives
// g(y) = sigma + sum_i min(0, |p_i - y|^2 - lambda_i) at each visited center
// (sigma taken as 0).
Refinement refine_center(std::span<const Point> points, std::span<const double> lambda, Point y0,
                         std::vector<double>* objective_trace = nullptr);

enum class PricingMethod {
    Arrangement,  // every cell of the disc arrangement: exact
    Refinement,   // fixed-point refinement from every candidate center
};

struct PricingInput {
    std::span<const double> lambda;  // per point
    double sigma = 0.0;
    const AggregationPartition* partition = nullptr;  // null: every column counts as compatible
    std::size_t max_columns = std::numeric_limits<std::size_t>::max();
    double tolerance = kReducedCostTol;
    PricingMethod method = PricingMethod::Arrangement;
};

struct PricingOutput {
    std::vector<PricedColumn> columns;     // reduced cost < -tol, ascending
    std::vector<PricedColumn> compatible;  // subset of `columns` compatible with Q
    double best_reduced_cost = std::numeric_limits<double>::infinity();
    PointSet best_members;  // argmin over every evaluated set, negative or not
    bool exact = false;
    std::size_t sets_evaluated = 0;
};

PricingOutput price(const Instance& instance, const PricingInput& input);

struct OracleResult {
    PointSet members;
    double reduced_cost = 0.0;
};

// Exhaustive minimum over all nonempty subsets. Throws Error(TooLarge) for n > 20.
OracleResult oracle_price(std::span<const Point> points, std::span<const double> lambda, double sigma);

// Sort, deduplicate by members, and split a candidate list into (all, compatible),
// each truncated to max_columns.
void finalize_columns(std::vector<PricedColumn>& all, std::vector<PricedColumn>& compatible,
                      const AggregationPartition* q, std::size_t max_columns);

}  // namespace mssc

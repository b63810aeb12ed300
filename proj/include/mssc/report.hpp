#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mssc/solver.hpp"

namespace mssc {

std::string to_string(AggregationLevel level);
std::string to_string(Disaggregation d);
std::string to_string(QUpdateRule r);
AggregationLevel parse_aggregation_level(std::string_view s);  // n, n_half, n_quarter, k
Disaggregation parse_disaggregation(std::string_view s);       // average, sparse
QUpdateRule parse_q_update(std::string_view s);                // min_rc, min_inc

// Solve result as JSON; timing fields live under "timing" only.
nlohmann::json result_json(const Instance& instance, const SolverConfig& config, const SolveResult& result,
                           bool include_timing = true);

enum class AblationAxis { AggregationLevel, Disaggregation, QUpdate };
AblationAxis parse_ablation_axis(std::string_view s);  // throws Error(InvalidAxis)

struct AblationRow {
    std::string setting;
    SolveStats stats;
    double root_lower_bound = 0.0;
};

// Root-node runs (one column per iteration, no early cutoff) for every
// setting of the axis, all starting from the same incumbent.
std::vector<AblationRow> run_ablation(const Instance& instance, const SolverConfig& base, AblationAxis axis);
std::vector<AblationRow> run_ablation(const Instance& instance, const SolverConfig& base, AblationAxis axis,
                                      const Clustering& incumbent);

std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace mssc

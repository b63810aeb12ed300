#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mssc/branching.hpp"
#include "mssc/kmeans.hpp"
#include "mssc/lp.hpp"
#include "mssc/master.hpp"
#include "mssc/partition.hpp"
#include "mssc/pricing.hpp"

namespace mssc {

enum class ExactPricing { Arrangement, Dinkelbach };
enum class BoxOnSplit { Inherit, Reestimate };

struct SolverConfig {
    std::size_t k = 2;
    AggregationLevel aggregation = AggregationLevel::K;
    Disaggregation disaggregation = Disaggregation::Average;
    QUpdateRule q_update = QUpdateRule::MinINC;
    std::size_t columns_per_iter = 10;
    double epsilon = 1e-4;  // relative gap, 1e-4 = 0.01%
    double time_limit = std::numeric_limits<double>::infinity();  // seconds
    std::uint64_t seed = 1;
    std::size_t restarts = 1000;
    std::size_t threads = 1;
    std::string lp_backend = "bundled";
    std::string lp_command;  // external adapter command; empty -> MSSC_LP_ADAPTER

    PricingMethod pricing = PricingMethod::Arrangement;
    ExactPricing exact_pricing = ExactPricing::Arrangement;
    BoxOnSplit box_on_split = BoxOnSplit::Reestimate;
    bool stabilization = true;       // boxes from the incumbent; off: [0, inf)
    bool lagrangian_cutoff = true;   // stop a node once its Lagrangian bound reaches the incumbent
    bool root_only = false;
    std::size_t max_box_updates = 200;
    std::size_t max_nodes = std::numeric_limits<std::size_t>::max();
    std::size_t max_exact_groups = 30;  // Dinkelbach cap
    // Negative reduced cost threshold: max(rc_tolerance, 1e-10 * incumbent).
    double rc_tolerance = kReducedCostTol;
    std::string lp_dump_path;  // write the root master in CPLEX-LP form when set

    void validate() const;  // throws Error(InvalidArgument)
};

struct SolveStats {
    std::size_t cg_iterations = 0;
    std::size_t m_start = 0;
    std::size_t m_end = 0;
    double m_avg = 0.0;
    std::size_t q_updates = 0;
    double u_avg = 0.0;
    std::size_t box_updates = 0;
    std::size_t columns_added = 0;
    std::size_t nodes_explored = 0;
    double root_lower_bound = 0.0;
    double root_gap_percent = 0.0;
    // Timing (seconds); kept apart so outputs can be compared without them.
    double master_time = 0.0;
    double pricing_time = 0.0;
    double total_time = 0.0;
};

struct NodeRecord {
    BranchState state;
    AggregationPartition q;
    StabilizationBox box;
    std::vector<Column> columns;
    double lower_bound = -std::numeric_limits<double>::infinity();
    std::size_t id = 0;
};

class Deadline {
public:
    explicit Deadline(double seconds)
        : start_(std::chrono::steady_clock::now()), limit_(seconds) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    bool expired() const { return elapsed() >= limit_; }

private:
    std::chrono::steady_clock::time_point start_;
    double limit_;
};

struct CgResult {
    double lower_bound = -std::numeric_limits<double>::infinity();
    bool converged = false;   // no negative column and no active bound
    bool pruned = false;      // Lagrangian bound reached the cutoff
    bool exact = true;        // every pricing round was exact
    bool time_limit = false;
    MasterSolution master;
    std::vector<Column> pool;
    std::vector<double> lambda;  // last disaggregated duals
    AggregationPartition q;
    StabilizationBox box;
    // Root-style statistics of this run.
    std::size_t iterations = 0;
    std::size_t m_start = 0;
    std::size_t m_end = 0;
    double m_sum = 0.0;
    std::size_t q_updates = 0;
    double u_sum = 0.0;
    std::size_t box_updates = 0;
    std::size_t columns_added = 0;
    double master_time = 0.0;
    double pricing_time = 0.0;
};

// Column generation with dynamic constraint aggregation at one node.
// `upper_bound` drives the tolerance and, when enabled, the Lagrangian cutoff.
CgResult cg_dca(const Instance& instance, const NodeRecord& node, const SolverConfig& config,
                const Clustering& x_bar, double upper_bound, lp::Backend& backend, const Deadline& deadline);

struct SolveResult {
    Clustering clustering;
    double objective = 0.0;
    double lower_bound = 0.0;
    double gap = 0.0;  // relative
    bool certified = false;
    bool time_limit_hit = false;
    SolveStats stats;
};

SolveResult branch_and_price(const Instance& instance, const SolverConfig& config);

// Same, starting from a given incumbent instead of running multi-start k-means.
SolveResult branch_and_price(const Instance& instance, const SolverConfig& config, const Clustering& incumbent);

}  // namespace mssc

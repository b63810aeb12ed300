// mssc: exact minimum sum-of-squares clustering by branch-and-price with
// dynamic constraint aggregation.
//
//   mssc solve <instance> --k 10 [--output result.json]
//   mssc ablation <instance> --k 4 --axis aggregation_level [--output table.csv]
//
// Exit codes: 0 certified optimum (or ablation done), 2 gap not closed, 1 error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mssc/error.hpp"
#include "mssc/report.hpp"
#include "mssc/solver.hpp"

namespace {

struct Options {
    std::string instance;
    std::string output;
    std::string agg = "k";
    std::string disagg = "average";
    std::string qupdate = "min_inc";
    std::string pricing = "arrangement";
    std::string exact = "arrangement";
    std::string box_on_split = "reestimate";
    std::string axis;
    std::string dump_lp;
    bool no_timing = false;
    bool no_stabilization = false;
    bool root_only = false;
    mssc::SolverConfig cfg;
};

void add_common(CLI::App* app, Options& o) {
    app->add_option("instance", o.instance, "TSPLIB (.tsp) or plain x/y coordinate file")->required();
    app->add_option("--k", o.cfg.k, "number of clusters")->required()->check(CLI::PositiveNumber);
    app->add_option("--agg", o.agg, "initial aggregation level: n, n_half, n_quarter, k");
    app->add_option("--disagg", o.disagg, "dual disaggregation: average, sparse");
    app->add_option("--qupdate", o.qupdate, "partition update rule: min_rc, min_inc");
    app->add_option("--cols-per-iter", o.cfg.columns_per_iter, "compatible columns added per iteration")
        ->check(CLI::PositiveNumber);
    app->add_option("--eps", o.cfg.epsilon, "relative optimality gap (1e-4 = 0.01%)")->check(CLI::NonNegativeNumber);
    app->add_option("--time-limit", o.cfg.time_limit, "wall-clock limit in seconds")->check(CLI::PositiveNumber);
    app->add_option("--seed", o.cfg.seed, "master random seed");
    app->add_option("--restarts", o.cfg.restarts, "k-means restarts for the incumbent")->check(CLI::PositiveNumber);
    app->add_option("--threads", o.cfg.threads, "threads for k-means restarts")->check(CLI::PositiveNumber);
    app->add_option("--lp-backend", o.cfg.lp_backend, "bundled or external (command from MSSC_LP_ADAPTER)");
    app->add_option("--pricing", o.pricing, "root pricing: arrangement (exact) or refinement");
    app->add_option("--exact-pricing", o.exact, "pricing under branching: arrangement or dinkelbach");
    app->add_option("--box-on-split", o.box_on_split, "dual box after a partition update: reestimate or inherit");
    app->add_flag("--no-stabilization", o.no_stabilization, "use unbounded dual boxes");
    app->add_option("--output,-o", o.output, "output file (default: stdout)");
}

void finish_config(Options& o) {
    o.cfg.aggregation = mssc::parse_aggregation_level(o.agg);
    o.cfg.disaggregation = mssc::parse_disaggregation(o.disagg);
    o.cfg.q_update = mssc::parse_q_update(o.qupdate);
    if (o.pricing == "arrangement") o.cfg.pricing = mssc::PricingMethod::Arrangement;
    else if (o.pricing == "refinement") o.cfg.pricing = mssc::PricingMethod::Refinement;
    else throw mssc::Error(mssc::ErrorCode::InvalidArgument, "unknown pricing method '" + o.pricing + "'");
    if (o.exact == "arrangement") o.cfg.exact_pricing = mssc::ExactPricing::Arrangement;
    else if (o.exact == "dinkelbach") o.cfg.exact_pricing = mssc::ExactPricing::Dinkelbach;
    else throw mssc::Error(mssc::ErrorCode::InvalidArgument, "unknown exact pricing '" + o.exact + "'");
    if (o.box_on_split == "reestimate") o.cfg.box_on_split = mssc::BoxOnSplit::Reestimate;
    else if (o.box_on_split == "inherit") o.cfg.box_on_split = mssc::BoxOnSplit::Inherit;
    else throw mssc::Error(mssc::ErrorCode::InvalidArgument, "unknown box rule '" + o.box_on_split + "'");
    o.cfg.stabilization = !o.no_stabilization;
    o.cfg.root_only = o.root_only;
    o.cfg.lp_dump_path = o.dump_lp;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw mssc::Error(mssc::ErrorCode::Io, "cannot write '" + path + "'");
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact MSSC by branch-and-price with dynamic constraint aggregation"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "solve one instance to (near) optimality");
    add_common(solve, o);
    solve->add_flag("--no-timing", o.no_timing, "omit timing fields from the JSON");
    solve->add_flag("--root-only", o.root_only, "stop after the root node");
    solve->add_option("--dump-lp", o.dump_lp, "write the root master LP (CPLEX-LP format)");

    auto* ablation = app.add_subcommand("ablation", "root-node comparison along one configuration axis");
    add_common(ablation, o);
    ablation->add_option("--axis", o.axis, "aggregation_level, disaggregation or q_update")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        finish_config(o);
        const mssc::Instance inst = mssc::load_instance(o.instance);
        if (*solve) {
            const auto result = mssc::branch_and_price(inst, o.cfg);
            write_output(o.output, mssc::result_json(inst, o.cfg, result, !o.no_timing).dump(2) + "\n");
            return result.certified ? 0 : 2;
        }
        const auto axis = mssc::parse_ablation_axis(o.axis);
        write_output(o.output, mssc::ablation_csv(mssc::run_ablation(inst, o.cfg, axis)));
        return 0;
    } catch (const mssc::Error& e) {
        std::cerr << "mssc: " << mssc::to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "mssc: " << e.what() << '\n';
        return 1;
    }
}

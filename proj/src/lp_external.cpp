#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "mssc/error.hpp"
#include "mssc/lp.hpp"

namespace mssc::lp {

namespace {

nlohmann::json bound_json(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

}  // namespace

LpSolution ExternalProcessBackend::solve(const LinearProgram& lp, const Basis*) {
    lp.validate();
    nlohmann::json in;
    auto& sense = in["sense"] = nlohmann::json::array();
    auto& rhs = in["rhs"] = nlohmann::json::array();
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
        sense.push_back(lp.sense(r) == RowSense::Greater ? "G" : lp.sense(r) == RowSense::Less ? "L" : "E");
        rhs.push_back(lp.rhs(r));
    }
    auto& cost = in["cost"] = nlohmann::json::array();
    auto& lower = in["lower"] = nlohmann::json::array();
    auto& upper = in["upper"] = nlohmann::json::array();
    auto& cols = in["columns"] = nlohmann::json::array();
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
        cost.push_back(lp.cost(j));
        lower.push_back(bound_json(lp.lower(j)));
        upper.push_back(bound_json(lp.upper(j)));
        auto col = nlohmann::json::array();
        for (const auto& e : lp.column(j)) col.push_back({e.index, e.value});
        cols.push_back(std::move(col));
    }

    namespace fs = std::filesystem;
    std::random_device rd;
    const auto tag = std::to_string(rd()) + std::to_string(rd());
    const fs::path dir = fs::temp_directory_path();
    const fs::path in_path = dir / ("mssc_lp_" + tag + "_in.json");
    const fs::path out_path = dir / ("mssc_lp_" + tag + "_out.json");
    {
        std::ofstream os(in_path);
        os << in.dump();
    }
    const std::string cmd = command_ + " " + shell_quote(in_path.string()) + " " + shell_quote(out_path.string());
    const int rc = std::system(cmd.c_str());
    std::error_code ec;
    fs::remove(in_path, ec);
    if (rc != 0) {
        fs::remove(out_path, ec);
        throw Error(ErrorCode::NumericalFailure, "external LP command failed: " + command_);
    }
    nlohmann::json out;
    {
        std::ifstream is(out_path);
        if (!is) throw Error(ErrorCode::NumericalFailure, "external LP command produced no output");
        is >> out;
    }
    fs::remove(out_path, ec);

    LpSolution sol;
    const std::string status = out.at("status").get<std::string>();
    if (status == "Optimal") sol.status = Status::Optimal;
    else if (status == "Infeasible") sol.status = Status::Infeasible;
    else if (status == "Unbounded") sol.status = Status::Unbounded;
    else sol.status = Status::IterationLimit;
    if (sol.status != Status::Optimal) return sol;
    sol.objective = out.at("objective").get<double>();
    sol.primal = out.at("primal").get<std::vector<double>>();
    sol.duals = out.at("duals").get<std::vector<double>>();
    if (sol.primal.size() != lp.num_cols() || sol.duals.size() != lp.num_rows())
        throw Error(ErrorCode::NumericalFailure, "external LP output has wrong dimensions");
    sol.reduced_costs.resize(lp.num_cols());
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
        double d = lp.cost(j);
        for (const auto& e : lp.column(j)) d -= e.value * sol.duals[e.index];
        sol.reduced_costs[j] = d;
    }
    return sol;
}

std::unique_ptr<Backend> make_backend(const std::string& selector, const std::string& external_command) {
    if (selector.empty() || selector == "bundled") return std::make_unique<BundledSimplex>();
    if (selector == "external") {
        std::string cmd = external_command;
        if (cmd.empty()) {
            if (const char* env = std::getenv("MSSC_LP_ADAPTER")) cmd = env;
        }
        if (cmd.empty())
            throw Error(ErrorCode::InvalidArgument, "external LP backend selected but MSSC_LP_ADAPTER is not set");
        return std::make_unique<ExternalProcessBackend>(cmd);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown LP backend '" + selector + "'");
}

}  // namespace mssc::lp

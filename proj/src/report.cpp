#include "mssc/report.hpp"

#include <cstdio>
#include <sstream>

#include "mssc/error.hpp"
#include "mssc/random.hpp"

namespace mssc {

std::string to_string(AggregationLevel level) {
    switch (level) {
        case AggregationLevel::N: return "n";
        case AggregationLevel::NHalf: return "n_half";
        case AggregationLevel::NQuarter: return "n_quarter";
        case AggregationLevel::K: return "k";
    }
    return "?";
}

std::string to_string(Disaggregation d) {
    switch (d) {
        case Disaggregation::Average: return "average";
        case Disaggregation::Sparse: return "sparse";
        case Disaggregation::Complementary: return "complementary";
    }
    return "?";
}

std::string to_string(QUpdateRule r) { return r == QUpdateRule::MinRC ? "min_rc" : "min_inc"; }

AggregationLevel parse_aggregation_level(std::string_view s) {
    if (s == "n") return AggregationLevel::N;
    if (s == "n_half" || s == "n/2") return AggregationLevel::NHalf;
    if (s == "n_quarter" || s == "n/4") return AggregationLevel::NQuarter;
    if (s == "k") return AggregationLevel::K;
    throw Error(ErrorCode::InvalidLevel, "unknown aggregation level '" + std::string(s) + "'");
}

Disaggregation parse_disaggregation(std::string_view s) {
    if (s == "average") return Disaggregation::Average;
    if (s == "sparse") return Disaggregation::Sparse;
    if (s == "complementary") return Disaggregation::Complementary;
    throw Error(ErrorCode::InvalidArgument, "unknown disaggregation '" + std::string(s) + "'");
}

QUpdateRule parse_q_update(std::string_view s) {
    if (s == "min_rc") return QUpdateRule::MinRC;
    if (s == "min_inc") return QUpdateRule::MinINC;
    throw Error(ErrorCode::InvalidArgument, "unknown Q update rule '" + std::string(s) + "'");
}

AblationAxis parse_ablation_axis(std::string_view s) {
    if (s == "aggregation_level") return AblationAxis::AggregationLevel;
    if (s == "disaggregation") return AblationAxis::Disaggregation;
    if (s == "q_update") return AblationAxis::QUpdate;
    throw Error(ErrorCode::InvalidAxis, "unknown ablation axis '" + std::string(s) + "'");
}

nlohmann::json result_json(const Instance& instance, const SolverConfig& config, const SolveResult& result,
                           bool include_timing) {
    using nlohmann::json;
    json j;
    j["instance"] = instance.name();
    j["n"] = instance.size();
    j["k"] = config.k;
    j["f_opt"] = result.objective;
    j["lower_bound"] = result.lower_bound;
    j["gap"] = result.gap;
    j["certified"] = result.certified;
    j["time_limit_hit"] = result.time_limit_hit;
    j["nodes"] = result.stats.nodes_explored;
    json assignment = json::array();
    for (auto l : result.clustering.assignment) assignment.push_back(l + 1);  // 1-based labels
    j["assignment"] = assignment;
    json centroids = json::array();
    for (const auto& c : result.clustering.centroids) centroids.push_back({c.x, c.y});
    j["centroids"] = centroids;
    const auto& s = result.stats;
    j["stats"] = {{"cg_iterations", s.cg_iterations}, {"m_start", s.m_start},
                  {"m_end", s.m_end},                 {"m_avg", s.m_avg},
                  {"q_updates", s.q_updates},         {"u_avg", s.u_avg},
                  {"box_updates", s.box_updates},     {"columns_added", s.columns_added},
                  {"nodes_explored", s.nodes_explored}, {"root_lower_bound", s.root_lower_bound},
                  {"root_gap_percent", s.root_gap_percent}};
    j["config"] = {{"aggregation_level", to_string(config.aggregation)},
                   {"disaggregation", to_string(config.disaggregation)},
                   {"q_update", to_string(config.q_update)},
                   {"columns_per_iter", config.columns_per_iter},
                   {"epsilon", config.epsilon},
                   {"seed", config.seed},
                   {"restarts", config.restarts},
                   {"lp_backend", config.lp_backend}};
    if (include_timing)
        j["timing"] = {{"master_time", s.master_time}, {"pricing_time", s.pricing_time}, {"total_time", s.total_time}};
    return j;
}

std::vector<AblationRow> run_ablation(const Instance& instance, const SolverConfig& base, AblationAxis axis) {
    base.validate();
    const Clustering x_bar = multi_start(instance, base.k, base.restarts, derive_seed(base.seed, 1), base.threads);
    return run_ablation(instance, base, axis, x_bar);
}

std::vector<AblationRow> run_ablation(const Instance& instance, const SolverConfig& base, AblationAxis axis,
                                      const Clustering& incumbent) {
    SolverConfig cfg = base;
    cfg.root_only = true;
    cfg.lagrangian_cutoff = false;
    cfg.columns_per_iter = 1;

    std::vector<std::pair<std::string, SolverConfig>> settings;
    switch (axis) {
        case AblationAxis::AggregationLevel:
            for (auto l : {AggregationLevel::N, AggregationLevel::NHalf, AggregationLevel::NQuarter, AggregationLevel::K}) {
                SolverConfig c = cfg;
                c.aggregation = l;
                settings.emplace_back(to_string(l), c);
            }
            break;
        case AblationAxis::Disaggregation:
            for (auto d : {Disaggregation::Average, Disaggregation::Sparse}) {
                SolverConfig c = cfg;
                c.disaggregation = d;
                settings.emplace_back(to_string(d), c);
            }
            break;
        case AblationAxis::QUpdate:
            for (auto r : {QUpdateRule::MinRC, QUpdateRule::MinINC}) {
                SolverConfig c = cfg;
                c.q_update = r;
                settings.emplace_back(to_string(r), c);
            }
            break;
    }
    std::vector<AblationRow> rows;
    for (const auto& [name, c] : settings) {
        const SolveResult r = branch_and_price(instance, c, incumbent);
        rows.push_back({name, r.stats, r.stats.root_lower_bound});
    }
    return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
    std::ostringstream os;
    os << "setting,m_start,m_end,m_avg,q_updates,u_avg,cg_iterations,root_lower_bound,master_time,pricing_time,"
          "total_time,master_fraction\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        const auto& s = r.stats;
        const double frac = s.total_time > 0.0 ? s.master_time / s.total_time : 0.0;
        os << r.setting << ',' << s.m_start << ',' << s.m_end << ',' << num(s.m_avg) << ',' << s.q_updates << ','
           << num(s.u_avg) << ',' << s.cg_iterations << ',' << num(r.root_lower_bound) << ',' << num(s.master_time)
           << ',' << num(s.pricing_time) << ',' << num(s.total_time) << ',' << num(frac) << '\n';
    }
    return os.str();
}

}  // namespace mssc

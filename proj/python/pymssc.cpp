// Python bindings: instances, k-means, pricing and the branch-and-price solver.
// Solve results come back as the same document the CLI writes (1-based labels).

#include <optional>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mssc/error.hpp"
#include "mssc/pricing.hpp"
#include "mssc/report.hpp"
#include "mssc/solver.hpp"

namespace py = pybind11;
using namespace mssc;

namespace {

std::vector<Point> to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw Error(ErrorCode::DimensionMismatch, "points must have shape (n, 2)");
    const auto r = a.unchecked<2>();
    std::vector<Point> pts(static_cast<std::size_t>(r.shape(0)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i) pts[i] = {r(i, 0), r(i, 1)};
    return pts;
}

py::array_t<double> from_points(std::span<const Point> pts) {
    py::array_t<double> a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
    auto w = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        w(i, 0) = pts[i].x;
        w(i, 1) = pts[i].y;
    }
    return a;
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

PricingMethod parse_pricing(const std::string& s) {
    if (s == "arrangement") return PricingMethod::Arrangement;
    if (s == "refinement") return PricingMethod::Refinement;
    throw Error(ErrorCode::InvalidArgument, "unknown pricing method '" + s + "'");
}

SolverConfig make_config(std::size_t k, const std::string& aggregation, const std::string& disaggregation,
                         const std::string& q_update, double epsilon, std::optional<double> time_limit,
                         std::uint64_t seed, std::size_t restarts, std::size_t threads, std::size_t columns_per_iter,
                         const std::string& pricing, const std::string& exact_pricing, bool stabilization,
                         const std::string& lp_backend) {
    SolverConfig c;
    c.k = k;
    c.aggregation = parse_aggregation_level(aggregation);
    c.disaggregation = parse_disaggregation(disaggregation);
    c.q_update = parse_q_update(q_update);
    c.epsilon = epsilon;
    if (time_limit) c.time_limit = *time_limit;
    c.seed = seed;
    c.restarts = restarts;
    c.threads = threads;
    c.columns_per_iter = columns_per_iter;
    c.pricing = parse_pricing(pricing);
    if (exact_pricing == "arrangement") c.exact_pricing = ExactPricing::Arrangement;
    else if (exact_pricing == "dinkelbach") c.exact_pricing = ExactPricing::Dinkelbach;
    else throw Error(ErrorCode::InvalidArgument, "unknown exact pricing '" + exact_pricing + "'");
    c.stabilization = stabilization;
    c.lp_backend = lp_backend;
    c.validate();
    return c;
}

#define MSSC_CONFIG_ARGS                                                                                      \
    py::arg("k"), py::kw_only(), py::arg("aggregation") = "k", py::arg("disaggregation") = "average",          \
        py::arg("q_update") = "min_inc", py::arg("epsilon") = 1e-4, py::arg("time_limit") = py::none(),        \
        py::arg("seed") = 1, py::arg("restarts") = 1000, py::arg("threads") = 1, py::arg("columns_per_iter") = 10, \
        py::arg("pricing") = "arrangement", py::arg("exact_pricing") = "arrangement",                          \
        py::arg("stabilization") = true, py::arg("lp_backend") = "bundled"

}  // namespace

PYBIND11_MODULE(pymssc, m) {
    m.doc() = "Exact minimum sum-of-squares clustering by branch-and-price with dynamic constraint aggregation";

    py::register_exception<Error>(m, "MsscError", PyExc_RuntimeError);

    py::class_<Instance>(m, "Instance")
        .def(py::init([](py::array_t<double, py::array::c_style | py::array::forcecast> points, std::string name) {
                 return Instance(std::move(name), to_points(points));
             }),
             py::arg("points"), py::arg("name") = "points")
        .def_static("load", &load_instance, py::arg("path"), "Read a TSPLIB or plain x/y file")
        .def_static("from_tsplib", [](const std::string& text) { return parse_tsplib(text); }, py::arg("text"))
        .def_static("from_xy", [](const std::string& text, std::string name) { return parse_xy(text, std::move(name)); },
                    py::arg("text"), py::arg("name") = "xy")
        .def("to_tsplib", &serialize_tsplib)
        .def_property_readonly("name", &Instance::name)
        .def_property_readonly("points", [](const Instance& i) { return from_points(i.points()); })
        .def("__len__", &Instance::size)
        .def("__repr__", [](const Instance& i) {
            return "<Instance '" + i.name() + "' with " + std::to_string(i.size()) + " points>";
        });

    m.def(
        "cluster_cost",
        [](const Instance& inst, const std::vector<std::size_t>& members) {
            for (auto i : members)
                if (i >= inst.size()) throw Error(ErrorCode::InvalidArgument, "member index out of range");
            return cluster_cost(inst, std::span<const std::size_t>(members)).cost;
        },
        py::arg("instance"), py::arg("members"), "Sum of squared distances of the members to their centroid");

    m.def(
        "kmeans",
        [](const Instance& inst, std::size_t k, std::size_t restarts, std::uint64_t seed, std::size_t threads) {
            Clustering c;
            {
                py::gil_scoped_release nogil;
                c = multi_start(inst, k, restarts, seed, threads);
            }
            py::dict d;
            d["assignment"] = c.assignment;
            d["centroids"] = from_points(c.centroids);
            d["cost"] = c.cost;
            return d;
        },
        py::arg("instance"), py::arg("k"), py::kw_only(), py::arg("restarts") = 1, py::arg("seed") = 1,
        py::arg("threads") = 1, "Best of several Lloyd runs; labels are 0-based");

    m.def(
        "price",
        [](const Instance& inst, const std::vector<double>& lambda, double sigma, const std::string& method) {
            if (lambda.size() != inst.size()) throw Error(ErrorCode::DimensionMismatch, "one dual per point expected");
            PricingInput in;
            in.lambda = lambda;
            in.sigma = sigma;
            in.method = parse_pricing(method);
            PricingOutput out;
            {
                py::gil_scoped_release nogil;
                out = price(inst, in);
            }
            return py::make_tuple(out.best_reduced_cost, out.best_members.members(), out.exact);
        },
        py::arg("instance"), py::arg("lam"), py::arg("sigma"), py::arg("method") = "arrangement",
        "Most negative reduced cost cluster: (reduced_cost, members, exact)");

    m.def(
        "oracle_price",
        [](const Instance& inst, const std::vector<double>& lambda, double sigma) {
            if (lambda.size() != inst.size()) throw Error(ErrorCode::DimensionMismatch, "one dual per point expected");
            const auto r = oracle_price(inst.points(), lambda, sigma);
            return py::make_tuple(r.reduced_cost, r.members.members());
        },
        py::arg("instance"), py::arg("lam"), py::arg("sigma"), "Exhaustive subset minimum (n <= 20)");

    m.def(
        "solve",
        [](const Instance& inst, std::size_t k, const std::string& aggregation, const std::string& disaggregation,
           const std::string& q_update, double epsilon, std::optional<double> time_limit, std::uint64_t seed,
           std::size_t restarts, std::size_t threads, std::size_t columns_per_iter, const std::string& pricing,
           const std::string& exact_pricing, bool stabilization, const std::string& lp_backend, bool timing) {
            const auto cfg = make_config(k, aggregation, disaggregation, q_update, epsilon, time_limit, seed, restarts,
                                         threads, columns_per_iter, pricing, exact_pricing, stabilization, lp_backend);
            if (cfg.k > inst.size()) throw Error(ErrorCode::InvalidK, "k exceeds the number of points");
            SolveResult r;
            {
                py::gil_scoped_release nogil;
                r = branch_and_price(inst, cfg);
            }
            return to_python(result_json(inst, cfg, r, timing));
        },
        py::arg("instance"), MSSC_CONFIG_ARGS, py::arg("timing") = true,
        "Solve to relative gap epsilon; returns the result document (1-based labels)");

    m.def(
        "ablation",
        [](const Instance& inst, const std::string& axis, std::size_t k, const std::string& aggregation,
           const std::string& disaggregation, const std::string& q_update, double epsilon,
           std::optional<double> time_limit, std::uint64_t seed, std::size_t restarts, std::size_t threads,
           std::size_t columns_per_iter, const std::string& pricing, const std::string& exact_pricing,
           bool stabilization, const std::string& lp_backend) {
            const auto cfg = make_config(k, aggregation, disaggregation, q_update, epsilon, time_limit, seed, restarts,
                                         threads, columns_per_iter, pricing, exact_pricing, stabilization, lp_backend);
            const auto ax = parse_ablation_axis(axis);
            std::vector<AblationRow> rows;
            {
                py::gil_scoped_release nogil;
                rows = run_ablation(inst, cfg, ax);
            }
            py::list out;
            for (const auto& r : rows) {
                const auto& s = r.stats;
                py::dict d;
                d["setting"] = r.setting;
                d["m_start"] = s.m_start;
                d["m_end"] = s.m_end;
                d["m_avg"] = s.m_avg;
                d["q_updates"] = s.q_updates;
                d["u_avg"] = s.u_avg;
                d["cg_iterations"] = s.cg_iterations;
                d["root_lower_bound"] = r.root_lower_bound;
                d["master_time"] = s.master_time;
                d["pricing_time"] = s.pricing_time;
                d["total_time"] = s.total_time;
                out.append(d);
            }
            return out;
        },
        py::arg("instance"), py::arg("axis"), MSSC_CONFIG_ARGS,
        "Root-node comparison along aggregation_level, disaggregation or q_update");
}

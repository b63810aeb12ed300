#include "mssc/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "mssc/error.hpp"

namespace mssc {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsupportedEdgeWeightType: return "UnsupportedEdgeWeightType";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptyCluster: return "EmptyCluster";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::InvalidLevel: return "InvalidLevel";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::IncompatibleColumnInPool: return "IncompatibleColumnInPool";
        case ErrorCode::ComponentSpansClusters: return "ComponentSpansClusters";
        case ErrorCode::NoCandidates: return "NoCandidates";
        case ErrorCode::ColumnAlreadyCompatible: return "ColumnAlreadyCompatible";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::SolutionIntegral: return "SolutionIntegral";
        case ErrorCode::InfeasibleConstraints: return "InfeasibleConstraints";
        case ErrorCode::TooLargeForExact: return "TooLargeForExact";
        case ErrorCode::InvalidAxis: return "InvalidAxis";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Instance::Instance(std::string name, std::vector<Point> points) : name_(std::move(name)), points_(std::move(points)) {
    if (points_.empty()) throw Error(ErrorCode::InvalidArgument, "instance has no points");
    for (const auto& p : points_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line, bool allow_comma) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto is_sep = [&](char c) { return std::isspace(static_cast<unsigned char>(c)) || (allow_comma && c == ','); };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_sep(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::optional<double> to_double(std::string_view s) {
    // from_chars for double is available in libstdc++ 11.
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

bool is_planar_coordinate_type(const std::string& t) {
    return t == "EUC_2D" || t == "CEIL_2D" || t == "ATT" || t == "MAN_2D" || t == "MAX_2D";
}

}  // namespace

Instance parse_tsplib(std::string_view text) {
    std::string name = "unnamed";
    std::optional<std::size_t> dimension;
    std::vector<Point> points;
    bool in_coords = false;
    bool saw_section = false;

    const auto lines = lines_of(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto line = trim(lines[ln]);
        if (line.empty()) continue;
        const std::string key_upper = upper(line);
        if (key_upper == "EOF") break;

        if (in_coords) {
            const auto fields = split_fields(line, false);
            if (!fields.empty() && !to_double(fields[0])) {
                // Another section starts; coordinates are done.
                in_coords = false;
            } else {
                if (fields.size() != 3)
                    throw Error(ErrorCode::MalformedLine, "line " + std::to_string(ln + 1) + ": expected 'id x y'");
                const auto x = to_double(fields[1]);
                const auto y = to_double(fields[2]);
                if (!x || !y)
                    throw Error(ErrorCode::MalformedLine, "line " + std::to_string(ln + 1) + ": bad coordinate");
                points.push_back({*x, *y});
                continue;
            }
        }

        if (key_upper.rfind("NODE_COORD_SECTION", 0) == 0) {
            in_coords = true;
            saw_section = true;
            continue;
        }
        if (key_upper.rfind("EDGE_WEIGHT_SECTION", 0) == 0 || key_upper.rfind("DISPLAY_DATA_SECTION", 0) == 0 ||
            key_upper.rfind("TOUR_SECTION", 0) == 0) {
            continue;
        }

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        const std::string key = upper(trim(line.substr(0, colon)));
        const auto value = trim(line.substr(colon + 1));
        if (key == "NAME") {
            name = std::string(value);
        } else if (key == "DIMENSION") {
            std::size_t d = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
            if (ec != std::errc{} || ptr != value.data() + value.size())
                throw Error(ErrorCode::MalformedLine, "line " + std::to_string(ln + 1) + ": bad DIMENSION");
            dimension = d;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            const std::string type = upper(value);
            if (!is_planar_coordinate_type(type))
                throw Error(ErrorCode::UnsupportedEdgeWeightType, type);
        } else if (key == "NODE_COORD_TYPE") {
            if (upper(value) != "TWOD_COORDS") throw Error(ErrorCode::UnsupportedEdgeWeightType, std::string(value));
        }
    }

    if (!saw_section) throw Error(ErrorCode::UnsupportedEdgeWeightType, "no NODE_COORD_SECTION");
    if (dimension && *dimension != points.size())
        throw Error(ErrorCode::DimensionMismatch, "DIMENSION " + std::to_string(*dimension) + " but " +
                                                      std::to_string(points.size()) + " coordinate lines");
    if (points.empty()) throw Error(ErrorCode::DimensionMismatch, "no coordinates");
    return Instance(std::move(name), std::move(points));
}

Instance parse_xy(std::string_view text, std::string name) {
    std::vector<Point> points;
    const auto lines = lines_of(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = lines[ln];
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line, true);
        if (fields.size() != 2)
            throw Error(ErrorCode::MalformedLine, "line " + std::to_string(ln + 1) + ": expected 'x y'");
        const auto x = to_double(fields[0]);
        const auto y = to_double(fields[1]);
        if (!x || !y) {
            // Tolerate a single header row such as "x,y".
            if (points.empty() && ln == 0) continue;
            throw Error(ErrorCode::MalformedLine, "line " + std::to_string(ln + 1) + ": bad coordinate");
        }
        points.push_back({*x, *y});
    }
    if (points.empty()) throw Error(ErrorCode::DimensionMismatch, "no coordinates");
    return Instance(std::move(name), std::move(points));
}

std::string serialize_tsplib(const Instance& instance) {
    std::ostringstream os;
    os.precision(17);
    os << "NAME : " << instance.name() << "\n";
    os << "TYPE : TSP\n";
    os << "DIMENSION : " << instance.size() << "\n";
    os << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    os << "NODE_COORD_SECTION\n";
    for (std::size_t i = 0; i < instance.size(); ++i)
        os << (i + 1) << ' ' << instance[i].x << ' ' << instance[i].y << "\n";
    os << "EOF\n";
    return os.str();
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (upper(text).find("NODE_COORD_SECTION") != std::string::npos) return parse_tsplib(text);
    std::string stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return parse_xy(text, stem);
}

ClusterCost cluster_cost(std::span<const Point> points) {
    if (points.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no members");
    Point c;
    for (const auto& p : points) {
        c.x += p.x;
        c.y += p.y;
    }
    const double w = static_cast<double>(points.size());
    c.x /= w;
    c.y /= w;
    double cost = 0.0;
    for (const auto& p : points) cost += squared_distance(p, c);
    return {cost, c};
}

ClusterCost cluster_cost(const Instance& instance, std::span<const std::size_t> members) {
    if (members.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no members");
    Point c;
    for (auto i : members) {
        c.x += instance[i].x;
        c.y += instance[i].y;
    }
    const double w = static_cast<double>(members.size());
    c.x /= w;
    c.y /= w;
    double cost = 0.0;
    for (auto i : members) cost += squared_distance(instance[i], c);
    return {cost, c};
}

ClusterCost cluster_cost(const Instance& instance, const PointSet& members) {
    const auto list = members.members();
    return cluster_cost(instance, std::span<const std::size_t>(list));
}

}  // namespace mssc

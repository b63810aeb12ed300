#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mssc/point_set.hpp"

namespace mssc {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

inline double squared_distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Immutable planar point set. Indices are 0-based internally; all text I/O is
// 1-based.
class Instance {
public:
    Instance(std::string name, std::vector<Point> points);

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const noexcept { return points_; }

private:
    std::string name_;
    std::vector<Point> points_;
};

// TSPLIB NODE_COORD_SECTION reader (EUC_2D and other planar coordinate types).
Instance parse_tsplib(std::string_view text);
// Plain "x y" or "x,y" per line; '#' starts a comment.
Instance parse_xy(std::string_view text, std::string name = "xy");
std::string serialize_tsplib(const Instance& instance);
// Chooses the reader from the content: TSPLIB when a NODE_COORD_SECTION is present.
Instance load_instance(const std::string& path);

struct ClusterCost {
    double cost = 0.0;
    Point centroid;
};

// Sum of squared distances of the members to their barycenter (two-pass).
ClusterCost cluster_cost(const Instance& instance, std::span<const std::size_t> members);
ClusterCost cluster_cost(const Instance& instance, const PointSet& members);
ClusterCost cluster_cost(std::span<const Point> points);

// Running sufficient statistics of a point multiset; O(1) insert/remove.
struct ClusterStats {
    double weight = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    double sq = 0.0;

    void add(const Point& p, double w = 1.0) {
        weight += w;
        sx += w * p.x;
        sy += w * p.y;
        sq += w * (p.x * p.x + p.y * p.y);
    }
    void remove(const Point& p, double w = 1.0) { add(p, -w); }
    void merge(const ClusterStats& o) {
        weight += o.weight;
        sx += o.sx;
        sy += o.sy;
        sq += o.sq;
    }

    double cost() const {
        if (weight <= 0.0) return 0.0;
        const double c = sq - (sx * sx + sy * sy) / weight;
        return c > 0.0 ? c : 0.0;
    }
    Point centroid() const { return {sx / weight, sy / weight}; }
};

}  // namespace mssc

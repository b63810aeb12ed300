#include "mssc/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mssc {

CircleIntersection intersect(const Circle& a, const Circle& b) {
    CircleIntersection out;
    const double dx = b.center.x - a.center.x;
    const double dy = b.center.y - a.center.y;
    const double d = std::hypot(dx, dy);
    const double sum = a.radius + b.radius;
    const double diff = std::abs(a.radius - b.radius);
    const double tol_out = 1e-9 * std::max(1.0, sum);

    if (d <= tol_out && diff <= tol_out) {
        out.coincident = a.radius > 0.0;
        return out;
    }
    if (d > sum + tol_out || d < diff - tol_out || d == 0.0) return out;

    const double ux = dx / d;
    const double uy = dy / d;
    if (std::abs(d - sum) <= tol_out || std::abs(d - diff) <= tol_out) {
        // Tangent: the touching point lies on the center line.
        const double s = (std::abs(d - sum) <= tol_out || a.radius >= b.radius) ? a.radius : -a.radius;
        out.count = 1;
        out.points[0] = {a.center.x + s * ux, a.center.y + s * uy};
        return out;
    }
    // Distance from a's center to the chord, along the center line.
    const double x = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, a.radius * a.radius - x * x));
    const Point m{a.center.x + x * ux, a.center.y + x * uy};
    out.count = 2;
    out.points[0] = {m.x - h * uy, m.y + h * ux};
    out.points[1] = {m.x + h * uy, m.y - h * ux};
    return out;
}

std::vector<Point> candidate_centers(std::span<const Point> points, std::span<const double> lambda) {
    const std::size_t n = points.size();
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (lambda[i] < kZeroRadiusSq) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (lambda[j] < kZeroRadiusSq) continue;
            const auto x = intersect({points[i], std::sqrt(lambda[i])}, {points[j], std::sqrt(lambda[j])});
            for (int c = 0; c < x.count; ++c) out.push_back(x.points[c]);
        }
    }
    out.insert(out.end(), points.begin(), points.end());
    return out;
}

}  // namespace mssc

#pragma once

#include <span>
#include <vector>

#include "mssc/instance.hpp"

namespace mssc {

struct Circle {
    Point center;
    double radius = 0.0;
};

// Radii (squared) below this are treated as zero: the disc contributes only its center.
inline constexpr double kZeroRadiusSq = 1e-12;

struct CircleIntersection {
    int count = 0;  // 0, 1 (tangent) or 2; coincident circles report 0 with `coincident` set
    Point points[2];
    bool coincident = false;
};

// Boundary intersection of two circles. |d - (r1 + r2)| <= 1e-9 max(1, r1 + r2)
// (and the same for |d - |r1 - r2||) counts as tangency.
CircleIntersection intersect(const Circle& a, const Circle& b);

// Pairwise boundary intersections of the discs of radius sqrt(lambda_i) in
// (i, j) order, followed by every center.
std::vector<Point> candidate_centers(std::span<const Point> points, std::span<const double> lambda);

}  // namespace mssc

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mssc/geometry.hpp"

namespace mssc {

// A disc {y : |y - center|^2 < radius_sq}. Sites with radius_sq below
// kZeroRadiusSq never contain anything.
struct DiscSite {
    Point center;
    double radius_sq = 0.0;
};

// Enumerates a superset of the site sets {g : y in disc g} over all cells of
// the disc arrangement. Every cell either touches an intersection vertex (the
// four sets around the vertex are reported) or is bounded only by circles
// free of vertices (the sets just inside and outside such a circle are
// reported). Sites whose boundary passes within tolerance of a probe point
// are branched both ways, which keeps degenerate arrangements exact.
//
// visit(const std::vector<std::size_t>& sorted_sites) may be called with
// repeated sets; callers deduplicate.
class DiscArrangement {
public:
    explicit DiscArrangement(std::span<const DiscSite> sites) : sites_(sites.begin(), sites.end()) {
        for (std::size_t g = 0; g < sites_.size(); ++g) {
            if (sites_[g].radius_sq < kZeroRadiusSq) continue;
            active_.push_back(g);
            max_radius_ = std::max(max_radius_, std::sqrt(sites_[g].radius_sq));
        }
        std::sort(active_.begin(), active_.end(), [&](std::size_t a, std::size_t b) {
            const auto& pa = sites_[a].center;
            const auto& pb = sites_[b].center;
            return pa.x < pb.x || (pa.x == pb.x && (pa.y < pb.y || (pa.y == pb.y && a < b)));
        });
        xs_.reserve(active_.size());
        for (auto g : active_) xs_.push_back(sites_[g].center.x);
    }

    template <class Visit>
    void enumerate(Visit&& visit) const {
        const std::size_t na = active_.size();
        std::vector<char> has_vertex(sites_.size(), 0);
        std::vector<std::size_t> inside, border, set;

        for (std::size_t ia = 0; ia < na; ++ia) {
            const std::size_t a = active_[ia];
            const Circle ca{sites_[a].center, std::sqrt(sites_[a].radius_sq)};
            for (std::size_t ib = ia + 1; ib < na; ++ib) {
                if (xs_[ib] - xs_[ia] > ca.radius + max_radius_) break;
                const std::size_t b = active_[ib];
                const Circle cb{sites_[b].center, std::sqrt(sites_[b].radius_sq)};
                const auto x = intersect(ca, cb);
                for (int v = 0; v < x.count; ++v) {
                    has_vertex[a] = has_vertex[b] = 1;
                    classify(x.points[v], a, b, inside, border);
                    border.push_back(a);
                    border.push_back(b);
                    emit(inside, border, set, visit);
                }
            }
        }
        // Cells bounded only by vertex-free circles.
        for (auto c : active_) {
            if (has_vertex[c]) continue;
            const auto& s = sites_[c];
            const Point probe{s.center.x + std::sqrt(s.radius_sq), s.center.y};
            classify(probe, c, c, inside, border);
            border.push_back(c);
            emit(inside, border, set, visit);
        }
    }

    // Same cells as enumerate(), reported through a running set: for every
    // circle, its vertices are visited in angular order and the set of discs
    // containing the current arc changes by one site per vertex. Vertices
    // shared by more than two circles, and tangencies, go through the explicit
    // classification instead. The sink provides
    //   clear_running(), set_running(site, bool),
    //   visit_running(a, b)   running set plus every subset of {a, b},
    //   visit(sorted_sites)   explicit set.
    // Returns false, having reported only part of the cells, if two circles
    // coincide; enumerate() handles that case.
    template <class Sink>
    bool sweep(Sink& sink) const {
        struct Event {
            double angle;
            std::size_t site;
            int kind;  // +1 enters the site's disc, -1 leaves it, 0 tangency
            Point at;
        };
        constexpr double kTwoPi = 6.283185307179586;
        constexpr double kSameAngle = 1e-9;
        std::vector<Event> events;
        std::vector<std::size_t> inside, border, set;
        auto visit_explicit = [&](const std::vector<std::size_t>& s) { sink.visit(s); };

        for (std::size_t ia = 0; ia < active_.size(); ++ia) {
            const std::size_t a = active_[ia];
            const Circle ca{sites_[a].center, std::sqrt(sites_[a].radius_sq)};
            const auto lo = std::lower_bound(xs_.begin(), xs_.end(), ca.center.x - ca.radius - max_radius_);
            const auto hi = std::upper_bound(xs_.begin(), xs_.end(), ca.center.x + ca.radius + max_radius_);
            const auto first = static_cast<std::size_t>(lo - xs_.begin());
            const auto last = static_cast<std::size_t>(hi - xs_.begin());

            events.clear();
            for (std::size_t ib = first; ib < last; ++ib) {
                const std::size_t b = active_[ib];
                if (b == a) continue;
                const Circle cb{sites_[b].center, std::sqrt(sites_[b].radius_sq)};
                const auto x = intersect(ca, cb);
                if (x.coincident) return false;
                const double toward = std::atan2(cb.center.y - ca.center.y, cb.center.x - ca.center.x);
                for (int v = 0; v < x.count; ++v) {
                    const double t = std::atan2(x.points[v].y - ca.center.y, x.points[v].x - ca.center.x);
                    // The arc inside disc b is centered on the direction of b.
                    const double rel = std::remainder(t - toward, kTwoPi);
                    const int kind = x.count == 1 ? 0 : (rel < 0.0 ? 1 : -1);
                    events.push_back({t < 0.0 ? t + kTwoPi : t, b, kind, x.points[v]});
                }
            }
            if (events.empty()) {
                const Point probe{ca.center.x + ca.radius, ca.center.y};
                classify(probe, a, a, inside, border);
                border.push_back(a);
                emit(inside, border, set, visit_explicit);
                continue;
            }
            std::sort(events.begin(), events.end(), [](const Event& u, const Event& v) {
                return u.angle < v.angle || (u.angle == v.angle && u.site < v.site);
            });

            // Start in the middle of the widest gap between vertices.
            const std::size_t ne = events.size();
            std::size_t start = 0;
            double widest = -1.0;
            for (std::size_t e = 0; e < ne; ++e) {
                const double next = e + 1 < ne ? events[e + 1].angle : events[0].angle + kTwoPi;
                if (next - events[e].angle > widest) {
                    widest = next - events[e].angle;
                    start = (e + 1) % ne;
                }
            }
            const double mid = events[(start + ne - 1) % ne].angle + 0.5 * widest;
            const Point p0{ca.center.x + ca.radius * std::cos(mid), ca.center.y + ca.radius * std::sin(mid)};
            sink.clear_running();
            for (std::size_t ib = first; ib < last; ++ib) {
                const std::size_t g = active_[ib];
                if (g != a && squared_distance(sites_[g].center, p0) < sites_[g].radius_sq) sink.set_running(g, true);
            }

            for (std::size_t done = 0; done < ne;) {
                const std::size_t e0 = (start + done) % ne;
                std::size_t len = 1;
                auto gap = [&](std::size_t from, std::size_t to) {
                    const double d = events[to].angle - events[from].angle;
                    return d < 0.0 ? d + kTwoPi : d;
                };
                while (done + len < ne && gap((start + done + len - 1) % ne, (start + done + len) % ne) <= kSameAngle)
                    ++len;
                const Event& ev = events[e0];
                if (len == 1 && ev.kind != 0) {
                    if (ev.kind < 0) sink.set_running(ev.site, false);
                    if (ev.site > a) sink.visit_running(a, ev.site);
                    if (ev.kind > 0) sink.set_running(ev.site, true);
                } else {
                    for (std::size_t t = 0; t < len; ++t) {
                        const Event& g = events[(e0 + t) % ne];
                        classify(g.at, a, g.site, inside, border);
                        border.push_back(a);
                        border.push_back(g.site);
                        emit(inside, border, set, visit_explicit);
                    }
                    for (std::size_t t = 0; t < len; ++t) {
                        const Event& g = events[(e0 + t) % ne];
                        if (g.kind != 0) sink.set_running(g.site, g.kind > 0);
                    }
                }
                done += len;
            }
        }
        return true;
    }

private:
    // Splits sites (other than a, b) into those strictly containing q and
    // those whose boundary passes through q.
    void classify(const Point& q, std::size_t a, std::size_t b, std::vector<std::size_t>& inside,
                  std::vector<std::size_t>& border) const {
        inside.clear();
        border.clear();
        const auto lo = std::lower_bound(xs_.begin(), xs_.end(), q.x - max_radius_) - xs_.begin();
        const auto hi = std::upper_bound(xs_.begin(), xs_.end(), q.x + max_radius_) - xs_.begin();
        for (auto i = lo; i < hi; ++i) {
            const std::size_t g = active_[static_cast<std::size_t>(i)];
            if (g == a || g == b) continue;
            const double d2 = squared_distance(sites_[g].center, q);
            const double r2 = sites_[g].radius_sq;
            const double tol = 1e-9 * std::max(1.0, r2);
            if (d2 < r2 - tol) inside.push_back(g);
            else if (d2 <= r2 + tol) border.push_back(g);
        }
    }

    template <class Visit>
    static void emit(const std::vector<std::size_t>& inside, const std::vector<std::size_t>& border,
                     std::vector<std::size_t>& set, Visit& visit) {
        // Up to 6 boundary sites are branched independently; beyond that the
        // surplus moves as one block.
        const std::size_t free_bits = std::min<std::size_t>(border.size(), 6);
        const std::size_t combos = std::size_t{1} << free_bits;
        const bool has_block = border.size() > free_bits;
        for (std::size_t block = 0; block < (has_block ? 2u : 1u); ++block) {
            for (std::size_t mask = 0; mask < combos; ++mask) {
                set = inside;
                for (std::size_t t = 0; t < free_bits; ++t)
                    if (mask >> t & 1u) set.push_back(border[border.size() - 1 - t]);
                if (block)
                    for (std::size_t t = 0; t + free_bits < border.size(); ++t) set.push_back(border[t]);
                if (set.empty()) continue;
                std::sort(set.begin(), set.end());
                visit(static_cast<const std::vector<std::size_t>&>(set));
            }
        }
    }

    std::vector<DiscSite> sites_;
    std::vector<std::size_t> active_;
    std::vector<double> xs_;
    double max_radius_ = 0.0;
};

}  // namespace mssc

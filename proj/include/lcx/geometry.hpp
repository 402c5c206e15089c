#pragma once

#include <algorithm>
#include <limits>
#include <optional>

#include "lcx/types.hpp"

namespace lcx {

/// Axis-aligned rectangle; (x, y) is the lower-left corner.
struct Obstacle {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double x1() const { return x + w; }
    double y1() const { return y + h; }

    /// Closed membership (boundary counts as inside).
    bool contains(Vec2 p) const { return p.x >= x && p.x <= x1() && p.y >= y && p.y <= y1(); }
    bool contains_interior(Vec2 p) const { return p.x > x && p.x < x1() && p.y > y && p.y < y1(); }

    double distance_to(Vec2 p) const {
        const double dx = std::max({x - p.x, 0.0, p.x - x1()});
        const double dy = std::max({y - p.y, 0.0, p.y - y1()});
        return std::hypot(dx, dy);
    }

    bool overlaps(const Obstacle& o) const {
        return x < o.x1() && o.x < x1() && y < o.y1() && o.y < y1();
    }

    friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

/// True iff the closed segment p->q meets the open interior of `box`.
/// A segment that only touches the boundary (e.g. grazes a corner) does not.
inline bool segment_hits_interior(Vec2 p, Vec2 q, const Obstacle& box) {
    double t0 = 0.0;
    double t1 = 1.0;
    const double lo[2] = {box.x, box.y};
    const double hi[2] = {box.x1(), box.y1()};
    const double start[2] = {p.x, p.y};
    const double d[2] = {q.x - p.x, q.y - p.y};
    for (int a = 0; a < 2; ++a) {
        if (d[a] == 0.0) {
            if (!(start[a] > lo[a] && start[a] < hi[a])) return false;
            continue;
        }
        double ta = (lo[a] - start[a]) / d[a];
        double tb = (hi[a] - start[a]) / d[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (!(t0 < t1)) return false;
    }
    return t0 < t1;
}

struct OpenInterval {
    double lo;
    double hi;
};

/// Targets on the horizontal line y = row_y that `box` hides from `p`, i.e.
/// {x : segment p->(x, row_y) meets the open interior of box}. That set is
/// convex, so it is an open interval. `p` must not lie in the open interior.
inline std::optional<OpenInterval> row_shadow(Vec2 p, double row_y, const Obstacle& box) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (row_y == p.y) {
        if (!(box.y < p.y && p.y < box.y1())) return std::nullopt;
        if (p.x <= box.x) return OpenInterval{box.x, inf};
        if (p.x >= box.x1()) return OpenInterval{-inf, box.x1()};
        return std::nullopt;
    }
    const double lo = std::min(p.y, row_y);
    const double hi = std::max(p.y, row_y);
    const double ya = std::max(box.y, lo);
    const double yb = std::min(box.y1(), hi);
    if (!(ya < yb)) return std::nullopt;

    // Segment parameter range that lies inside the obstacle's y-slab.
    const double sa = (ya - p.y) / (row_y - p.y);
    const double sb = (yb - p.y) / (row_y - p.y);
    const double smin = std::min(sa, sb);
    const double smax = std::max(sa, sb);

    const double a = box.x - p.x;
    const double b = box.x1() - p.x;
    double left;
    if (a > 0) left = p.x + a / smax;
    else if (a < 0) left = smin > 0 ? p.x + a / smin : -inf;
    else left = p.x;
    double right;
    if (b > 0) right = smin > 0 ? p.x + b / smin : inf;
    else if (b < 0) right = p.x + b / smax;
    else right = p.x;

    if (!(left < right)) return std::nullopt;
    return OpenInterval{left, right};
}

}  // namespace lcx

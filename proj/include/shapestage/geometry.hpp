#pragma once

#include <cmath>
#include <span>

namespace shapestage {

/// A coordinate in stage pixel space. Origin top-left, y grows downward.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Aabb {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    bool contains(Point p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
    bool contains(const Aabb& o) const {
        return o.min_x >= min_x && o.max_x <= max_x && o.min_y >= min_y && o.max_y <= max_y;
    }
    Aabb translated(Point d) const { return {min_x + d.x, min_y + d.y, max_x + d.x, max_y + d.y}; }

    friend bool operator==(const Aabb&, const Aabb&) = default;
};

/// Container bounded by lines of slope -1 (p = x + y) and slope 1 (q = x - y).
struct DiagonalBox {
    double p_min = 0.0;
    double p_max = 0.0;
    double q_min = 0.0;
    double q_max = 0.0;

    bool contains(Point pt) const {
        const double p = pt.x + pt.y;
        const double q = pt.x - pt.y;
        return p >= p_min && p <= p_max && q >= q_min && q <= q_max;
    }

    friend bool operator==(const DiagonalBox&, const DiagonalBox&) = default;
};

/// Points closer than this to a polygon edge count as inside.
inline constexpr double kEdgeEpsilon = 1e-9;

/// Tight axis-aligned box. Throws Error(invalid_argument) on an empty or
/// non-finite point set.
Aabb aabb_of(std::span<const Point> points);

/// Tight min/max of x + y and x - y over the point set.
DiagonalBox diagonal_box_of(std::span<const Point> points);

/// Even-odd containment; the polygon is implicitly closed. Points within
/// kEdgeEpsilon of any edge are reported inside. Throws
/// Error(degenerate_polygon) for fewer than three vertices.
bool point_in_polygon(Point pt, std::span<const Point> vertices);

namespace detail {

// Shared with the scanline filler so that both agree bit for bit.

/// True when the horizontal line through y separates the edge endpoints
/// (half-open: an endpoint exactly on the line counts as above).
inline bool edge_straddles(Point a, Point b, double y) { return (a.y > y) != (b.y > y); }

/// x where edge (a, b) meets the horizontal line through y. Only valid when
/// edge_straddles(a, b, y).
inline double edge_crossing_x(Point a, Point b, double y) {
    return a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
}

bool near_segment(Point pt, Point a, Point b, double eps = kEdgeEpsilon);

} // namespace detail

} // namespace shapestage

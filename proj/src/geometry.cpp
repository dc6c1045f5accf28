#include "shapestage/geometry.hpp"

#include <algorithm>

#include "shapestage/error.hpp"

namespace shapestage {

namespace {

void require_points(std::span<const Point> points) {
    if (points.empty()) {
        throw Error(ErrorCode::invalid_argument, "empty point set");
    }
    for (const Point& p : points) {
        if (!is_finite(p)) {
            throw Error(ErrorCode::invalid_argument, "non-finite coordinate");
        }
    }
}

} // namespace

Aabb aabb_of(std::span<const Point> points) {
    require_points(points);
    Aabb box{points[0].x, points[0].y, points[0].x, points[0].y};
    for (const Point& p : points.subspan(1)) {
        box.min_x = std::min(box.min_x, p.x);
        box.min_y = std::min(box.min_y, p.y);
        box.max_x = std::max(box.max_x, p.x);
        box.max_y = std::max(box.max_y, p.y);
    }
    return box;
}

DiagonalBox diagonal_box_of(std::span<const Point> points) {
    require_points(points);
    const double p0 = points[0].x + points[0].y;
    const double q0 = points[0].x - points[0].y;
    DiagonalBox box{p0, p0, q0, q0};
    for (const Point& pt : points.subspan(1)) {
        const double p = pt.x + pt.y;
        const double q = pt.x - pt.y;
        box.p_min = std::min(box.p_min, p);
        box.p_max = std::max(box.p_max, p);
        box.q_min = std::min(box.q_min, q);
        box.q_max = std::max(box.q_max, q);
    }
    return box;
}

namespace detail {

bool near_segment(Point pt, Point a, Point b, double eps) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((pt.x - a.x) * dx + (pt.y - a.y) * dy) / len2, 0.0, 1.0);
    }
    const double ex = pt.x - (a.x + t * dx);
    const double ey = pt.y - (a.y + t * dy);
    return ex * ex + ey * ey <= eps * eps;
}

} // namespace detail

bool point_in_polygon(Point pt, std::span<const Point> vertices) {
    if (vertices.size() < 3) {
        throw Error(ErrorCode::degenerate_polygon, "degenerate polygon");
    }
    bool inside = false;
    Point prev = vertices.back();
    for (const Point& cur : vertices) {
        if (detail::near_segment(pt, prev, cur)) {
            return true;
        }
        if (detail::edge_straddles(prev, cur, pt.y) && pt.x < detail::edge_crossing_x(prev, cur, pt.y)) {
            inside = !inside;
        }
        prev = cur;
    }
    return inside;
}

} // namespace shapestage

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "viewscore/errors.hpp"
#include "viewscore/geometry.hpp"
#include "viewscore/graph.hpp"
#include "viewscore/projection.hpp"

namespace viewscore {

inline constexpr double kDepthTieTolerance = 1e-9;

// Exact circle-circle intersection (lens) area.
inline double circle_circle_area(Vec2 c1, double r1, Vec2 c2, double r2) {
    double d = distance(c1, c2);
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) {
        double r = std::min(r1, r2);
        return kPi * r * r;
    }
    double d2 = d * d;
    double a1 = std::acos(std::clamp((d2 + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
    double a2 = std::acos(std::clamp((d2 + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
    double kernel = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, kernel));
}

inline double circle_circle_area(const ProjectedCircle& a, const ProjectedCircle& b) {
    return circle_circle_area(a.center, a.radius, b.center, b.radius);
}

namespace detail {

// Point-in-tapered-capsule: within the linearly interpolated half-width of
// the nearest centerline parameter (round caps at the endpoints).
inline bool point_in_thick_segment(Vec2 p, const ProjectedThickSegment& s) {
    double t = segment_closest_param(p, s.a, s.b);
    Vec2 foot = s.a + (s.b - s.a) * t;
    double hw = segment_half_width_at(s, t);
    return norm_sq(p - foot) <= hw * hw;
}

struct RasterGrid {
    double x0, y0, pitch;
    Vec2 circle_center;
    double circle_radius;
    const ProjectedThickSegment* seg;
    double hw_min, hw_max;

    Vec2 cell_center(int64_t i, int64_t j) const {
        return {x0 + (static_cast<double>(i) + 0.5) * pitch,
                y0 + (static_cast<double>(j) + 0.5) * pitch};
    }
};

// Counts covered cell centers over the index block [i0,i1)x[j0,j1) exactly as
// a flat scan would, but classifies whole blocks that are provably inside or
// outside both shapes without descending to cells.
inline int64_t count_covered_cells(const RasterGrid& g, int64_t i0, int64_t i1, int64_t j0,
                                   int64_t j1) {
    if (i0 >= i1 || j0 >= j1) return 0;
    double bx0 = g.x0 + static_cast<double>(i0) * g.pitch;
    double bx1 = g.x0 + static_cast<double>(i1) * g.pitch;
    double by0 = g.y0 + static_cast<double>(j0) * g.pitch;
    double by1 = g.y0 + static_cast<double>(j1) * g.pitch;
    Vec2 block_center{0.5 * (bx0 + bx1), 0.5 * (by0 + by1)};
    double half_diag = 0.5 * std::hypot(bx1 - bx0, by1 - by0);

    double dc = distance(block_center, g.circle_center);
    if (dc - half_diag > g.circle_radius) return 0;
    double ds = point_segment_distance(block_center, g.seg->a, g.seg->b);
    if (ds - half_diag > g.hw_max) return 0;

    bool inside_circle = dc + half_diag <= g.circle_radius;
    bool inside_capsule = ds + half_diag <= g.hw_min;
    if (inside_circle && inside_capsule) return (i1 - i0) * (j1 - j0);

    if (i1 - i0 == 1 && j1 - j0 == 1) {
        Vec2 p = g.cell_center(i0, j0);
        if (norm_sq(p - g.circle_center) > g.circle_radius * g.circle_radius) return 0;
        return point_in_thick_segment(p, *g.seg) ? 1 : 0;
    }
    int64_t im = i1 - i0 > 1 ? i0 + (i1 - i0) / 2 : i1;
    int64_t jm = j1 - j0 > 1 ? j0 + (j1 - j0) / 2 : j1;
    int64_t total = count_covered_cells(g, i0, im, j0, jm);
    if (im < i1) total += count_covered_cells(g, im, i1, j0, jm);
    if (jm < j1) total += count_covered_cells(g, i0, im, jm, j1);
    if (im < i1 && jm < j1) total += count_covered_cells(g, im, i1, jm, j1);
    return total;
}

} // namespace detail

// Rasterized intersection area between an edge tube and a node disc: counts
// grid cell centers covered by both shapes over the intersection of their
// bounding boxes, with cell pitch min(radius, min half-width) / resolution.
// Error is O(perimeter * cell).
inline double thick_segment_circle_area(const ProjectedThickSegment& seg,
                                        const ProjectedCircle& circle, int resolution) {
    if (resolution < 64) throw_domain("thick_segment_circle_area: resolution must be >= 64");
    if (!(circle.radius > 0.0) || !(seg.half_width_a > 0.0) || !(seg.half_width_b > 0.0))
        return 0.0;
    double hw_min = std::min(seg.half_width_a, seg.half_width_b);
    double hw_max = std::max(seg.half_width_a, seg.half_width_b);

    double sx0 = std::min(seg.a.x, seg.b.x) - hw_max;
    double sx1 = std::max(seg.a.x, seg.b.x) + hw_max;
    double sy0 = std::min(seg.a.y, seg.b.y) - hw_max;
    double sy1 = std::max(seg.a.y, seg.b.y) + hw_max;
    double x0 = std::max(sx0, circle.center.x - circle.radius);
    double x1 = std::min(sx1, circle.center.x + circle.radius);
    double y0 = std::max(sy0, circle.center.y - circle.radius);
    double y1 = std::min(sy1, circle.center.y + circle.radius);
    if (x0 >= x1 || y0 >= y1) return 0.0;

    double pitch = std::min(circle.radius, hw_min) / static_cast<double>(resolution);
    int64_t nx = static_cast<int64_t>(std::ceil((x1 - x0) / pitch));
    int64_t ny = static_cast<int64_t>(std::ceil((y1 - y0) / pitch));

    detail::RasterGrid grid{x0, y0, pitch, circle.center, circle.radius,
                            &seg,  hw_min, hw_max};
    int64_t covered = detail::count_covered_cells(grid, 0, nx, 0, ny);
    return static_cast<double>(covered) * pitch * pitch;
}

// Pairwise depth-aware overlap counts and areas. All six values are
// lower-better raw measures.
struct OverlapCensus {
    long nn_count = 0;
    long en_count = 0; // edge occludes node
    long ne_count = 0; // node occludes edge
    double nn_area = 0.0;
    double en_area = 0.0;
    double ne_area = 0.0;
};

// Node-node pairs use the closed-form lens area. For each non-incident
// (edge, node) pair with positive rasterized intersection area, the pair is
// classified by comparing the edge's perspective-correct depth at the
// centerline parameter nearest the node center against the node depth; the
// nearer primitive occludes, depth ties count as edge-over-node.
inline OverlapCensus overlap_census(const ProjectedDrawing& drawing, const Graph& graph,
                                    int resolution) {
    OverlapCensus census;
    const std::size_t n = drawing.circles.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const ProjectedCircle& a = drawing.circles[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const ProjectedCircle& b = drawing.circles[j];
            double dx = std::abs(a.center.x - b.center.x);
            double dy = std::abs(a.center.y - b.center.y);
            double reach = a.radius + b.radius;
            if (dx >= reach || dy >= reach) continue;
            double area = circle_circle_area(a, b);
            if (area > 0.0) {
                census.nn_count++;
                census.nn_area += area;
            }
        }
    }

    for (std::size_t e = 0; e < drawing.segments.size(); ++e) {
        const ProjectedThickSegment& seg = drawing.segments[e];
        auto [u, v] = graph.edges[e];
        double hw_max = std::max(seg.half_width_a, seg.half_width_b);
        for (std::size_t w = 0; w < n; ++w) {
            if (static_cast<int>(w) == u || static_cast<int>(w) == v) continue;
            const ProjectedCircle& c = drawing.circles[w];
            if (point_segment_distance(c.center, seg.a, seg.b) > c.radius + hw_max) continue;
            double area = thick_segment_circle_area(seg, c, resolution);
            if (area <= 0.0) continue;
            double t = segment_closest_param(c.center, seg.a, seg.b);
            double edge_depth = segment_depth_at(seg, t);
            if (edge_depth - c.depth < kDepthTieTolerance) {
                census.en_count++;
                census.en_area += area;
            } else {
                census.ne_count++;
                census.ne_area += area;
            }
        }
    }
    return census;
}

} // namespace viewscore

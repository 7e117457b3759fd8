#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "viewscore/geometry.hpp"
#include "viewscore/graph.hpp"
#include "viewscore/measures.hpp"
#include "viewscore/projection.hpp"

namespace viewscore {

inline constexpr double kCrossingTolerance = 1e-9; // viewport units

struct Crossing {
    int edge_a;
    int edge_b;
    Vec2 point;
    double angle_deg; // folded to [0, 90]; 0 only for collinear overlaps
};

struct CrossingSet {
    std::vector<Crossing> items;
};

namespace detail {

// Angle between segment directions folded to [0, 90] degrees.
inline double folded_angle_deg(Vec2 d1, Vec2 d2) {
    double n1 = norm(d1), n2 = norm(d2);
    if (n1 <= 0.0 || n2 <= 0.0) return 0.0;
    double c = std::clamp(std::abs(dot(d1, d2)) / (n1 * n2), 0.0, 1.0);
    return rad_to_deg(std::acos(c));
}

} // namespace detail

// All pairs of non-adjacent edges whose open centerline segments intersect.
// Intersections closer than kCrossingTolerance to any endpoint do not count;
// collinear overlapping segments count once, at the overlap midpoint.
inline CrossingSet crossings(const ProjectedDrawing& drawing, const Graph& graph) {
    CrossingSet out;
    const auto& segs = drawing.segments;
    const std::size_t m = segs.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        auto [ia, ib] = graph.edges[i];
        Vec2 p0 = segs[i].a, p1 = segs[i].b;
        Vec2 d1 = p1 - p0;
        double len1 = norm(d1);
        double min1x = std::min(p0.x, p1.x), max1x = std::max(p0.x, p1.x);
        double min1y = std::min(p0.y, p1.y), max1y = std::max(p0.y, p1.y);
        for (std::size_t j = i + 1; j < m; ++j) {
            auto [ja, jb] = graph.edges[j];
            if (ia == ja || ia == jb || ib == ja || ib == jb) continue;
            Vec2 q0 = segs[j].a, q1 = segs[j].b;
            if (std::max(q0.x, q1.x) < min1x - kCrossingTolerance ||
                std::min(q0.x, q1.x) > max1x + kCrossingTolerance ||
                std::max(q0.y, q1.y) < min1y - kCrossingTolerance ||
                std::min(q0.y, q1.y) > max1y + kCrossingTolerance)
                continue;
            Vec2 d2 = q1 - q0;
            double len2 = norm(d2);
            if (len1 <= 0.0 || len2 <= 0.0) continue;

            double denom = cross(d1, d2);
            Vec2 w = q0 - p0;
            if (std::abs(denom) <= 1e-14 * len1 * len2) {
                // parallel; collinear iff q0 is on p's supporting line
                if (std::abs(cross(d1, w)) > kCrossingTolerance * len1) continue;
                // overlap interval in p's parameterization
                double t0 = dot(w, d1) / (len1 * len1);
                double t1 = dot(q1 - p0, d1) / (len1 * len1);
                if (t0 > t1) std::swap(t0, t1);
                double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
                if ((hi - lo) * len1 <= kCrossingTolerance) continue;
                double tm = 0.5 * (lo + hi);
                out.items.push_back({static_cast<int>(i), static_cast<int>(j),
                                     p0 + d1 * tm, 0.0});
                continue;
            }
            double t = cross(w, d2) / denom;
            double u = cross(w, d1) / denom;
            // open-segment test: farther than the tolerance from every endpoint
            if (t * len1 <= kCrossingTolerance || (1.0 - t) * len1 <= kCrossingTolerance)
                continue;
            if (u * len2 <= kCrossingTolerance || (1.0 - u) * len2 <= kCrossingTolerance)
                continue;
            out.items.push_back({static_cast<int>(i), static_cast<int>(j), p0 + d1 * t,
                                 detail::folded_angle_deg(d1, d2)});
        }
    }
    return out;
}

inline RawMeasure measure_cr(const CrossingSet& cs) {
    return {MeasureId::CR, static_cast<double>(cs.items.size())};
}

inline RawMeasure measure_car(const CrossingSet& cs) {
    if (cs.items.empty()) return {MeasureId::CAR, 1.0};
    double dev = 0.0;
    for (const Crossing& c : cs.items) dev += std::abs(90.0 - c.angle_deg) / 90.0;
    return {MeasureId::CAR, 1.0 - dev / static_cast<double>(cs.items.size())};
}

// Stress with weights d^-2, minimized over a uniform scale of the projected
// coordinates (closed form s* = sum(w d e) / sum(w e^2)); disconnected pairs
// are skipped.
inline RawMeasure measure_stress(const ProjectedDrawing& drawing, const ShortestPaths& sp) {
    const int n = sp.n;
    double swde = 0.0, swee = 0.0;
    long pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int32_t d = sp.at(i, j);
            if (d <= 0) continue;
            double e = distance(drawing.circles[static_cast<std::size_t>(i)].center,
                                drawing.circles[static_cast<std::size_t>(j)].center);
            double w = 1.0 / (static_cast<double>(d) * d);
            swde += w * d * e;
            swee += w * e * e;
            ++pairs;
        }
    }
    if (pairs == 0) return {MeasureId::ST, 0.0};
    double total = 0.0;
    if (swee > 0.0) {
        double s = swde / swee;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                int32_t d = sp.at(i, j);
                if (d <= 0) continue;
                double e = distance(drawing.circles[static_cast<std::size_t>(i)].center,
                                    drawing.circles[static_cast<std::size_t>(j)].center);
                double w = 1.0 / (static_cast<double>(d) * d);
                double diff = s * e - d;
                total += w * diff * diff;
            }
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (sp.at(i, j) > 0) total += 1.0; // w d^2 = 1 under w = d^-2
    }
    return {MeasureId::ST, total / static_cast<double>(pairs)};
}

inline RawMeasure measure_stress(const ProjectedDrawing& drawing, const Graph& graph) {
    return measure_stress(drawing, bfs_all_pairs(graph));
}

namespace detail {

struct Bounds2 {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
    bool valid = false;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

inline Bounds2 node_bounds(const ProjectedDrawing& d) {
    Bounds2 b;
    for (const ProjectedCircle& c : d.circles) {
        if (!b.valid) {
            b = {c.center.x, c.center.y, c.center.x, c.center.y, true};
        } else {
            b.min_x = std::min(b.min_x, c.center.x);
            b.min_y = std::min(b.min_y, c.center.y);
            b.max_x = std::max(b.max_x, c.center.x);
            b.max_y = std::max(b.max_y, c.center.y);
        }
    }
    return b;
}

} // namespace detail

inline std::pair<RawMeasure, RawMeasure> measure_area_aspect(const ProjectedDrawing& drawing) {
    detail::Bounds2 b = detail::node_bounds(drawing);
    double viewport_area = drawing.viewport_w * drawing.viewport_h;
    if (!b.valid || viewport_area <= 0.0)
        return {{MeasureId::AR, 0.0}, {MeasureId::ASP, 0.0}};
    double w = b.width(), h = b.height();
    double ar = (w * h) / viewport_area;
    double asp = std::max(w, h) > 0.0 ? std::min(w, h) / std::max(w, h) : 0.0;
    return {{MeasureId::AR, ar}, {MeasureId::ASP, asp}};
}

// Fraction of nodes beyond the first per cell of a ceil(sqrt(n))^2 grid laid
// over the node bounding box.
inline RawMeasure measure_concentration(const ProjectedDrawing& drawing) {
    const int n = static_cast<int>(drawing.circles.size());
    if (n < 2) return {MeasureId::CON, 0.0};
    detail::Bounds2 b = detail::node_bounds(drawing);
    int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    std::vector<int> counts(static_cast<std::size_t>(k) * k, 0);
    double w = b.width(), h = b.height();
    for (const ProjectedCircle& c : drawing.circles) {
        int cx = w > 0.0 ? std::min(k - 1, static_cast<int>((c.center.x - b.min_x) / w * k)) : 0;
        int cy = h > 0.0 ? std::min(k - 1, static_cast<int>((c.center.y - b.min_y) / h * k)) : 0;
        counts[static_cast<std::size_t>(cy) * k + cx]++;
    }
    double excess = 0.0;
    for (int c : counts)
        if (c > 1) excess += c - 1;
    return {MeasureId::CON, excess / static_cast<double>(n - 1)};
}

// Node count over the size of a square lattice, pitched at the median
// nearest-neighbor distance, that covers the node bounding box.
inline RawMeasure measure_node_orthogonality(const ProjectedDrawing& drawing) {
    const int n = static_cast<int>(drawing.circles.size());
    if (n < 2) return {MeasureId::NO, 0.0};
    std::vector<double> nn(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double d = distance(drawing.circles[static_cast<std::size_t>(i)].center,
                                drawing.circles[static_cast<std::size_t>(j)].center);
            nn[static_cast<std::size_t>(i)] = std::min(nn[static_cast<std::size_t>(i)], d);
            nn[static_cast<std::size_t>(j)] = std::min(nn[static_cast<std::size_t>(j)], d);
        }
    }
    std::sort(nn.begin(), nn.end());
    double pitch = (n % 2 == 1) ? nn[static_cast<std::size_t>(n / 2)]
                                : 0.5 * (nn[static_cast<std::size_t>(n / 2 - 1)] +
                                         nn[static_cast<std::size_t>(n / 2)]);
    if (!(pitch > 0.0)) return {MeasureId::NO, 0.0}; // coincident nodes, no usable grid
    detail::Bounds2 b = detail::node_bounds(drawing);
    double cols = std::ceil(b.width() / pitch);
    double rows = std::ceil(b.height() / pitch);
    double lattice_points = (cols + 1.0) * (rows + 1.0);
    return {MeasureId::NO, std::min(1.0, static_cast<double>(n) / lattice_points)};
}

// Gabriel ratio: fraction of (edge, non-endpoint node) pairs whose node lies
// outside the open disc spanned by the edge as diameter.
inline RawMeasure measure_gabriel(const ProjectedDrawing& drawing, const Graph& graph) {
    const int n = static_cast<int>(drawing.circles.size());
    const int m = static_cast<int>(drawing.segments.size());
    if (n < 3 || m == 0) return {MeasureId::GR, 1.0};
    long violations = 0;
    for (int e = 0; e < m; ++e) {
        auto [u, v] = graph.edges[static_cast<std::size_t>(e)];
        Vec2 a = drawing.segments[static_cast<std::size_t>(e)].a;
        Vec2 b = drawing.segments[static_cast<std::size_t>(e)].b;
        Vec2 mid = (a + b) * 0.5;
        double r_sq = norm_sq(b - a) * 0.25;
        for (int w = 0; w < n; ++w) {
            if (w == u || w == v) continue;
            if (norm_sq(drawing.circles[static_cast<std::size_t>(w)].center - mid) < r_sq)
                ++violations;
        }
    }
    double pairs = static_cast<double>(m) * (n - 2);
    return {MeasureId::GR, 1.0 - static_cast<double>(violations) / pairs};
}

// Mean deviation of the smallest angle between consecutive incident edges
// from the ideal even spacing, over nodes with two or more distinct incident
// directions; zero-length projected edges are skipped.
inline RawMeasure measure_angular_resolution(const ProjectedDrawing& drawing,
                                             const Graph& graph) {
    auto adj = adjacency_lists(graph);
    double dev_sum = 0.0;
    int counted = 0;
    std::vector<double> angles;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        if (adj[v].size() < 2) continue;
        angles.clear();
        Vec2 pv = drawing.circles[v].center;
        for (int u : adj[v]) {
            Vec2 d = drawing.circles[static_cast<std::size_t>(u)].center - pv;
            if (norm_sq(d) <= 0.0) continue;
            angles.push_back(std::atan2(d.y, d.x));
        }
        if (angles.size() < 2) continue;
        std::sort(angles.begin(), angles.end());
        double min_gap = 2.0 * kPi - (angles.back() - angles.front());
        for (std::size_t i = 0; i + 1 < angles.size(); ++i)
            min_gap = std::min(min_gap, angles[i + 1] - angles[i]);
        double ideal = 2.0 * kPi / static_cast<double>(angles.size());
        dev_sum += std::abs(ideal - min_gap) / ideal;
        ++counted;
    }
    if (counted == 0) return {MeasureId::ANGR, 1.0};
    return {MeasureId::ANGR, 1.0 - dev_sum / static_cast<double>(counted)};
}

inline RawMeasure measure_edge_orthogonality(const ProjectedDrawing& drawing) {
    double dev_sum = 0.0;
    int counted = 0;
    for (const ProjectedThickSegment& s : drawing.segments) {
        Vec2 d = s.b - s.a;
        if (norm_sq(d) <= 0.0) continue;
        double theta = rad_to_deg(std::atan2(std::abs(d.y), std::abs(d.x))); // [0, 90]
        dev_sum += std::min(theta, 90.0 - theta) / 45.0;
        ++counted;
    }
    if (counted == 0) return {MeasureId::EO, 1.0};
    return {MeasureId::EO, 1.0 - dev_sum / static_cast<double>(counted)};
}

inline RawMeasure measure_edge_length_deviation(const ProjectedDrawing& drawing) {
    const std::size_t m = drawing.segments.size();
    if (m == 0) return {MeasureId::ELD, 0.0};
    double mean = 0.0;
    for (const ProjectedThickSegment& s : drawing.segments) mean += distance(s.a, s.b);
    mean /= static_cast<double>(m);
    if (!(mean > 0.0)) return {MeasureId::ELD, 0.0};
    double dev = 0.0;
    for (const ProjectedThickSegment& s : drawing.segments)
        dev += std::abs(distance(s.a, s.b) - mean) / mean;
    return {MeasureId::ELD, dev / static_cast<double>(m)};
}

// --- Edge-based symmetry (Hough-style voting over edge pairs) ---

struct SymmetryParams {
    double axis_theta_bin_deg = 5.0;  // reflective axis angle pitch
    double axis_rho_bin_frac = 0.01;  // reflective axis offset, of viewport diagonal
    double center_bin_frac = 0.02;    // rotation center, of viewport diagonal
    double rot_angle_bin_deg = 5.0;   // rotation angle pitch
    double trans_bin_frac = 0.02;     // translation per component, of viewport diagonal
    double sigma_length_factor = 0.1; // sigma_l = factor * mean edge length
};

enum class SymmetryKind { Reflective, Rotational, Translational };

namespace detail {

struct EdgeDescriptor {
    Vec2 mid;
    double angle; // direction mod pi, in [0, pi)
    double length;
};

inline int64_t bin_key(int64_t a, int64_t b, int64_t c) {
    return (a * (1 << 21) + b) * (1 << 21) + c;
}

// Votes for all three kinds in one pass over edge pairs; returns the three
// scores in {reflective, rotational, translational} order.
inline std::array<double, 3> symmetry_scores(const ProjectedDrawing& drawing,
                                             const SymmetryParams& params) {
    const std::size_t m = drawing.segments.size();
    if (m < 2) return {0.0, 0.0, 0.0};

    std::vector<EdgeDescriptor> edges;
    edges.reserve(m);
    double length_sum = 0.0;
    for (const ProjectedThickSegment& s : drawing.segments) {
        Vec2 d = s.b - s.a;
        double len = norm(d);
        if (len <= 0.0) continue;
        double ang = std::atan2(d.y, d.x);
        if (ang < 0.0) ang += kPi;
        if (ang >= kPi) ang -= kPi;
        edges.push_back({(s.a + s.b) * 0.5, ang, len});
        length_sum += len;
    }
    if (edges.size() < 2) return {0.0, 0.0, 0.0};
    double sigma_l = params.sigma_length_factor * length_sum / static_cast<double>(edges.size());

    double diag = std::hypot(drawing.viewport_w, drawing.viewport_h);
    if (!(diag > 0.0)) return {0.0, 0.0, 0.0};
    double rho_bin = params.axis_rho_bin_frac * diag;
    double center_bin = params.center_bin_frac * diag;
    double trans_bin = params.trans_bin_frac * diag;
    double theta_bin = deg_to_rad(params.axis_theta_bin_deg);
    double rot_bin = deg_to_rad(params.rot_angle_bin_deg);

    std::unordered_map<int64_t, double> mirror_votes, rot_votes, trans_votes;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const EdgeDescriptor& a = edges[i];
            const EdgeDescriptor& b = edges[j];
            double dl = (a.length - b.length) / sigma_l;
            double weight = std::exp(-dl * dl);
            if (weight < 1e-12) continue;
            Vec2 delta = b.mid - a.mid;
            Vec2 mid = (a.mid + b.mid) * 0.5;
            double sep = norm(delta);

            // reflective: perpendicular bisector of the midpoints (angle
            // bisector of the directions when midpoints coincide)
            double axis_angle;
            if (sep > 1e-12 * diag) {
                axis_angle = std::atan2(delta.y, delta.x) + kPi * 0.5;
            } else {
                axis_angle = 0.5 * (a.angle + b.angle);
            }
            while (axis_angle < 0.0) axis_angle += kPi;
            while (axis_angle >= kPi) axis_angle -= kPi;
            double normal_angle = axis_angle + kPi * 0.5;
            if (normal_angle >= kPi) normal_angle -= kPi;
            double rho = mid.x * std::cos(normal_angle) + mid.y * std::sin(normal_angle);
            // clamp continuous vote coordinates so bin keys stay bounded;
            // anything farther than a few diagonals out cannot be a symmetry
            // of the visible drawing anyway
            auto clamp_coord = [&](double x) { return std::clamp(x, -8.0 * diag, 8.0 * diag); };
            mirror_votes[bin_key(
                static_cast<int64_t>(std::floor(normal_angle / theta_bin)),
                static_cast<int64_t>(std::floor((clamp_coord(rho) + diag) / rho_bin)), 0)] +=
                weight;

            // rotational: angle difference mod pi; zero means a 180-degree
            // rotation about the joint midpoint, otherwise the center sits on
            // the perpendicular bisector of the midpoints
            double delta_angle = b.angle - a.angle;
            if (delta_angle < 0.0) delta_angle += kPi;
            Vec2 center = mid;
            if (delta_angle > 1e-12 && sep > 1e-12 * diag) {
                Vec2 dir = delta * (1.0 / sep);
                Vec2 perp{-dir.y, dir.x};
                center = mid + perp * (sep * 0.5 / std::tan(delta_angle * 0.5));
            }
            rot_votes[bin_key(
                static_cast<int64_t>(std::floor((clamp_coord(center.x) + 8.0 * diag) / center_bin)),
                static_cast<int64_t>(std::floor((clamp_coord(center.y) + 8.0 * diag) / center_bin)),
                static_cast<int64_t>(std::floor(delta_angle / rot_bin)))] += weight;

            // translational: displacement between midpoints, sign-canonical
            Vec2 t = delta;
            if (t.x < 0.0 || (t.x == 0.0 && t.y < 0.0)) t = -1.0 * t;
            trans_votes[bin_key(
                static_cast<int64_t>(std::floor(clamp_coord(t.x) / trans_bin)),
                static_cast<int64_t>(std::floor((clamp_coord(t.y) + 2.0 * diag) / trans_bin)),
                0)] += weight;
        }
    }

    auto best = [](const std::unordered_map<int64_t, double>& votes) {
        double top = 0.0;
        for (const auto& [key, w] : votes) top = std::max(top, w);
        return top;
    };
    double half_m = static_cast<double>(m) / 2.0;
    return {std::clamp(best(mirror_votes) / half_m, 0.0, 1.0),
            std::clamp(best(rot_votes) / half_m, 0.0, 1.0),
            std::clamp(best(trans_votes) / half_m, 0.0, 1.0)};
}

} // namespace detail

inline RawMeasure measure_symmetry(const ProjectedDrawing& drawing, SymmetryKind kind,
                                   const SymmetryParams& params = {}) {
    auto scores = detail::symmetry_scores(drawing, params);
    switch (kind) {
        case SymmetryKind::Reflective: return {MeasureId::ESR, scores[0]};
        case SymmetryKind::Rotational: return {MeasureId::ESO, scores[1]};
        case SymmetryKind::Translational: return {MeasureId::EST, scores[2]};
    }
    return {MeasureId::ESR, 0.0};
}

} // namespace viewscore

#pragma once

#include <string>
#include <vector>

#include "viewscore/camera.hpp"
#include "viewscore/errors.hpp"
#include "viewscore/geometry.hpp"
#include "viewscore/model.hpp"

namespace viewscore {

struct ProjectedCircle {
    Vec2 center;   // viewport units
    double radius; // viewport units
    double depth;  // eye-space z distance
    int node_index;
};

// Projected edge tube: a centerline segment with per-endpoint half-width,
// linearly interpolated along it, and per-endpoint depth (perspective-correct
// depth at parameter t follows 1/z interpolation).
struct ProjectedThickSegment {
    Vec2 a;
    Vec2 b;
    double half_width_a;
    double half_width_b;
    double depth_a;
    double depth_b;
    int edge_index;
};

inline double segment_depth_at(const ProjectedThickSegment& s, double t) {
    return 1.0 / ((1.0 - t) / s.depth_a + t / s.depth_b);
}

inline double segment_half_width_at(const ProjectedThickSegment& s, double t) {
    return s.half_width_a + t * (s.half_width_b - s.half_width_a);
}

struct ProjectedDrawing {
    std::vector<ProjectedCircle> circles;        // one per node
    std::vector<ProjectedThickSegment> segments; // one per edge
    double viewport_w = 0.0;
    double viewport_h = 0.0;
};

inline ProjectedDrawing project(const GraphBundle& bundle, const Camera& cam) {
    ProjectedDrawing out;
    out.viewport_w = cam.viewport_w;
    out.viewport_h = cam.viewport_h;
    out.circles.reserve(bundle.layout.positions.size());

    for (std::size_t i = 0; i < bundle.layout.positions.size(); ++i) {
        Vec3 q = bundle.layout.positions[i] - cam.eye;
        double depth = dot(q, cam.forward);
        if (!(depth > 0.0))
            throw_domain("project: node " + std::to_string(i) + " is behind the eye plane");
        double inv = cam.focal / depth;
        ProjectedCircle c;
        c.center = {dot(q, cam.right) * inv, dot(q, cam.up) * inv};
        c.radius = bundle.layout.node_radius * inv;
        c.depth = depth;
        c.node_index = static_cast<int>(i);
        out.circles.push_back(c);
    }

    out.segments.reserve(bundle.graph.edges.size());
    for (std::size_t e = 0; e < bundle.graph.edges.size(); ++e) {
        auto [i, j] = bundle.graph.edges[e];
        const ProjectedCircle& ci = out.circles[static_cast<std::size_t>(i)];
        const ProjectedCircle& cj = out.circles[static_cast<std::size_t>(j)];
        ProjectedThickSegment s;
        s.a = ci.center;
        s.b = cj.center;
        s.depth_a = ci.depth;
        s.depth_b = cj.depth;
        s.half_width_a = bundle.layout.edge_radius * cam.focal / ci.depth;
        s.half_width_b = bundle.layout.edge_radius * cam.focal / cj.depth;
        s.edge_index = static_cast<int>(e);
        out.segments.push_back(s);
    }
    return out;
}

inline ProjectedDrawing project_viewpoint(const GraphBundle& bundle, Vec3 v,
                                          const CameraConfig& config) {
    return project(bundle, camera_from_viewpoint(v, bundle.layout, config));
}

} // namespace viewscore

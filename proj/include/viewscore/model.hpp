#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "viewscore/errors.hpp"
#include "viewscore/geometry.hpp"
#include "viewscore/graph.hpp"

namespace viewscore {

inline constexpr double kDefaultNodeRadiusFactor = 0.02;  // of bounding_radius
inline constexpr double kDefaultEdgeRadiusFactor = 0.006; // of bounding_radius

// A 3D drawing of a graph: one position per node plus the sphere/tube radii
// used for the overlap measures. center and bounding_radius are derived from
// the positions, never trusted from input.
struct Layout3D {
    std::vector<Vec3> positions;
    double node_radius = 0.0;
    double edge_radius = 0.0;
    Vec3 center;
    double bounding_radius = 0.0;
};

// Recomputes center (centroid) and bounding_radius. A fully coincident layout
// gets bounding_radius 1 so that radius defaults and camera placement stay
// usable; callers that need to reject it can test positions themselves.
inline void refresh_layout_bounds(Layout3D& layout) {
    Vec3 c{};
    if (!layout.positions.empty()) {
        for (const Vec3& p : layout.positions) c = c + p;
        c = c * (1.0 / static_cast<double>(layout.positions.size()));
    }
    double r = 0.0;
    for (const Vec3& p : layout.positions) r = std::max(r, distance(p, c));
    layout.center = c;
    layout.bounding_radius = r > 0.0 ? r : 1.0;
}

enum class LayoutClass { Semantic, Layered, Energy };
enum class SizeClass { S, M, L, XL };

inline const char* to_string(LayoutClass c) {
    switch (c) {
        case LayoutClass::Semantic: return "semantic";
        case LayoutClass::Layered: return "layered";
        case LayoutClass::Energy: return "energy";
    }
    return "?";
}

inline const char* to_string(SizeClass c) {
    switch (c) {
        case SizeClass::S: return "S";
        case SizeClass::M: return "M";
        case SizeClass::L: return "L";
        case SizeClass::XL: return "XL";
    }
    return "?";
}

inline std::optional<LayoutClass> layout_class_from_string(const std::string& s) {
    if (s == "semantic") return LayoutClass::Semantic;
    if (s == "layered") return LayoutClass::Layered;
    if (s == "energy") return LayoutClass::Energy;
    return std::nullopt;
}

inline std::optional<SizeClass> size_class_from_string(const std::string& s) {
    if (s == "S") return SizeClass::S;
    if (s == "M") return SizeClass::M;
    if (s == "L") return SizeClass::L;
    if (s == "XL") return SizeClass::XL;
    return std::nullopt;
}

inline int size_class_band(SizeClass c) {
    switch (c) {
        case SizeClass::S: return 20;
        case SizeClass::M: return 50;
        case SizeClass::L: return 100;
        case SizeClass::XL: return 200;
    }
    return 0;
}

struct GraphBundle {
    std::string id;
    LayoutClass layout_class = LayoutClass::Energy;
    SizeClass size_class = SizeClass::S;
    Graph graph;
    Layout3D layout;
};

struct Pose {
    Vec3 position;
    Quat rotation; // unit
};

enum class SelectionPolarity { Best, Worst };

inline const char* to_string(SelectionPolarity p) {
    return p == SelectionPolarity::Best ? "best" : "worst";
}

struct SelectionRecord {
    std::string participant_id;
    std::string graph_id;
    SelectionPolarity polarity = SelectionPolarity::Best;
    Pose graph_pose;
    Pose user_pose;
};

struct StudyDataset {
    std::vector<GraphBundle> bundles;
    std::vector<SelectionRecord> selections;

    const GraphBundle* find_bundle(const std::string& id) const {
        for (const GraphBundle& b : bundles)
            if (b.id == id) return &b;
        return nullptr;
    }
};

inline void validate_pose(const Pose& pose, const std::string& where,
                          double tol = 1e-9) {
    double n = norm(pose.rotation);
    if (std::abs(n - 1.0) > tol)
        throw_validation(where + ": rotation quaternion norm " + std::to_string(n) +
                         " deviates from 1 by more than " + std::to_string(tol));
}

// Validates a bundle's invariants. Appends non-fatal findings to `warnings`.
inline void validate_bundle(const GraphBundle& b, std::vector<std::string>* warnings) {
    const std::string where = "bundle '" + b.id + "'";
    if (b.id.empty()) throw_validation("bundle with empty id");
    if (b.id.find_first_of(",\n\r") != std::string::npos)
        throw_validation(where + ": id contains characters reserved by the CSV outputs");
    validate_graph(b.graph, where);
    if (b.layout.positions.size() != static_cast<std::size_t>(b.graph.node_count))
        throw_validation(where + ": " + std::to_string(b.layout.positions.size()) +
                         " positions for " + std::to_string(b.graph.node_count) + " nodes");
    if (!(b.layout.node_radius > 0.0))
        throw_validation(where + ": node_radius must be positive");
    if (!(b.layout.edge_radius > 0.0) || !(b.layout.edge_radius < b.layout.node_radius))
        throw_validation(where + ": edge_radius must satisfy 0 < edge_radius < node_radius");
    if (warnings) {
        double band = size_class_band(b.size_class);
        double n = static_cast<double>(b.graph.node_count);
        if (n < band * 0.75 || n > band * 1.25)
            warnings->push_back(where + ": node count " + std::to_string(b.graph.node_count) +
                                " outside +/-25% of size class " + to_string(b.size_class) +
                                " band " + std::to_string(size_class_band(b.size_class)));
    }
}

inline void validate_dataset(const StudyDataset& ds, std::vector<std::string>* warnings) {
    std::set<std::string> ids;
    for (const GraphBundle& b : ds.bundles) {
        validate_bundle(b, warnings);
        if (!ids.insert(b.id).second) throw_validation("duplicate bundle id '" + b.id + "'");
    }
    for (std::size_t k = 0; k < ds.selections.size(); ++k) {
        const SelectionRecord& s = ds.selections[k];
        const std::string where = "selection " + std::to_string(k) + " (participant '" +
                                  s.participant_id + "')";
        if (ids.find(s.graph_id) == ids.end())
            throw_validation(where + ": references unknown graph id '" + s.graph_id + "'");
        validate_pose(s.graph_pose, where + " graph_pose");
        validate_pose(s.user_pose, where + " user_pose");
    }
}

// View direction of a logged selection in graph-local coordinates: the unit
// vector from the user toward the graph center, unrotated by the graph pose.
inline Vec3 selection_to_viewpoint(const SelectionRecord& record, const GraphBundle& bundle) {
    if (record.graph_id != bundle.id)
        throw_domain("selection_to_viewpoint: selection references graph '" + record.graph_id +
                     "', bundle is '" + bundle.id + "'");
    Vec3 world = record.graph_pose.position - record.user_pose.position;
    Vec3 local = rotate(conjugate(record.graph_pose.rotation), world);
    double n = norm(local);
    if (n <= 1e-12)
        throw_domain("selection_to_viewpoint: user position coincides with graph position");
    return local * (1.0 / n);
}

} // namespace viewscore

#pragma once

#include <istream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "viewscore/errors.hpp"
#include "viewscore/model.hpp"

namespace viewscore {

struct ParseResult {
    StudyDataset dataset;
    std::vector<std::string> warnings; // unknown fields, size-class mismatches
};

namespace detail {

using json = nlohmann::json;

inline void warn_unknown_fields(const json& obj, const std::set<std::string>& known,
                                const std::string& path, std::vector<std::string>& warnings) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (known.find(it.key()) == known.end())
            warnings.push_back(path + ": ignoring unknown field '" + it.key() + "'");
}

inline double require_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw_parse(path + ": expected a number");
    return v.get<double>();
}

inline Vec3 parse_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) throw_parse(path + ": expected [x,y,z]");
    return {require_number(v[0], path), require_number(v[1], path), require_number(v[2], path)};
}

inline Pose parse_pose(const json& v, const std::string& path,
                       std::vector<std::string>& warnings) {
    if (!v.is_object()) throw_parse(path + ": expected an object");
    warn_unknown_fields(v, {"position", "rotation"}, path, warnings);
    if (!v.contains("position") || !v.contains("rotation"))
        throw_parse(path + ": needs position and rotation");
    Pose pose;
    pose.position = parse_vec3(v["position"], path + ".position");
    const json& r = v["rotation"];
    if (!r.is_array() || r.size() != 4) throw_parse(path + ".rotation: expected [x,y,z,w]");
    pose.rotation = {require_number(r[0], path), require_number(r[1], path),
                     require_number(r[2], path), require_number(r[3], path)};
    return pose;
}

} // namespace detail

// Canonical dataset document: top-level `bundles` and `selections`.
// Unknown fields anywhere are ignored with a warning; invariant violations
// throw Validation naming the record.
inline ParseResult parse_dataset(const std::string& text) {
    using detail::json;
    ParseResult result;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_parse(std::string("dataset: ") + e.what());
    }
    if (!doc.is_object()) throw_parse("dataset: top level must be an object");
    detail::warn_unknown_fields(doc, {"bundles", "selections"}, "dataset", result.warnings);

    if (doc.contains("bundles")) {
        const json& bundles = doc["bundles"];
        if (!bundles.is_array()) throw_parse("dataset.bundles: expected an array");
        for (std::size_t k = 0; k < bundles.size(); ++k) {
            const json& jb = bundles[k];
            const std::string path = "bundles[" + std::to_string(k) + "]";
            if (!jb.is_object()) throw_parse(path + ": expected an object");
            detail::warn_unknown_fields(
                jb, {"id", "layout_class", "size_class", "nodes", "edges", "node_radius",
                     "edge_radius"},
                path, result.warnings);
            for (const char* req : {"id", "layout_class", "size_class", "nodes", "edges"})
                if (!jb.contains(req)) throw_parse(path + ": missing field '" + req + "'");

            GraphBundle b;
            if (!jb["id"].is_string()) throw_parse(path + ".id: expected a string");
            b.id = jb["id"].get<std::string>();
            auto lc = layout_class_from_string(jb["layout_class"].get<std::string>());
            if (!lc) throw_parse(path + ".layout_class: expected semantic|layered|energy");
            b.layout_class = *lc;
            auto sc = size_class_from_string(jb["size_class"].get<std::string>());
            if (!sc) throw_parse(path + ".size_class: expected S|M|L|XL");
            b.size_class = *sc;

            const json& nodes = jb["nodes"];
            if (!nodes.is_array()) throw_parse(path + ".nodes: expected an array");
            for (std::size_t i = 0; i < nodes.size(); ++i)
                b.layout.positions.push_back(
                    detail::parse_vec3(nodes[i], path + ".nodes[" + std::to_string(i) + "]"));
            b.graph.node_count = static_cast<int>(nodes.size());

            const json& edges = jb["edges"];
            if (!edges.is_array()) throw_parse(path + ".edges: expected an array");
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const json& je = edges[i];
                if (!je.is_array() || je.size() != 2 || !je[0].is_number_integer() ||
                    !je[1].is_number_integer())
                    throw_parse(path + ".edges[" + std::to_string(i) + "]: expected [i,j]");
                int u = je[0].get<int>(), v = je[1].get<int>();
                b.graph.edges.emplace_back(std::min(u, v), std::max(u, v));
            }

            refresh_layout_bounds(b.layout);
            b.layout.node_radius = jb.contains("node_radius")
                                       ? detail::require_number(jb["node_radius"], path + ".node_radius")
                                       : kDefaultNodeRadiusFactor * b.layout.bounding_radius;
            b.layout.edge_radius = jb.contains("edge_radius")
                                       ? detail::require_number(jb["edge_radius"], path + ".edge_radius")
                                       : kDefaultEdgeRadiusFactor * b.layout.bounding_radius;
            result.dataset.bundles.push_back(std::move(b));
        }
    }

    if (doc.contains("selections")) {
        const json& selections = doc["selections"];
        if (!selections.is_array()) throw_parse("dataset.selections: expected an array");
        for (std::size_t k = 0; k < selections.size(); ++k) {
            const json& js = selections[k];
            const std::string path = "selections[" + std::to_string(k) + "]";
            if (!js.is_object()) throw_parse(path + ": expected an object");
            detail::warn_unknown_fields(
                js, {"participant", "graph", "polarity", "graph_pose", "user_pose"}, path,
                result.warnings);
            for (const char* req : {"participant", "graph", "polarity", "graph_pose", "user_pose"})
                if (!js.contains(req)) throw_parse(path + ": missing field '" + req + "'");

            SelectionRecord s;
            s.participant_id = js["participant"].get<std::string>();
            s.graph_id = js["graph"].get<std::string>();
            std::string pol = js["polarity"].get<std::string>();
            if (pol == "best")
                s.polarity = SelectionPolarity::Best;
            else if (pol == "worst")
                s.polarity = SelectionPolarity::Worst;
            else
                throw_parse(path + ".polarity: expected best|worst");
            s.graph_pose = detail::parse_pose(js["graph_pose"], path + ".graph_pose", result.warnings);
            s.user_pose = detail::parse_pose(js["user_pose"], path + ".user_pose", result.warnings);
            result.dataset.selections.push_back(std::move(s));
        }
    }

    validate_dataset(result.dataset, &result.warnings);
    return result;
}

inline ParseResult parse_dataset(std::istream& in) {
    return parse_dataset(std::string(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>()));
}

inline std::string serialize_dataset(const StudyDataset& ds) {
    using ojson = nlohmann::ordered_json;
    auto vec3_json = [](const Vec3& v) { return ojson::array({v.x, v.y, v.z}); };
    auto pose_json = [&](const Pose& p) {
        return ojson{
            {"position", vec3_json(p.position)},
            {"rotation", ojson::array({p.rotation.x, p.rotation.y, p.rotation.z, p.rotation.w})}};
    };
    ojson doc;
    doc["bundles"] = ojson::array();
    for (const GraphBundle& b : ds.bundles) {
        ojson jb;
        jb["id"] = b.id;
        jb["layout_class"] = to_string(b.layout_class);
        jb["size_class"] = to_string(b.size_class);
        jb["nodes"] = ojson::array();
        for (const Vec3& p : b.layout.positions) jb["nodes"].push_back(vec3_json(p));
        jb["edges"] = ojson::array();
        for (auto [i, j] : b.graph.edges) jb["edges"].push_back(ojson::array({i, j}));
        jb["node_radius"] = b.layout.node_radius;
        jb["edge_radius"] = b.layout.edge_radius;
        doc["bundles"].push_back(std::move(jb));
    }
    doc["selections"] = ojson::array();
    for (const SelectionRecord& s : ds.selections) {
        ojson js;
        js["participant"] = s.participant_id;
        js["graph"] = s.graph_id;
        js["polarity"] = to_string(s.polarity);
        js["graph_pose"] = pose_json(s.graph_pose);
        js["user_pose"] = pose_json(s.user_pose);
        doc["selections"].push_back(std::move(js));
    }
    return doc.dump(2) + "\n";
}

} // namespace viewscore

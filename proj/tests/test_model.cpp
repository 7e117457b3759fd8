#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <sstream>

#include "viewscore/dataset_json.hpp"
#include "viewscore/graph.hpp"
#include "viewscore/model.hpp"
#include "test_support.hpp"

using namespace viewscore;
using testsupport::Rng;

namespace {

// independent quaternion -> rotation matrix conversion for oracle checks
std::array<std::array<double, 3>, 3> quat_to_matrix(Quat q) {
    double x = q.x, y = q.y, z = q.z, w = q.w;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

Vec3 apply_transpose(const std::array<std::array<double, 3>, 3>& m, Vec3 v) {
    return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
            m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
            m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
}

std::string minimal_dataset_json(const std::string& extra_bundle_fields = "",
                                 const std::string& selections = "[]") {
    return R"({"bundles": [{"id": "g0", "layout_class": "energy", "size_class": "S",
      "nodes": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1],
                [2,0,0],[0,2,0],[0,0,2],[2,2,0],[2,0,2],[0,2,2],[2,2,2],[3,0,0],
                [0,3,0],[0,0,3],[3,3,0],[3,0,3]],
      "edges": [[0,1],[1,2],[2,3],[3,4],[4,5],[5,6],[6,7],[7,8],[8,9],[9,10],
                [10,11],[11,12],[12,13],[13,14],[14,15],[15,16],[16,17],[17,18],[18,19]])" +
           extra_bundle_fields + R"(}], "selections": )" + selections + "}";
}

} // namespace

TEST_CASE("edge_density matches the closed formula") {
    // can_24-sized graph: n=24, m=92 sits at the paper's upper density bound
    Graph g24;
    g24.node_count = 24;
    for (int i = 0; i < 92; ++i) g24.edges.emplace_back(0, 1); // density only reads counts
    CHECK(edge_density(g24) == Catch::Approx(92.0 * 2.0 / (24.0 * 23.0)).epsilon(1e-12));
    CHECK(edge_density(g24) == Catch::Approx(1.0 / 3.0).margin(1e-3));

    Graph g200;
    g200.node_count = 200;
    g200.edges.resize(150, {0, 1});
    CHECK(edge_density(g200) == Catch::Approx(0.0075377).margin(1e-6));

    Graph k2;
    k2.node_count = 2;
    k2.edges = {{0, 1}};
    CHECK(edge_density(k2) == 1.0);

    Graph tiny;
    tiny.node_count = 1;
    CHECK_THROWS_AS(edge_density(tiny), Error);
}

TEST_CASE("edge_density is monotone in the edge count") {
    Graph g;
    g.node_count = 30;
    double prev = -1.0;
    for (int m = 0; m <= 40; ++m) {
        g.edges.assign(static_cast<std::size_t>(m), {0, 1});
        double d = edge_density(g);
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("graph validation rejects self-loops, duplicates, bad indices") {
    CHECK_THROWS_AS(make_graph(3, {{0, 0}}), Error);
    CHECK_THROWS_AS(make_graph(3, {{0, 1}, {1, 0}}), Error);
    CHECK_THROWS_AS(make_graph(3, {{0, 3}}), Error);
    CHECK_NOTHROW(make_graph(3, {{0, 1}, {1, 2}, {0, 2}}));
}

TEST_CASE("dataset parsing accepts the canonical schema") {
    auto result = parse_dataset(minimal_dataset_json());
    REQUIRE(result.dataset.bundles.size() == 1);
    const GraphBundle& b = result.dataset.bundles[0];
    CHECK(b.id == "g0");
    CHECK(b.graph.node_count == 20);
    CHECK(b.graph.edge_count() == 19);
    CHECK(b.layout.node_radius == Catch::Approx(0.02 * b.layout.bounding_radius));
    CHECK(b.layout.edge_radius == Catch::Approx(0.006 * b.layout.bounding_radius));
    CHECK(b.layout.bounding_radius > 0.0);
}

TEST_CASE("dataset parsing flags unknown fields as warnings") {
    auto result = parse_dataset(minimal_dataset_json(R"(, "flavor": "grape")"));
    REQUIRE(result.dataset.bundles.size() == 1);
    bool saw = false;
    for (const auto& w : result.warnings)
        if (w.find("flavor") != std::string::npos) saw = true;
    CHECK(saw);
}

TEST_CASE("dataset parsing rejects a self-loop edge") {
    std::string bad = R"({"bundles": [{"id": "g", "layout_class": "energy", "size_class": "S",
        "nodes": [[0,0,0],[1,0,0]], "edges": [[0,0]]}], "selections": []})";
    CHECK_THROWS_MATCHES(parse_dataset(bad), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("self-loop")));
}

TEST_CASE("dataset parsing rejects a dangling selection") {
    std::string selections = R"([{"participant": "p1", "graph": "missing", "polarity": "best",
        "graph_pose": {"position": [0,0,0], "rotation": [0,0,0,1]},
        "user_pose": {"position": [0,0,-1], "rotation": [0,0,0,1]}}])";
    CHECK_THROWS_MATCHES(parse_dataset(minimal_dataset_json("", selections)), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("missing")));
}

TEST_CASE("dataset parsing rejects malformed JSON with a parse error") {
    try {
        parse_dataset("{\"bundles\": [");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
    }
}

TEST_CASE("size class bands outside +/-25% warn but do not fail") {
    std::string text = minimal_dataset_json();
    std::size_t pos = text.find("\"S\"");
    text.replace(pos, 3, "\"XL\""); // 20 nodes labeled XL
    auto result = parse_dataset(text);
    bool saw = false;
    for (const auto& w : result.warnings)
        if (w.find("size class") != std::string::npos) saw = true;
    CHECK(saw);
}

TEST_CASE("serialize/parse round-trips all semantic fields") {
    Rng rng(20250810);
    for (int trial = 0; trial < 10; ++trial) {
        StudyDataset ds;
        int bundles = 1 + static_cast<int>(testsupport::uniform(rng, 0.0, 3.0));
        for (int b = 0; b < bundles; ++b)
            ds.bundles.push_back(
                testsupport::random_bundle(rng, 5 + trial, 3, "g" + std::to_string(b)));
        for (int s = 0; s < 4; ++s) {
            SelectionRecord sel;
            sel.participant_id = "p" + std::to_string(s);
            sel.graph_id = ds.bundles[static_cast<std::size_t>(s % bundles)].id;
            sel.polarity = s % 2 == 0 ? SelectionPolarity::Best : SelectionPolarity::Worst;
            sel.graph_pose = {testsupport::random_unit_vec3(rng) * 2.0,
                              testsupport::random_unit_quat(rng)};
            sel.user_pose = {testsupport::random_unit_vec3(rng) * 5.0,
                             testsupport::random_unit_quat(rng)};
            ds.selections.push_back(sel);
        }

        auto round = parse_dataset(serialize_dataset(ds));
        REQUIRE(round.dataset.bundles.size() == ds.bundles.size());
        for (std::size_t b = 0; b < ds.bundles.size(); ++b) {
            const GraphBundle& lhs = ds.bundles[b];
            const GraphBundle& rhs = round.dataset.bundles[b];
            CHECK(lhs.id == rhs.id);
            CHECK(lhs.layout_class == rhs.layout_class);
            CHECK(lhs.size_class == rhs.size_class);
            REQUIRE(lhs.graph.edges == rhs.graph.edges);
            REQUIRE(lhs.layout.positions.size() == rhs.layout.positions.size());
            for (std::size_t i = 0; i < lhs.layout.positions.size(); ++i) {
                CHECK(lhs.layout.positions[i].x == rhs.layout.positions[i].x);
                CHECK(lhs.layout.positions[i].y == rhs.layout.positions[i].y);
                CHECK(lhs.layout.positions[i].z == rhs.layout.positions[i].z);
            }
            CHECK(lhs.layout.node_radius == rhs.layout.node_radius);
            CHECK(lhs.layout.edge_radius == rhs.layout.edge_radius);
        }
        REQUIRE(round.dataset.selections.size() == ds.selections.size());
        for (std::size_t s = 0; s < ds.selections.size(); ++s) {
            const SelectionRecord& lhs = ds.selections[s];
            const SelectionRecord& rhs = round.dataset.selections[s];
            CHECK(lhs.participant_id == rhs.participant_id);
            CHECK(lhs.graph_id == rhs.graph_id);
            CHECK(lhs.polarity == rhs.polarity);
            CHECK(lhs.graph_pose.position.x == rhs.graph_pose.position.x);
            CHECK(lhs.graph_pose.rotation.w == rhs.graph_pose.rotation.w);
            CHECK(lhs.user_pose.position.z == rhs.user_pose.position.z);
        }
    }
}

TEST_CASE("selection_to_viewpoint: identity transform") {
    GraphBundle bundle;
    bundle.id = "g";
    SelectionRecord sel;
    sel.graph_id = "g";
    sel.graph_pose = {{0, 0, 0}, {0, 0, 0, 1}};
    sel.user_pose = {{0, 0, -1}, {0, 0, 0, 1}};
    Vec3 v = selection_to_viewpoint(sel, bundle);
    CHECK(v.x == Catch::Approx(0.0).margin(1e-12));
    CHECK(v.y == Catch::Approx(0.0).margin(1e-12));
    CHECK(v.z == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("selection_to_viewpoint matches a quaternion-matrix oracle") {
    Rng rng(321);
    GraphBundle bundle;
    bundle.id = "g";
    for (int trial = 0; trial < 200; ++trial) {
        SelectionRecord sel;
        sel.graph_id = "g";
        sel.graph_pose = {testsupport::random_unit_vec3(rng) * 3.0,
                          testsupport::random_unit_quat(rng)};
        sel.user_pose = {testsupport::random_unit_vec3(rng) * 7.0,
                         testsupport::random_unit_quat(rng)};
        Vec3 v = selection_to_viewpoint(sel, bundle);
        CHECK(norm(v) == Catch::Approx(1.0).margin(1e-9));

        Vec3 world = sel.graph_pose.position - sel.user_pose.position;
        Vec3 expected = normalized(apply_transpose(quat_to_matrix(sel.graph_pose.rotation), world));
        CHECK(v.x == Catch::Approx(expected.x).margin(1e-9));
        CHECK(v.y == Catch::Approx(expected.y).margin(1e-9));
        CHECK(v.z == Catch::Approx(expected.z).margin(1e-9));
    }
}

TEST_CASE("selection_to_viewpoint: 90 degree rotation about +y") {
    GraphBundle bundle;
    bundle.id = "g";
    SelectionRecord sel;
    sel.graph_id = "g";
    sel.graph_pose = {{0, 0, 0}, axis_angle({0, 1, 0}, kPi / 2.0)};
    sel.user_pose = {{0, 0, -1}, {0, 0, 0, 1}};
    Vec3 v = selection_to_viewpoint(sel, bundle);
    Vec3 expected = apply_transpose(quat_to_matrix(sel.graph_pose.rotation), {0, 0, 1});
    CHECK(v.x == Catch::Approx(expected.x).margin(1e-9));
    CHECK(v.y == Catch::Approx(expected.y).margin(1e-9));
    CHECK(v.z == Catch::Approx(expected.z).margin(1e-9));
}

TEST_CASE("selection_to_viewpoint rejects coincident poses") {
    GraphBundle bundle;
    bundle.id = "g";
    SelectionRecord sel;
    sel.graph_id = "g";
    sel.graph_pose = {{1, 2, 3}, {0, 0, 0, 1}};
    sel.user_pose = {{1, 2, 3}, {0, 0, 0, 1}};
    CHECK_THROWS_AS(selection_to_viewpoint(sel, bundle), Error);
}

TEST_CASE("selection_to_viewpoint is invariant under simultaneous rigid transforms") {
    Rng rng(654);
    GraphBundle bundle;
    bundle.id = "g";
    for (int trial = 0; trial < 100; ++trial) {
        SelectionRecord sel;
        sel.graph_id = "g";
        sel.graph_pose = {testsupport::random_unit_vec3(rng) * 2.0,
                          testsupport::random_unit_quat(rng)};
        sel.user_pose = {testsupport::random_unit_vec3(rng) * 4.0,
                         testsupport::random_unit_quat(rng)};
        Vec3 base = selection_to_viewpoint(sel, bundle);

        Quat r = testsupport::random_unit_quat(rng);
        Vec3 t = testsupport::random_unit_vec3(rng) * 10.0;
        SelectionRecord moved = sel;
        moved.graph_pose.position = rotate(r, sel.graph_pose.position) + t;
        moved.graph_pose.rotation = r * sel.graph_pose.rotation;
        moved.user_pose.position = rotate(r, sel.user_pose.position) + t;
        moved.user_pose.rotation = r * sel.user_pose.rotation;
        Vec3 transformed = selection_to_viewpoint(moved, bundle);

        CHECK(transformed.x == Catch::Approx(base.x).margin(1e-9));
        CHECK(transformed.y == Catch::Approx(base.y).margin(1e-9));
        CHECK(transformed.z == Catch::Approx(base.z).margin(1e-9));
    }
}

#pragma once

#include <array>
#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "viewscore/camera.hpp"
#include "viewscore/errors.hpp"
#include "viewscore/graph.hpp"
#include "viewscore/iso.hpp"
#include "viewscore/measures.hpp"
#include "viewscore/measures2d.hpp"
#include "viewscore/model.hpp"
#include "viewscore/overlap.hpp"
#include "viewscore/projection.hpp"
#include "viewscore/viewpoints.hpp"

namespace viewscore {

struct EvalParams {
    int raster_resolution = 256;
    SymmetryParams symmetry;
};

struct RawVector {
    std::string graph_id;
    Vec3 viewpoint;
    std::array<double, kMeasureCount> values{};

    double at(MeasureId id) const { return values[static_cast<std::size_t>(id)]; }
};

// Per-bundle state shared by every viewpoint evaluation: graph distances for
// stress and the principal axes for ISO.
struct PreparedBundle {
    const GraphBundle* bundle = nullptr;
    ShortestPaths paths;
    PrincipalAxes axes;
};

inline PreparedBundle prepare_bundle(const GraphBundle& bundle) {
    PreparedBundle prep;
    prep.bundle = &bundle;
    prep.paths = bfs_all_pairs(bundle.graph);
    prep.axes = pca_axes(bundle.layout);
    return prep;
}

// Projects once, then evaluates all 21 registry measures.
inline RawVector evaluate_raw(const PreparedBundle& prep, Vec3 v, const CameraConfig& camera,
                              const EvalParams& params) {
    const GraphBundle& bundle = *prep.bundle;
    ProjectedDrawing drawing = project_viewpoint(bundle, v, camera);

    RawVector out;
    out.graph_id = bundle.id;
    out.viewpoint = v;
    auto set = [&](RawMeasure m) { out.values[static_cast<std::size_t>(m.id)] = m.value; };

    CrossingSet cs = crossings(drawing, bundle.graph);
    set(measure_cr(cs));
    set(measure_car(cs));
    set(measure_stress(drawing, prep.paths));
    auto [ar, asp] = measure_area_aspect(drawing);
    set(ar);
    set(asp);
    set(measure_concentration(drawing));
    set(measure_node_orthogonality(drawing));
    set(measure_gabriel(drawing, bundle.graph));
    set(measure_angular_resolution(drawing, bundle.graph));
    set(measure_edge_orthogonality(drawing));
    set(measure_edge_length_deviation(drawing));
    auto sym = detail::symmetry_scores(drawing, params.symmetry);
    set({MeasureId::ESR, sym[0]});
    set({MeasureId::ESO, sym[1]});
    set({MeasureId::EST, sym[2]});

    OverlapCensus census = overlap_census(drawing, bundle.graph, params.raster_resolution);
    set({MeasureId::NNO, static_cast<double>(census.nn_count)});
    set({MeasureId::ENO, static_cast<double>(census.en_count)});
    set({MeasureId::NEO, static_cast<double>(census.ne_count)});
    set({MeasureId::NNOA, census.nn_area});
    set({MeasureId::ENOA, census.en_area});
    set({MeasureId::NEOA, census.ne_area});

    set(iso_score(v, prep.axes));
    return out;
}

inline RawVector evaluate_raw(const GraphBundle& bundle, Vec3 v, const CameraConfig& camera,
                              const EvalParams& params) {
    return evaluate_raw(prepare_bundle(bundle), v, camera, params);
}

// Raw measure values of one graph over a fixed viewpoint sample.
struct Landscape {
    std::string graph_id;
    std::vector<Vec3> viewpoints;
    std::vector<std::array<double, kMeasureCount>> raw; // one row per viewpoint
};

inline int resolve_thread_count(int hint) {
    if (hint > 0) return hint;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Data-parallel over viewpoints; results land at their sample index, so the
// output is identical for any thread count.
inline Landscape sample_landscape(const GraphBundle& bundle, int count,
                                  const CameraConfig& camera, const EvalParams& params,
                                  int threads_hint = 0) {
    if (count < 2) throw_domain("sample_landscape: count must be >= 2");
    Landscape scape;
    scape.graph_id = bundle.id;
    scape.viewpoints = fibonacci_viewpoints(count);
    scape.raw.resize(scape.viewpoints.size());

    PreparedBundle prep = prepare_bundle(bundle);
    int threads = std::min(resolve_thread_count(threads_hint), count);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count || failed.load(std::memory_order_relaxed)) break;
            try {
                scape.raw[static_cast<std::size_t>(i)] =
                    evaluate_raw(prep, scape.viewpoints[static_cast<std::size_t>(i)], camera,
                                 params)
                        .values;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error_message = e.what();
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw_domain("sample_landscape('" + bundle.id + "'): " + error_message);
    return scape;
}

struct MeasureRange {
    double min_value = 0.0;
    double max_value = 0.0;
    long samples = 0;
};

// Per-graph min/max of every measure over the sampled landscape. Row order is
// graph insertion order, then registry measure order.
struct RangeTable {
    std::vector<std::string> graph_order;
    std::unordered_map<std::string, std::array<MeasureRange, kMeasureCount>> by_graph;

    void add(const std::string& graph_id, const std::array<MeasureRange, kMeasureCount>& r) {
        if (by_graph.emplace(graph_id, r).second) graph_order.push_back(graph_id);
    }

    const std::array<MeasureRange, kMeasureCount>* find(const std::string& graph_id) const {
        auto it = by_graph.find(graph_id);
        return it == by_graph.end() ? nullptr : &it->second;
    }
};

inline std::array<MeasureRange, kMeasureCount> ranges_from_landscape(const Landscape& scape) {
    std::array<MeasureRange, kMeasureCount> ranges;
    for (int m = 0; m < kMeasureCount; ++m) {
        MeasureRange r;
        r.samples = static_cast<long>(scape.raw.size());
        for (std::size_t i = 0; i < scape.raw.size(); ++i) {
            double v = scape.raw[i][static_cast<std::size_t>(m)];
            if (i == 0) {
                r.min_value = r.max_value = v;
            } else {
                r.min_value = std::min(r.min_value, v);
                r.max_value = std::max(r.max_value, v);
            }
        }
        ranges[static_cast<std::size_t>(m)] = r;
    }
    return ranges;
}

inline RangeTable sample_ranges(const GraphBundle& bundle, int count, const CameraConfig& camera,
                                const EvalParams& params, int threads_hint = 0) {
    RangeTable table;
    table.add(bundle.id,
              ranges_from_landscape(sample_landscape(bundle, count, camera, params, threads_hint)));
    return table;
}

struct ScoreVector {
    std::string graph_id;
    Vec3 viewpoint;
    std::string range_key; // provenance of the range table used
    std::array<double, kMeasureCount> scores{};

    double at(MeasureId id) const { return scores[static_cast<std::size_t>(id)]; }
};

inline constexpr double kDegenerateRangeSpan = 1e-12;

// Range-normalizes raw values into [0,1] quality scores: clamped linear map
// over the sampled range, flipped for lower-better measures. A degenerate
// range means every sampled viewpoint attains the same value, which is the
// best achievable one, hence score 1.
inline ScoreVector normalize(const RawVector& raw, const RangeTable& ranges,
                             const std::string& range_key = "") {
    const auto* r = ranges.find(raw.graph_id);
    if (r == nullptr)
        throw_domain("normalize: no range rows for graph '" + raw.graph_id + "'");
    ScoreVector out;
    out.graph_id = raw.graph_id;
    out.viewpoint = raw.viewpoint;
    out.range_key = range_key;
    for (int m = 0; m < kMeasureCount; ++m) {
        const MeasureRange& range = (*r)[static_cast<std::size_t>(m)];
        double span = range.max_value - range.min_value;
        double score;
        if (span < kDegenerateRangeSpan) {
            score = 1.0;
        } else {
            double t = std::clamp((raw.values[static_cast<std::size_t>(m)] - range.min_value) /
                                      span,
                                  0.0, 1.0);
            score = measure_polarity(static_cast<MeasureId>(m)) == MeasurePolarity::HigherBetter
                        ? t
                        : 1.0 - t;
        }
        out.scores[static_cast<std::size_t>(m)] = score;
    }
    return out;
}

} // namespace viewscore

#pragma once

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "viewscore/analysis.hpp"
#include "viewscore/csvio.hpp"
#include "viewscore/dataset_json.hpp"
#include "viewscore/errors.hpp"
#include "viewscore/fitting.hpp"
#include "viewscore/pipeline.hpp"
#include "viewscore/runconfig.hpp"
#include "viewscore/sphere_svg.hpp"

namespace viewscore {
namespace cli {

namespace detail {

inline std::string provenance_comment(const RunConfig& config) {
    return "config=" + config_hash(config) + " range_key=" + range_key_hash(config) +
           " registry=" + kRegistryVersion;
}

inline StudyDataset load_dataset(const std::string& path, std::ostream& log) {
    ParseResult parsed = parse_dataset(read_text_file(path));
    for (const std::string& w : parsed.warnings) log << "warning: " << w << "\n";
    return std::move(parsed.dataset);
}

inline void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw_io("cannot create output directory '" + dir + "': " + ec.message());
}

inline void write_config_echo(const RunConfig& config, const std::string& dir, std::ostream& log) {
    nlohmann::ordered_json echo = config_echo_json(config);
    echo["config_hash"] = config_hash(config);
    std::string text = echo.dump(2) + "\n";
    write_text_file(dir + "/config_echo.json", text);
    log << "config: " << echo.dump() << "\n";
}

inline std::vector<std::string> measure_header(const std::string& prefix = "") {
    std::vector<std::string> names;
    for (int m = 0; m < kMeasureCount; ++m)
        names.push_back(prefix + kMeasureNames[static_cast<std::size_t>(m)]);
    return names;
}

// ranges.csv: graph_id, measure_id, min, max, samples
inline CsvDocument ranges_to_csv(const RangeTable& table, const RunConfig& config) {
    CsvDocument doc;
    doc.comments.push_back(provenance_comment(config));
    doc.header = {"graph_id", "measure_id", "min", "max", "samples"};
    for (const std::string& graph : table.graph_order) {
        const auto* ranges = table.find(graph);
        for (int m = 0; m < kMeasureCount; ++m) {
            const MeasureRange& r = (*ranges)[static_cast<std::size_t>(m)];
            doc.rows.push_back({graph, kMeasureNames[static_cast<std::size_t>(m)],
                                format_double(r.min_value), format_double(r.max_value),
                                std::to_string(r.samples)});
        }
    }
    return doc;
}

inline RangeTable ranges_from_csv(const CsvDocument& doc, const std::string& path) {
    if (doc.header != std::vector<std::string>{"graph_id", "measure_id", "min", "max", "samples"})
        throw_parse(path + ": unexpected ranges header");
    RangeTable table;
    std::map<std::string, std::array<MeasureRange, kMeasureCount>> partial;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
        const auto& row = doc.rows[i];
        if (row.size() != 5) throw_parse(path + ": row " + std::to_string(i) + " malformed");
        auto id = measure_from_string(row[1]);
        if (!id) throw_parse(path + ": unknown measure '" + row[1] + "'");
        if (partial.find(row[0]) == partial.end()) order.push_back(row[0]);
        MeasureRange& r = partial[row[0]][static_cast<std::size_t>(*id)];
        r.min_value = parse_double(row[2], path);
        r.max_value = parse_double(row[3], path);
        r.samples = parse_long(row[4], path);
    }
    for (const std::string& graph : order) table.add(graph, partial[graph]);
    return table;
}

inline std::string range_key_of_csv(const CsvDocument& doc) {
    for (const std::string& c : doc.comments) {
        std::size_t pos = c.find("range_key=");
        if (pos == std::string::npos) continue;
        std::size_t end = c.find(' ', pos);
        return c.substr(pos + 10, end == std::string::npos ? std::string::npos : end - pos - 10);
    }
    return "";
}

struct ScoreFileRow {
    LabeledSample sample;
    SelectionPolarity polarity;
    Vec3 viewpoint;
};

inline CsvDocument scores_header_csv(const RunConfig& config) {
    CsvDocument doc;
    doc.comments.push_back(provenance_comment(config));
    doc.header = {"participant", "graph", "layout_class", "size_class", "polarity",
                  "vx",          "vy",    "vz"};
    for (const std::string& name : measure_header()) doc.header.push_back(name);
    return doc;
}

inline std::vector<ScoreFileRow> scores_from_csv(const CsvDocument& doc, const std::string& path) {
    std::vector<ScoreFileRow> rows;
    if (doc.header.size() != 8 + kMeasureCount)
        throw_parse(path + ": unexpected scores header width");
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
        const auto& row = doc.rows[i];
        const std::string where = path + ": row " + std::to_string(i);
        if (row.size() != doc.header.size()) throw_parse(where + ": wrong field count");
        ScoreFileRow out;
        out.sample.participant_id = row[0];
        out.sample.graph_id = row[1];
        auto lc = layout_class_from_string(row[2]);
        auto sc = size_class_from_string(row[3]);
        if (!lc || !sc) throw_parse(where + ": bad layout/size class");
        out.sample.layout_class = *lc;
        out.sample.size_class = *sc;
        if (row[4] == "best")
            out.polarity = SelectionPolarity::Best;
        else if (row[4] == "worst")
            out.polarity = SelectionPolarity::Worst;
        else
            throw_parse(where + ": bad polarity '" + row[4] + "'");
        out.sample.label = out.polarity == SelectionPolarity::Best ? 1 : 0;
        out.viewpoint = {parse_double(row[5], where), parse_double(row[6], where),
                         parse_double(row[7], where)};
        for (int m = 0; m < kMeasureCount; ++m)
            out.sample.scores[static_cast<std::size_t>(m)] =
                parse_double(row[8 + static_cast<std::size_t>(m)], where);
        rows.push_back(std::move(out));
    }
    return rows;
}

inline nlohmann::ordered_json weights_to_json(const WeightVector& w, const RunConfig& config) {
    nlohmann::ordered_json j;
    j["normalization"] = to_string(w.normalization);
    nlohmann::ordered_json jw;
    for (int m = 0; m < kMeasureCount; ++m)
        jw[kMeasureNames[static_cast<std::size_t>(m)]] = w.weights[static_cast<std::size_t>(m)];
    j["weights"] = jw;
    nlohmann::ordered_json active = nlohmann::ordered_json::array();
    for (MeasureId id : w.active_set) active.push_back(measure_name(id));
    j["active_set"] = active;
    j["config_hash"] = config_hash(config);
    j["registry"] = kRegistryVersion;
    return j;
}

inline WeightVector weights_from_json(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw_parse("weights '" + path + "': " + e.what());
    }
    WeightVector w;
    std::string normalization = doc.value("normalization", "unit_sum");
    if (normalization == "unit_sum")
        w.normalization = WeightNormalization::UnitSum;
    else if (normalization == "unit_euclidean")
        w.normalization = WeightNormalization::UnitEuclidean;
    else
        throw_parse("weights '" + path + "': unknown normalization '" + normalization + "'");
    if (!doc.contains("weights") || !doc["weights"].is_object())
        throw_parse("weights '" + path + "': missing weights object");
    for (auto it = doc["weights"].begin(); it != doc["weights"].end(); ++it) {
        auto id = measure_from_string(it.key());
        if (!id) throw_parse("weights '" + path + "': unknown measure '" + it.key() + "'");
        double v = it.value().get<double>();
        if (v < 0.0) throw_validation("weights '" + path + "': negative weight for " + it.key());
        w.weights[static_cast<std::size_t>(*id)] = v;
    }
    for (int m = 0; m < kMeasureCount; ++m)
        if (w.weights[static_cast<std::size_t>(m)] > 0.0)
            w.active_set.push_back(static_cast<MeasureId>(m));
    return w;
}

inline std::vector<std::string> fit_report_header() {
    std::vector<std::string> h = {"method",     "k",          "filter",    "n_best",
                                  "n_worst",    "accuracy",   "mean_separation",
                                  "converged",  "iterations", "degenerate_uniform",
                                  "intercept"};
    for (const std::string& name : measure_header("w_")) h.push_back(name);
    for (const std::string& name : measure_header("coef_")) h.push_back(name);
    return h;
}

inline std::vector<std::string> fit_report_row(const FitReport& r, FitMethod method, int k,
                                               const std::string& filter) {
    std::vector<std::string> row = {to_string(method),
                                    std::to_string(k),
                                    filter.empty() ? "all" : filter,
                                    std::to_string(r.n_best),
                                    std::to_string(r.n_worst),
                                    format_double(r.training_accuracy),
                                    format_double(r.mean_separation),
                                    r.converged ? "1" : "0",
                                    std::to_string(r.iterations),
                                    r.degenerate_uniform ? "1" : "0",
                                    format_double(r.has_intercept ? r.intercept : 0.0)};
    for (int m = 0; m < kMeasureCount; ++m)
        row.push_back(format_double(r.weights.weights[static_cast<std::size_t>(m)]));
    for (int m = 0; m < kMeasureCount; ++m)
        row.push_back(format_double(r.raw_coefficients[static_cast<std::size_t>(m)]));
    return row;
}

struct StratumFilter {
    std::optional<LayoutClass> layout;
    std::optional<SizeClass> size;
    std::string description; // "all" or the flag text

    bool matches(const LabeledSample& s) const {
        if (layout && s.layout_class != *layout) return false;
        if (size && s.size_class != *size) return false;
        return true;
    }
};

inline StratumFilter parse_filter(const std::string& text) {
    StratumFilter f;
    f.description = text.empty() ? "all" : text;
    if (text.empty()) return f;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) throw_usage("--filter expects layout=<c> or size=<c>");
    std::string key = text.substr(0, eq), value = text.substr(eq + 1);
    if (key == "layout") {
        auto lc = layout_class_from_string(value);
        if (!lc) throw_usage("--filter layout: expected semantic|layered|energy");
        f.layout = *lc;
    } else if (key == "size") {
        auto sc = size_class_from_string(value);
        if (!sc) throw_usage("--filter size: expected S|M|L|XL");
        f.size = *sc;
    } else {
        throw_usage("--filter expects layout=<c> or size=<c>");
    }
    return f;
}

inline std::vector<LabeledSample> apply_filter(const std::vector<ScoreFileRow>& rows,
                                               const StratumFilter& filter) {
    std::vector<LabeledSample> samples;
    for (const ScoreFileRow& r : rows)
        if (filter.matches(r.sample)) samples.push_back(r.sample);
    return samples;
}

// --- subcommand bodies ---

inline void run_sample(const RunConfig& config, const std::string& dataset_path,
                       bool dump_landscapes, std::ostream& log) {
    StudyDataset dataset = load_dataset(dataset_path, log);
    ensure_out_dir(config.out_dir);
    write_config_echo(config, config.out_dir, log);

    RangeTable table;
    for (const GraphBundle& bundle : dataset.bundles) {
        Landscape scape = sample_landscape(bundle, config.sample_count, config.camera,
                                           config.eval, config.threads);
        table.add(bundle.id, ranges_from_landscape(scape));
        log << "sampled " << bundle.id << ": " << scape.raw.size() << " viewpoints\n";
        if (dump_landscapes) {
            CsvDocument doc;
            doc.comments.push_back(provenance_comment(config));
            doc.header = {"index", "vx", "vy", "vz"};
            for (const std::string& name : measure_header()) doc.header.push_back(name);
            for (std::size_t i = 0; i < scape.raw.size(); ++i) {
                std::vector<std::string> row = {std::to_string(i),
                                                format_double(scape.viewpoints[i].x),
                                                format_double(scape.viewpoints[i].y),
                                                format_double(scape.viewpoints[i].z)};
                for (int m = 0; m < kMeasureCount; ++m)
                    row.push_back(format_double(scape.raw[i][static_cast<std::size_t>(m)]));
                doc.rows.push_back(std::move(row));
            }
            write_text_file(config.out_dir + "/landscape_" + bundle.id + ".csv",
                            render_csv(doc));
        }
    }
    write_text_file(config.out_dir + "/ranges.csv", render_csv(ranges_to_csv(table, config)));
    log << "wrote " << config.out_dir << "/ranges.csv\n";
}

inline void run_score(const RunConfig& config, const std::string& dataset_path,
                      const std::string& ranges_dir, bool force, std::ostream& log) {
    StudyDataset dataset = load_dataset(dataset_path, log);
    std::string ranges_path = ranges_dir + "/ranges.csv";
    CsvDocument ranges_doc = read_csv_file(ranges_path);
    RangeTable table = ranges_from_csv(ranges_doc, ranges_path);
    std::string stored_key = range_key_of_csv(ranges_doc);
    std::string current_key = range_key_hash(config);
    if (!stored_key.empty() && stored_key != current_key && !force)
        throw_validation("score: ranges were sampled under range_key " + stored_key +
                         " but the current config has " + current_key +
                         " (use --force to override)");

    ensure_out_dir(config.out_dir);
    write_config_echo(config, config.out_dir, log);

    CsvDocument out = scores_header_csv(config);
    std::map<std::string, PreparedBundle> prepared;
    for (const SelectionRecord& sel : dataset.selections) {
        const GraphBundle* bundle = dataset.find_bundle(sel.graph_id);
        auto it = prepared.find(sel.graph_id);
        if (it == prepared.end()) it = prepared.emplace(sel.graph_id, prepare_bundle(*bundle)).first;
        Vec3 v = selection_to_viewpoint(sel, *bundle);
        RawVector raw = evaluate_raw(it->second, v, config.camera, config.eval);
        ScoreVector score = normalize(raw, table, stored_key);
        std::vector<std::string> row = {sel.participant_id,
                                        sel.graph_id,
                                        to_string(bundle->layout_class),
                                        to_string(bundle->size_class),
                                        to_string(sel.polarity),
                                        format_double(v.x),
                                        format_double(v.y),
                                        format_double(v.z)};
        for (int m = 0; m < kMeasureCount; ++m)
            row.push_back(format_double(score.scores[static_cast<std::size_t>(m)]));
        out.rows.push_back(std::move(row));
    }
    write_text_file(config.out_dir + "/scores.csv", render_csv(out));
    log << "wrote " << config.out_dir << "/scores.csv (" << out.rows.size() << " selections)\n";
}

inline void run_fit(const RunConfig& config, const std::string& scores_dir,
                    const std::string& method_text, int k, const std::string& filter_text,
                    double l2, bool exhaustive, std::ostream& log) {
    FitMethod method;
    if (method_text == "lr")
        method = FitMethod::Logistic;
    else if (method_text == "sqp")
        method = FitMethod::Separation;
    else
        throw_usage("fit: --method must be lr or sqp");

    std::string scores_path = scores_dir + "/scores.csv";
    auto rows = scores_from_csv(read_csv_file(scores_path), scores_path);
    StratumFilter filter = parse_filter(filter_text);
    std::vector<LabeledSample> samples = apply_filter(rows, filter);
    if (samples.empty()) throw_domain("fit: no samples left after filter");

    FitReport report = exhaustive ? select_subset_exhaustive(samples, k, method, l2)
                                  : select_subset(samples, k, method, l2);
    if (!report.converged) log << "warning: fit did not reach the gradient tolerance\n";

    ensure_out_dir(config.out_dir);
    write_config_echo(config, config.out_dir, log);
    std::string tag = method_text + "_k" + std::to_string(k);
    if (!filter_text.empty()) {
        std::string safe = filter_text;
        for (char& c : safe)
            if (c == '=') c = '-';
        tag += "_" + safe;
    }

    CsvDocument doc;
    doc.comments.push_back(provenance_comment(config));
    doc.header = fit_report_header();
    doc.rows.push_back(fit_report_row(report, method, k, filter.description));
    write_text_file(config.out_dir + "/fit_" + tag + ".csv", render_csv(doc));
    write_text_file(config.out_dir + "/weights_" + tag + ".json",
                    weights_to_json(report.weights, config).dump(2) + "\n");
    log << "fit " << tag << ": accuracy=" << format_double(report.training_accuracy)
        << " separation=" << format_double(report.mean_separation) << "\n";
}

inline void run_analyze(const RunConfig& config, const std::string& scores_dir, int combine_k,
                        std::ostream& log) {
    std::string scores_path = scores_dir + "/scores.csv";
    auto rows = scores_from_csv(read_csv_file(scores_path), scores_path);
    std::vector<LabeledSample> samples;
    for (const ScoreFileRow& r : rows) samples.push_back(r.sample);
    if (samples.empty()) throw_domain("analyze: no samples");

    ensure_out_dir(config.out_dir);
    write_config_echo(config, config.out_dir, log);
    const std::string prov = provenance_comment(config);

    // PCA
    PcaResult pca = pca_analysis(samples);
    {
        CsvDocument doc;
        doc.comments.push_back(prov);
        doc.header = {"component", "explained_variance_fraction"};
        for (const std::string& name : measure_header("loading_")) doc.header.push_back(name);
        for (int k = 0; k < kMeasureCount; ++k) {
            std::vector<std::string> row = {std::to_string(k + 1),
                                            format_double(pca.explained_variance[static_cast<std::size_t>(k)])};
            for (int m = 0; m < kMeasureCount; ++m)
                row.push_back(format_double(
                    pca.components[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]));
            doc.rows.push_back(std::move(row));
        }
        write_text_file(config.out_dir + "/pca_components.csv", render_csv(doc));
    }
    {
        CsvDocument doc;
        doc.comments.push_back(prov);
        doc.header = {"participant", "graph", "polarity", "pc1", "pc2", "pc3"};
        for (std::size_t i = 0; i < samples.size(); ++i) {
            doc.rows.push_back({samples[i].participant_id, samples[i].graph_id,
                                samples[i].label == 1 ? "best" : "worst",
                                format_double(pca.projections[i][0]),
                                format_double(pca.projections[i][1]),
                                format_double(pca.projections[i][2])});
        }
        write_text_file(config.out_dir + "/pca_projections.csv", render_csv(doc));
    }

    // correlations
    {
        CorrelationMatrix corr = correlation_matrix(samples);
        CsvDocument doc;
        doc.comments.push_back(prov);
        doc.header = {"measure", "constant"};
        for (const std::string& name : measure_header()) doc.header.push_back(name);
        for (int a = 0; a < kMeasureCount; ++a) {
            std::vector<std::string> row = {kMeasureNames[static_cast<std::size_t>(a)],
                                            corr.constant[static_cast<std::size_t>(a)] ? "1" : "0"};
            for (int b = 0; b < kMeasureCount; ++b)
                row.push_back(format_double(
                    corr.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]));
            doc.rows.push_back(std::move(row));
        }
        write_text_file(config.out_dir + "/correlation.csv", render_csv(doc));
    }

    // importance table over scopes x methods x subset sizes
    struct Scope {
        std::string name;
        StratumFilter filter;
    };
    std::vector<Scope> scopes;
    scopes.push_back({"All", {}});
    for (LayoutClass lc : {LayoutClass::Semantic, LayoutClass::Layered, LayoutClass::Energy}) {
        StratumFilter f;
        f.layout = lc;
        scopes.push_back({std::string("layout=") + to_string(lc), f});
    }
    for (SizeClass sc : {SizeClass::S, SizeClass::M, SizeClass::L, SizeClass::XL}) {
        StratumFilter f;
        f.size = sc;
        scopes.push_back({std::string("size=") + to_string(sc), f});
    }

    FitReport combined_lr_report, combined_sqp_report;
    bool have_combined = false;
    {
        CsvDocument doc;
        doc.comments.push_back(prov);
        doc.header = fit_report_header();
        std::vector<ScoreFileRow> wrapped;
        for (const LabeledSample& s : samples) wrapped.push_back({s, s.label == 1 ? SelectionPolarity::Best : SelectionPolarity::Worst, {}});
        for (const Scope& scope : scopes) {
            std::vector<LabeledSample> subset = apply_filter(wrapped, scope.filter);
            int n_best = 0, n_worst = 0;
            for (const LabeledSample& s : subset) (s.label == 1 ? n_best : n_worst)++;
            if (n_best == 0 || n_worst == 0 || subset.size() < 4) {
                log << "warning: scope " << scope.name
                    << " has too few samples for a fit; skipped\n";
                continue;
            }
            for (FitMethod method : {FitMethod::Logistic, FitMethod::Separation}) {
                for (int k : config.subset_sizes) {
                    FitReport r = select_subset(subset, k, method);
                    doc.rows.push_back(fit_report_row(r, method, k, scope.name));
                    if (scope.name == "All" && k == combine_k) {
                        (method == FitMethod::Logistic ? combined_lr_report : combined_sqp_report) = r;
                        have_combined = true;
                    }
                }
            }
        }
        write_text_file(config.out_dir + "/importance.csv", render_csv(doc));
    }

    // aggregate tables with combined columns
    if (!have_combined) {
        combined_lr_report = select_subset(samples, combine_k, FitMethod::Logistic);
        combined_sqp_report = select_subset(samples, combine_k, FitMethod::Separation);
    }
    auto write_aggregate = [&](const std::string& file, const std::vector<StratifyBy>& kinds) {
        CsvDocument doc;
        doc.comments.push_back(prov);
        doc.header = {"stratum", "polarity", "n"};
        for (const std::string& name : measure_header()) doc.header.push_back(name);
        doc.header.push_back("C-LR");
        doc.header.push_back("C-SQP");
        for (StratifyBy kind : kinds) {
            AggregateTable agg = aggregate(samples, kind, combined_lr_report.weights,
                                           combined_sqp_report.weights);
            for (const std::string& w : agg.warnings) log << "warning: " << w << "\n";
            for (const AggregateRow& row : agg.rows) {
                std::vector<std::string> out = {row.stratum, to_string(row.polarity),
                                                std::to_string(row.count)};
                for (int m = 0; m < kMeasureCount; ++m)
                    out.push_back(format_double(row.means[static_cast<std::size_t>(m)]));
                out.push_back(format_double(row.combined_lr));
                out.push_back(format_double(row.combined_sqp));
                doc.rows.push_back(std::move(out));
            }
        }
        write_text_file(config.out_dir + "/" + file, render_csv(doc));
    };
    write_aggregate("aggregate_summary.csv",
                    {StratifyBy::All, StratifyBy::LayoutClass, StratifyBy::SizeClass});
    write_aggregate("aggregate_by_graph.csv", {StratifyBy::Graph});
    log << "analyze: wrote pca, correlation, importance, and aggregate tables\n";
}

inline void run_optimize(const RunConfig& config, const std::string& dataset_path,
                         const std::string& weights_path, const std::string& graph_id, int top_k,
                         std::ostream& log) {
    if (top_k < 1) throw_usage("optimize: --top must be >= 1");
    StudyDataset dataset = load_dataset(dataset_path, log);
    const GraphBundle* bundle = dataset.find_bundle(graph_id);
    if (bundle == nullptr) throw_domain("optimize: unknown graph '" + graph_id + "'");
    WeightVector weights = weights_from_json(weights_path);

    Landscape scape = sample_landscape(*bundle, config.sample_count, config.camera, config.eval,
                                       config.threads);
    RangeTable table;
    table.add(bundle->id, ranges_from_landscape(scape));

    std::vector<std::pair<double, std::size_t>> ranked; // (-score, index) for stable order
    ranked.reserve(scape.raw.size());
    for (std::size_t i = 0; i < scape.raw.size(); ++i) {
        RawVector raw{bundle->id, scape.viewpoints[i], scape.raw[i]};
        ScoreVector score = normalize(raw, table, range_key_hash(config));
        ranked.emplace_back(-combined_score(weights, score.scores), i);
    }
    std::sort(ranked.begin(), ranked.end());

    ensure_out_dir(config.out_dir);
    write_config_echo(config, config.out_dir, log);
    CsvDocument doc;
    doc.comments.push_back(provenance_comment(config));
    doc.header = {"rank", "index", "vx", "vy", "vz", "combined_score"};
    int rows = std::min<int>(top_k, static_cast<int>(ranked.size()));
    for (int r = 0; r < rows; ++r) {
        auto [neg_score, i] = ranked[static_cast<std::size_t>(r)];
        doc.rows.push_back({std::to_string(r + 1), std::to_string(i),
                            format_double(scape.viewpoints[i].x),
                            format_double(scape.viewpoints[i].y),
                            format_double(scape.viewpoints[i].z), format_double(-neg_score)});
    }
    std::string path = config.out_dir + "/optimize_" + graph_id + ".csv";
    write_text_file(path, render_csv(doc));
    log << "wrote " << path << "\n";
}

inline void run_export_sphere(const RunConfig& config, const std::string& dataset_path,
                              const std::string& graph_id, const std::string& measure_text,
                              std::ostream& log) {
    auto measure = measure_from_string(measure_text);
    if (!measure) throw_usage("export-sphere: unknown measure '" + measure_text + "'");
    StudyDataset dataset = load_dataset(dataset_path, log);
    const GraphBundle* bundle = dataset.find_bundle(graph_id);
    if (bundle == nullptr) throw_domain("export-sphere: unknown graph '" + graph_id + "'");

    Landscape scape = sample_landscape(*bundle, config.sample_count, config.camera, config.eval,
                                       config.threads);
    RangeTable table;
    table.add(bundle->id, ranges_from_landscape(scape));

    ensure_out_dir(config.out_dir);
    write_config_echo(config, config.out_dir, log);

    CsvDocument doc;
    doc.comments.push_back(provenance_comment(config));
    doc.header = {"index", "vx", "vy", "vz", "raw", "score"};
    std::vector<double> scores(scape.raw.size());
    for (std::size_t i = 0; i < scape.raw.size(); ++i) {
        RawVector raw{bundle->id, scape.viewpoints[i], scape.raw[i]};
        ScoreVector score = normalize(raw, table, range_key_hash(config));
        scores[i] = score.at(*measure);
        doc.rows.push_back({std::to_string(i), format_double(scape.viewpoints[i].x),
                            format_double(scape.viewpoints[i].y),
                            format_double(scape.viewpoints[i].z),
                            format_double(raw.at(*measure)), format_double(scores[i])});
    }
    std::string base = config.out_dir + "/sphere_" + graph_id + "_" + measure_text;
    write_text_file(base + ".csv", render_csv(doc));

    std::vector<SphereMarker> markers;
    for (const SelectionRecord& sel : dataset.selections)
        if (sel.graph_id == graph_id)
            markers.push_back({selection_to_viewpoint(sel, *bundle), sel.polarity});
    std::string svg = render_sphere_heatmap(scape.viewpoints, scores, markers,
                                            graph_id + " " + measure_text,
                                            provenance_comment(config));
    write_text_file(base + ".svg", svg);
    log << "wrote " << base << ".csv and .svg\n";
}

} // namespace detail

// Entry point shared by the binary and the test suites. Returns the process
// exit code: 0 success, 1 data error, 2 usage error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    CLI::App app{"viewscore: viewpoint evaluation for 3D graph drawings"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    RunConfig flag_defaults; // for detecting explicit flags we use CLI11 counts
    std::string dataset_path, ranges_dir, scores_dir, weights_path, graph_id;
    std::string method_text = "lr", filter_text, measure_text;
    int k = kMeasureCount, top_k = 10, combine_k = 5;
    double l2 = kDefaultLogisticL2;
    bool dump_landscapes = false, force = false, exhaustive = false;
    std::string out_dir_flag;
    int samples_flag = 0, resolution_flag = 0, threads_flag = -1;
    double fov_flag = 0.0, aspect_flag = 0.0, distance_flag = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out_dir_flag, "output directory");
        cmd->add_option("--samples", samples_flag, "viewpoint sample count");
        cmd->add_option("--resolution", resolution_flag, "raster resolution (samples per axis)");
        cmd->add_option("--threads", threads_flag, "worker thread count (0 = auto)");
        cmd->add_option("--fov", fov_flag, "vertical field of view in degrees");
        cmd->add_option("--aspect", aspect_flag, "viewport aspect ratio");
        cmd->add_option("--distance-factor", distance_flag,
                        "eye distance in bounding radii");
    };

    CLI::App* sample = app.add_subcommand("sample", "sample the viewpoint landscape");
    sample->add_option("--dataset", dataset_path, "dataset JSON")->required();
    sample->add_flag("--dump-landscapes", dump_landscapes, "write per-graph raw value CSVs");
    add_common(sample);

    CLI::App* score = app.add_subcommand("score", "score the logged selections");
    score->add_option("--dataset", dataset_path, "dataset JSON")->required();
    score->add_option("--ranges", ranges_dir, "directory containing ranges.csv")->required();
    score->add_flag("--force", force, "ignore range-key mismatch");
    add_common(score);

    CLI::App* fit = app.add_subcommand("fit", "fit a measure combination");
    fit->add_option("--scores", scores_dir, "directory containing scores.csv")->required();
    fit->add_option("--method", method_text, "lr or sqp")->required();
    fit->add_option("--k", k, "number of measures to keep");
    fit->add_option("--filter", filter_text, "layout=<class> or size=<class>");
    fit->add_option("--l2", l2, "logistic L2 penalty");
    fit->add_flag("--exhaustive", exhaustive, "exhaustive subset search cross-check");
    add_common(fit);

    CLI::App* analyze = app.add_subcommand("analyze", "PCA, correlations, aggregates");
    analyze->add_option("--scores", scores_dir, "directory containing scores.csv")->required();
    analyze->add_option("--combine-k", combine_k, "subset size for the combined columns");
    add_common(analyze);

    CLI::App* optimize = app.add_subcommand("optimize", "rank sampled viewpoints by weights");
    optimize->add_option("--dataset", dataset_path, "dataset JSON")->required();
    optimize->add_option("--weights", weights_path, "weight vector JSON")->required();
    optimize->add_option("--graph", graph_id, "graph id")->required();
    optimize->add_option("--top", top_k, "number of viewpoints to report");
    add_common(optimize);

    CLI::App* sphere = app.add_subcommand("export-sphere", "per-viewpoint CSV and SVG heatmap");
    sphere->add_option("--dataset", dataset_path, "dataset JSON")->required();
    sphere->add_option("--graph", graph_id, "graph id")->required();
    sphere->add_option("--measure", measure_text, "measure id")->required();
    add_common(sphere);

    std::vector<const char*> argv;
    argv.push_back("viewscore");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig config = load_config(config_path);
        if (!out_dir_flag.empty()) config.out_dir = out_dir_flag;
        if (samples_flag > 0) config.sample_count = samples_flag;
        if (resolution_flag > 0) config.eval.raster_resolution = resolution_flag;
        if (threads_flag >= 0) config.threads = threads_flag;
        if (fov_flag > 0.0) config.camera.vertical_fov_deg = fov_flag;
        if (aspect_flag > 0.0) config.camera.aspect = aspect_flag;
        if (distance_flag > 0.0) config.camera.distance_factor = distance_flag;
        validate_run_config(config);

        if (sample->parsed()) {
            detail::run_sample(config, dataset_path, dump_landscapes, out);
        } else if (score->parsed()) {
            detail::run_score(config, dataset_path, ranges_dir, force, out);
        } else if (fit->parsed()) {
            detail::run_fit(config, scores_dir, method_text, k, filter_text, l2, exhaustive, out);
        } else if (analyze->parsed()) {
            detail::run_analyze(config, scores_dir, combine_k, out);
        } else if (optimize->parsed()) {
            detail::run_optimize(config, dataset_path, weights_path, graph_id, top_k, out);
        } else if (sphere->parsed()) {
            detail::run_export_sphere(config, dataset_path, graph_id, measure_text, out);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Usage ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cli
} // namespace viewscore

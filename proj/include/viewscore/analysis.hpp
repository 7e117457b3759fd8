#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "viewscore/errors.hpp"
#include "viewscore/fitting.hpp"
#include "viewscore/measures.hpp"
#include "viewscore/model.hpp"

namespace viewscore {

struct PcaResult {
    std::array<double, kMeasureCount> mean{};
    std::vector<std::array<double, kMeasureCount>> components; // orthonormal, by variance desc
    std::vector<double> explained_variance;                    // fractions, sum 1
    std::vector<std::vector<double>> projections;              // [sample][component]
};

namespace detail {

inline std::array<double, kMeasureCount> canonical_sign_21(
    const std::array<double, kMeasureCount>& v) {
    int lead = 0;
    for (int i = 1; i < kMeasureCount; ++i)
        if (std::abs(v[static_cast<std::size_t>(i)]) > std::abs(v[static_cast<std::size_t>(lead)]))
            lead = i;
    if (v[static_cast<std::size_t>(lead)] >= 0.0) return v;
    std::array<double, kMeasureCount> out;
    for (int i = 0; i < kMeasureCount; ++i) out[static_cast<std::size_t>(i)] = -v[static_cast<std::size_t>(i)];
    return out;
}

} // namespace detail

// Mean-centered (not variance-scaled) PCA over the 21-dimensional score
// vectors.
inline PcaResult pca_analysis(const std::vector<LabeledSample>& samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 2) throw_domain("pca_analysis: needs at least 2 samples");

    PcaResult result;
    for (const LabeledSample& s : samples)
        for (int m = 0; m < kMeasureCount; ++m)
            result.mean[static_cast<std::size_t>(m)] += s.scores[static_cast<std::size_t>(m)];
    for (int m = 0; m < kMeasureCount; ++m) result.mean[static_cast<std::size_t>(m)] /= n;

    Eigen::MatrixXd centered(n, kMeasureCount);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < kMeasureCount; ++m)
            centered(i, m) = samples[static_cast<std::size_t>(i)].scores[static_cast<std::size_t>(m)] -
                             result.mean[static_cast<std::size_t>(m)];
    Eigen::MatrixXd cov = centered.transpose() * centered / n;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    double total = 0.0;
    std::vector<double> eigenvalues(kMeasureCount);
    for (int k = 0; k < kMeasureCount; ++k) {
        int src = kMeasureCount - 1 - k; // descending
        double lambda = std::max(0.0, solver.eigenvalues()(src));
        eigenvalues[static_cast<std::size_t>(k)] = lambda;
        total += lambda;
        std::array<double, kMeasureCount> comp;
        for (int m = 0; m < kMeasureCount; ++m) comp[static_cast<std::size_t>(m)] = solver.eigenvectors()(m, src);
        result.components.push_back(detail::canonical_sign_21(comp));
    }
    result.explained_variance.resize(kMeasureCount, 0.0);
    if (total > 0.0)
        for (int k = 0; k < kMeasureCount; ++k)
            result.explained_variance[static_cast<std::size_t>(k)] =
                eigenvalues[static_cast<std::size_t>(k)] / total;

    result.projections.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& row = result.projections[static_cast<std::size_t>(i)];
        row.resize(kMeasureCount);
        for (int k = 0; k < kMeasureCount; ++k) {
            double acc = 0.0;
            for (int m = 0; m < kMeasureCount; ++m)
                acc += centered(i, m) *
                       result.components[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
            row[static_cast<std::size_t>(k)] = acc;
        }
    }
    return result;
}

struct CorrelationMatrix {
    std::array<std::array<double, kMeasureCount>, kMeasureCount> rho{};
    std::array<bool, kMeasureCount> constant{}; // flagged: zero variance column
};

// Pearson correlations; constant measures correlate 0 with everything and
// keep a unit diagonal.
inline CorrelationMatrix correlation_matrix(const std::vector<LabeledSample>& samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 2) throw_domain("correlation_matrix: needs at least 2 samples");
    CorrelationMatrix out;

    std::array<double, kMeasureCount> mean{};
    for (const LabeledSample& s : samples)
        for (int m = 0; m < kMeasureCount; ++m) mean[static_cast<std::size_t>(m)] += s.scores[static_cast<std::size_t>(m)];
    for (int m = 0; m < kMeasureCount; ++m) mean[static_cast<std::size_t>(m)] /= n;

    std::array<double, kMeasureCount> var{};
    std::array<std::array<double, kMeasureCount>, kMeasureCount> cov{};
    for (const LabeledSample& s : samples) {
        std::array<double, kMeasureCount> d;
        for (int m = 0; m < kMeasureCount; ++m)
            d[static_cast<std::size_t>(m)] = s.scores[static_cast<std::size_t>(m)] - mean[static_cast<std::size_t>(m)];
        for (int a = 0; a < kMeasureCount; ++a) {
            var[static_cast<std::size_t>(a)] += d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(a)];
            for (int b = a + 1; b < kMeasureCount; ++b)
                cov[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                    d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(b)];
        }
    }
    for (int m = 0; m < kMeasureCount; ++m)
        out.constant[static_cast<std::size_t>(m)] = var[static_cast<std::size_t>(m)] <= 0.0;
    for (int a = 0; a < kMeasureCount; ++a) {
        out.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = 1.0;
        for (int b = a + 1; b < kMeasureCount; ++b) {
            double denom = std::sqrt(var[static_cast<std::size_t>(a)] * var[static_cast<std::size_t>(b)]);
            double r = denom > 0.0 ? cov[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] / denom : 0.0;
            out.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = r;
            out.rho[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = r;
        }
    }
    return out;
}

enum class StratifyBy { All, LayoutClass, SizeClass, Graph };

struct AggregateRow {
    std::string stratum;
    SelectionPolarity polarity = SelectionPolarity::Best;
    int count = 0;
    std::array<double, kMeasureCount> means{};
    double combined_lr = 0.0;
    double combined_sqp = 0.0;
};

struct AggregateTable {
    std::vector<AggregateRow> rows;
    std::vector<std::string> warnings; // omitted empty strata
};

// Arithmetic means per (stratum, measure, polarity), plus combined columns
// from the supplied weight vectors. Stratum order follows the paper tables:
// All; layout semantic, layered, energy; size S, M, L, XL; graphs ordered by
// (layout class, id).
inline AggregateTable aggregate(const std::vector<LabeledSample>& samples, StratifyBy strata,
                                const WeightVector& lr_weights, const WeightVector& sqp_weights) {
    if (samples.empty()) throw_domain("aggregate: no samples");
    AggregateTable table;

    auto stratum_of = [&](const LabeledSample& s) -> std::string {
        switch (strata) {
            case StratifyBy::All: return "All";
            case StratifyBy::LayoutClass: return to_string(s.layout_class);
            case StratifyBy::SizeClass: return to_string(s.size_class);
            case StratifyBy::Graph: return s.graph_id;
        }
        return "All";
    };

    std::vector<std::string> order;
    switch (strata) {
        case StratifyBy::All: order = {"All"}; break;
        case StratifyBy::LayoutClass: order = {"semantic", "layered", "energy"}; break;
        case StratifyBy::SizeClass: order = {"S", "M", "L", "XL"}; break;
        case StratifyBy::Graph: {
            std::map<std::pair<int, std::string>, std::string> sorted;
            for (const LabeledSample& s : samples)
                sorted[{static_cast<int>(s.layout_class), s.graph_id}] = s.graph_id;
            for (const auto& [key, id] : sorted) order.push_back(id);
            break;
        }
    }

    for (const std::string& stratum : order) {
        for (SelectionPolarity polarity : {SelectionPolarity::Best, SelectionPolarity::Worst}) {
            AggregateRow row;
            row.stratum = stratum;
            row.polarity = polarity;
            int want = polarity == SelectionPolarity::Best ? 1 : 0;
            for (const LabeledSample& s : samples) {
                if (s.label != want || stratum_of(s) != stratum) continue;
                row.count++;
                for (int m = 0; m < kMeasureCount; ++m)
                    row.means[static_cast<std::size_t>(m)] += s.scores[static_cast<std::size_t>(m)];
                row.combined_lr += combined_score(lr_weights, s.scores);
                row.combined_sqp += combined_score(sqp_weights, s.scores);
            }
            if (row.count == 0) {
                table.warnings.push_back("stratum '" + stratum + "' (" + to_string(polarity) +
                                         ") has no samples; row omitted");
                continue;
            }
            for (int m = 0; m < kMeasureCount; ++m) row.means[static_cast<std::size_t>(m)] /= row.count;
            row.combined_lr /= row.count;
            row.combined_sqp /= row.count;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

} // namespace viewscore

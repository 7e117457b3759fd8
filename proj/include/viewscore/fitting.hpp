#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "viewscore/errors.hpp"
#include "viewscore/measures.hpp"
#include "viewscore/model.hpp"

namespace viewscore {

struct LabeledSample {
    std::array<double, kMeasureCount> scores{};
    int label = 0; // 1 = best, 0 = worst
    LayoutClass layout_class = LayoutClass::Energy;
    SizeClass size_class = SizeClass::S;
    std::string participant_id;
    std::string graph_id;
};

enum class WeightNormalization { UnitSum, UnitEuclidean };

inline const char* to_string(WeightNormalization n) {
    return n == WeightNormalization::UnitSum ? "unit_sum" : "unit_euclidean";
}

// Nonnegative per-measure importance weights; entries outside the active set
// are exactly zero and the declared normalization holds over the active set.
struct WeightVector {
    std::array<double, kMeasureCount> weights{};
    WeightNormalization normalization = WeightNormalization::UnitSum;
    std::vector<MeasureId> active_set;
};

inline double combined_score(const WeightVector& weights,
                             const std::array<double, kMeasureCount>& scores) {
    double total = 0.0;
    for (int m = 0; m < kMeasureCount; ++m)
        total += weights.weights[static_cast<std::size_t>(m)] *
                 scores[static_cast<std::size_t>(m)];
    return total;
}

struct FitReport {
    WeightVector weights;
    std::array<double, kMeasureCount> raw_coefficients{}; // signed, logistic only
    double intercept = 0.0;
    bool has_intercept = false;
    double training_accuracy = 0.0;
    double mean_separation = 0.0; // mean combined score, best minus worst
    int n_best = 0;
    int n_worst = 0;
    bool converged = true;
    int iterations = 0;
    bool degenerate_uniform = false; // no measure favored best; uniform fallback
};

enum class FitMethod { Logistic, Separation };

inline const char* to_string(FitMethod m) {
    return m == FitMethod::Logistic ? "lr" : "sqp";
}

inline constexpr double kDefaultLogisticL2 = 1e-4;

namespace detail {

inline std::vector<int> full_active_set() {
    std::vector<int> all(kMeasureCount);
    for (int i = 0; i < kMeasureCount; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
}

inline void count_classes(const std::vector<LabeledSample>& samples, int& n_best,
                          int& n_worst) {
    n_best = n_worst = 0;
    for (const LabeledSample& s : samples) (s.label == 1 ? n_best : n_worst)++;
}

inline void finish_report(FitReport& report, const std::vector<LabeledSample>& samples) {
    double best_sum = 0.0, worst_sum = 0.0;
    for (const LabeledSample& s : samples) {
        double c = combined_score(report.weights, s.scores);
        (s.label == 1 ? best_sum : worst_sum) += c;
    }
    report.mean_separation = best_sum / std::max(1, report.n_best) -
                             worst_sum / std::max(1, report.n_worst);
}

inline std::vector<MeasureId> to_measure_ids(const std::vector<int>& active) {
    std::vector<MeasureId> ids;
    ids.reserve(active.size());
    for (int a : active) ids.push_back(static_cast<MeasureId>(a));
    return ids;
}

// Penalized mean log-likelihood logistic regression over the active feature
// subset. Damped Newton from zero start; deterministic.
inline FitReport fit_logistic_on(const std::vector<LabeledSample>& samples,
                                 const std::vector<int>& active, double l2) {
    if (samples.size() < 4) throw_domain("fit_logistic: needs at least 4 samples");
    if (l2 < 0.0) throw_domain("fit_logistic: l2 must be nonnegative");
    FitReport report;
    count_classes(samples, report.n_best, report.n_worst);
    if (report.n_best == 0 || report.n_worst == 0)
        throw_domain("fit_logistic: both classes must be nonempty");

    const int n = static_cast<int>(samples.size());
    const int d = static_cast<int>(active.size());
    Eigen::MatrixXd X(n, d + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int k = 0; k < d; ++k)
            X(i, k + 1) = samples[static_cast<std::size_t>(i)]
                              .scores[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])];
        y(i) = samples[static_cast<std::size_t>(i)].label;
    }

    auto objective = [&](const Eigen::VectorXd& beta) {
        Eigen::VectorXd z = X * beta;
        double ll = 0.0;
        for (int i = 0; i < n; ++i) {
            // log sigmoid forms, stable for large |z|
            double zi = z(i);
            double log_p = zi >= 0.0 ? -std::log1p(std::exp(-zi)) : zi - std::log1p(std::exp(zi));
            double log_q = zi >= 0.0 ? -zi - std::log1p(std::exp(-zi)) : -std::log1p(std::exp(zi));
            ll += y(i) * log_p + (1.0 - y(i)) * log_q;
        }
        double penalty = 0.5 * l2 * beta.tail(d).squaredNorm();
        return ll / n - penalty;
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);
    double obj = objective(beta);
    const int max_iterations = 10000;
    const double tolerance = 1e-8;
    bool converged = false;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        Eigen::VectorXd z = X * beta;
        Eigen::VectorXd p(n), w(n);
        for (int i = 0; i < n; ++i) {
            p(i) = 1.0 / (1.0 + std::exp(-z(i)));
            w(i) = std::max(p(i) * (1.0 - p(i)), 1e-12);
        }
        Eigen::VectorXd grad = X.transpose() * (y - p) / n;
        grad.tail(d) -= l2 * beta.tail(d);
        if (grad.lpNorm<Eigen::Infinity>() < tolerance) {
            converged = true;
            break;
        }
        Eigen::MatrixXd hess = X.transpose() * w.asDiagonal() * X / n;
        for (int k = 1; k <= d; ++k) hess(k, k) += l2;
        hess.diagonal().array() += 1e-12;
        Eigen::VectorXd step = hess.ldlt().solve(grad);
        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 40; ++half) {
            double candidate = objective(beta + scale * step);
            if (candidate >= obj) {
                beta += scale * step;
                obj = candidate;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) {
            converged = true; // numerically at the optimum, no ascent step left
            break;
        }
    }
    report.converged = converged;
    report.iterations = iter;

    report.has_intercept = true;
    report.intercept = beta(0);
    for (int k = 0; k < d; ++k)
        report.raw_coefficients[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])] =
            beta(k + 1);

    // importance: negatives clamped to zero, unit-sum over the remainder
    double positive_sum = 0.0;
    for (int a : active) positive_sum += std::max(0.0, report.raw_coefficients[static_cast<std::size_t>(a)]);
    report.weights.normalization = WeightNormalization::UnitSum;
    report.weights.active_set = to_measure_ids(active);
    if (positive_sum > 0.0) {
        for (int a : active)
            report.weights.weights[static_cast<std::size_t>(a)] =
                std::max(0.0, report.raw_coefficients[static_cast<std::size_t>(a)]) / positive_sum;
    } else {
        report.degenerate_uniform = true;
        for (int a : active)
            report.weights.weights[static_cast<std::size_t>(a)] = 1.0 / static_cast<double>(d);
    }

    int correct = 0;
    for (int i = 0; i < n; ++i) {
        double z = (X.row(i) * beta)(0);
        int predicted = z > 0.0 ? 1 : 0;
        if (predicted == samples[static_cast<std::size_t>(i)].label) ++correct;
    }
    report.training_accuracy = static_cast<double>(correct) / n;
    finish_report(report, samples);
    return report;
}

// Maximizes sum_a w_a c_a over the nonnegative unit sphere by projected
// gradient ascent, c_a the summed best-minus-worst score difference. The
// global optimum is the clamped normalized c (certified in the test suite);
// the iteration is kept so the solver path stays independent of that closed
// form.
inline FitReport solve_max_separation_on(const std::vector<LabeledSample>& samples,
                                         const std::vector<int>& active) {
    FitReport report;
    count_classes(samples, report.n_best, report.n_worst);
    if (report.n_best == 0 || report.n_worst == 0)
        throw_domain("solve_max_separation: both classes must be nonempty");

    const int d = static_cast<int>(active.size());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
    for (const LabeledSample& s : samples) {
        double sign = s.label == 1 ? 1.0 : -1.0;
        for (int k = 0; k < d; ++k)
            c(k) += sign *
                    s.scores[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])];
    }

    report.weights.normalization = WeightNormalization::UnitEuclidean;
    report.weights.active_set = to_measure_ids(active);

    Eigen::VectorXd w = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    if (c.maxCoeff() <= 0.0) {
        report.degenerate_uniform = true;
    } else {
        double eta = 2.0 / c.norm();
        int iter = 0;
        for (; iter < 1000; ++iter) {
            Eigen::VectorXd u = (w + eta * c).cwiseMax(0.0);
            double un = u.norm();
            if (un <= 0.0) break;
            u /= un;
            double delta = (u - w).lpNorm<Eigen::Infinity>();
            w = u;
            if (delta < 1e-15) break;
        }
        report.iterations = iter;
    }
    for (int k = 0; k < d; ++k)
        report.weights.weights[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])] =
            w(k);

    int correct = 0;
    double midpoint = 0.0;
    {
        // threshold at the midpoint of the class means of the combined score
        double best_sum = 0.0, worst_sum = 0.0;
        for (const LabeledSample& s : samples) {
            double v = combined_score(report.weights, s.scores);
            (s.label == 1 ? best_sum : worst_sum) += v;
        }
        midpoint = 0.5 * (best_sum / report.n_best + worst_sum / report.n_worst);
        for (const LabeledSample& s : samples) {
            int predicted = combined_score(report.weights, s.scores) > midpoint ? 1 : 0;
            if (predicted == s.label) ++correct;
        }
    }
    report.training_accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
    finish_report(report, samples);
    return report;
}

inline FitReport fit_on(const std::vector<LabeledSample>& samples, const std::vector<int>& active,
                        FitMethod method, double l2) {
    return method == FitMethod::Logistic ? fit_logistic_on(samples, active, l2)
                                         : solve_max_separation_on(samples, active);
}

// importance used for elimination: clamped coefficient (logistic) or weight
inline double elimination_importance(const FitReport& report, FitMethod method, int measure) {
    if (method == FitMethod::Logistic)
        return std::max(0.0, report.raw_coefficients[static_cast<std::size_t>(measure)]);
    return report.weights.weights[static_cast<std::size_t>(measure)];
}

} // namespace detail

inline FitReport fit_logistic(const std::vector<LabeledSample>& samples,
                              double l2 = kDefaultLogisticL2) {
    return detail::fit_logistic_on(samples, detail::full_active_set(), l2);
}

inline FitReport solve_max_separation(const std::vector<LabeledSample>& samples) {
    return detail::solve_max_separation_on(samples, detail::full_active_set());
}

// Recursive backward elimination: refit, drop the least important active
// measure (ties drop the later registry id), until k remain.
inline FitReport select_subset(const std::vector<LabeledSample>& samples, int k,
                               FitMethod method, double l2 = kDefaultLogisticL2) {
    if (k < 1 || k > kMeasureCount)
        throw_domain("select_subset: k must be in [1, " + std::to_string(kMeasureCount) + "]");
    std::vector<int> active = detail::full_active_set();
    FitReport report = detail::fit_on(samples, active, method, l2);
    while (static_cast<int>(active.size()) > k) {
        int drop_pos = 0;
        double drop_importance = std::numeric_limits<double>::infinity();
        for (std::size_t pos = 0; pos < active.size(); ++pos) {
            double imp = detail::elimination_importance(report, method, active[pos]);
            if (imp <= drop_importance) { // <= prefers the later registry id on ties
                drop_importance = imp;
                drop_pos = static_cast<int>(pos);
            }
        }
        active.erase(active.begin() + drop_pos);
        report = detail::fit_on(samples, active, method, l2);
    }
    return report;
}

// Exhaustive cross-check over all size-k subsets; selects the subset with the
// best fit objective (accuracy for logistic, separation otherwise).
inline FitReport select_subset_exhaustive(const std::vector<LabeledSample>& samples, int k,
                                          FitMethod method, double l2 = kDefaultLogisticL2) {
    if (k < 1 || k > kMeasureCount)
        throw_domain("select_subset_exhaustive: k must be in [1, " +
                     std::to_string(kMeasureCount) + "]");
    std::vector<int> mask(kMeasureCount, 0);
    std::fill(mask.begin(), mask.begin() + k, 1);
    std::sort(mask.begin(), mask.end()); // lexicographically first combination
    FitReport best;
    bool have = false;
    do {
        std::vector<int> active;
        for (int i = 0; i < kMeasureCount; ++i)
            if (mask[static_cast<std::size_t>(i)]) active.push_back(i);
        FitReport r = detail::fit_on(samples, active, method, l2);
        double score = method == FitMethod::Logistic ? r.training_accuracy : r.mean_separation;
        double best_score =
            method == FitMethod::Logistic ? best.training_accuracy : best.mean_separation;
        if (!have || score > best_score) {
            best = r;
            have = true;
        }
    } while (std::next_permutation(mask.begin(), mask.end()));
    return best;
}

} // namespace viewscore

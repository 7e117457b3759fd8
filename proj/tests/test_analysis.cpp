#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "viewscore/analysis.hpp"
#include "test_support.hpp"

using namespace viewscore;
using testsupport::Rng;

namespace {

// independent cyclic-Jacobi eigensolver for the PCA oracle
struct JacobiResult {
    std::vector<double> eigenvalues;               // descending
    std::vector<std::vector<double>> eigenvectors; // row k = vector k
};

JacobiResult jacobi_eigen(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> v(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] * a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
                if (std::abs(apq) < 1e-18) continue;
                double theta = (a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] -
                                a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)]) /
                               (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    double akq = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    a[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)];
                    double aqk = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
                    a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    double vkq = v[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    v[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = c * vkp - s * vkq;
                    v[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return a[static_cast<std::size_t>(lhs)][static_cast<std::size_t>(lhs)] >
               a[static_cast<std::size_t>(rhs)][static_cast<std::size_t>(rhs)];
    });
    JacobiResult result;
    for (int k : order) {
        result.eigenvalues.push_back(a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)]);
        std::vector<double> vec(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) vec[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        result.eigenvectors.push_back(std::move(vec));
    }
    return result;
}

LabeledSample make_sample(const std::array<double, kMeasureCount>& scores, int label,
                          LayoutClass lc = LayoutClass::Energy, SizeClass sc = SizeClass::S,
                          const std::string& graph = "g", const std::string& who = "p") {
    LabeledSample s;
    s.scores = scores;
    s.label = label;
    s.layout_class = lc;
    s.size_class = sc;
    s.graph_id = graph;
    s.participant_id = who;
    return s;
}

} // namespace

TEST_CASE("pca_analysis: samples on a line load everything on one component") {
    std::vector<LabeledSample> samples;
    std::array<double, kMeasureCount> direction{};
    direction[0] = 0.6;
    direction[1] = 0.8;
    for (int i = 0; i < 10; ++i) {
        std::array<double, kMeasureCount> s{};
        for (int m = 0; m < kMeasureCount; ++m)
            s[static_cast<std::size_t>(m)] = 0.5 + (i - 5) * 0.05 * direction[static_cast<std::size_t>(m)];
        samples.push_back(make_sample(s, i % 2));
    }
    PcaResult pca = pca_analysis(samples);
    CHECK(pca.explained_variance[0] == Catch::Approx(1.0).margin(1e-9));
    CHECK(std::abs(pca.components[0][0]) == Catch::Approx(0.6).margin(1e-9));
    CHECK(std::abs(pca.components[0][1]) == Catch::Approx(0.8).margin(1e-9));
}

TEST_CASE("pca_analysis: components are orthonormal and fractions sum to 1") {
    Rng rng(2727);
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 60; ++i) {
        std::array<double, kMeasureCount> s;
        for (int m = 0; m < kMeasureCount; ++m)
            s[static_cast<std::size_t>(m)] = testsupport::uniform(rng, 0.0, 1.0);
        samples.push_back(make_sample(s, i % 2));
    }
    PcaResult pca = pca_analysis(samples);
    double total = 0.0;
    for (double f : pca.explained_variance) total += f;
    CHECK(total == Catch::Approx(1.0).margin(1e-9));
    for (int a = 0; a < kMeasureCount; ++a)
        for (int b = a; b < kMeasureCount; ++b) {
            double d = 0.0;
            for (int m = 0; m < kMeasureCount; ++m)
                d += pca.components[static_cast<std::size_t>(a)][static_cast<std::size_t>(m)] *
                     pca.components[static_cast<std::size_t>(b)][static_cast<std::size_t>(m)];
            CHECK(d == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-9));
        }
    CHECK_THROWS_AS(pca_analysis(std::vector<LabeledSample>{samples[0]}), Error);
}

TEST_CASE("pca_analysis matches an independent Jacobi eigensolver") {
    Rng rng(2828);
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 80; ++i) {
        std::array<double, kMeasureCount> s;
        for (int m = 0; m < kMeasureCount; ++m)
            s[static_cast<std::size_t>(m)] =
                testsupport::uniform(rng, 0.0, 1.0) * (m % 3 == 0 ? 2.0 : 0.5);
        samples.push_back(make_sample(s, i % 2));
    }
    PcaResult pca = pca_analysis(samples);

    std::array<double, kMeasureCount> mean{};
    for (const auto& s : samples)
        for (int m = 0; m < kMeasureCount; ++m) mean[static_cast<std::size_t>(m)] += s.scores[static_cast<std::size_t>(m)];
    for (int m = 0; m < kMeasureCount; ++m) mean[static_cast<std::size_t>(m)] /= samples.size();
    std::vector<std::vector<double>> cov(kMeasureCount, std::vector<double>(kMeasureCount, 0.0));
    for (const auto& s : samples)
        for (int a = 0; a < kMeasureCount; ++a)
            for (int b = 0; b < kMeasureCount; ++b)
                cov[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                    (s.scores[static_cast<std::size_t>(a)] - mean[static_cast<std::size_t>(a)]) *
                    (s.scores[static_cast<std::size_t>(b)] - mean[static_cast<std::size_t>(b)]);
    for (auto& row : cov)
        for (double& v : row) v /= samples.size();

    JacobiResult oracle = jacobi_eigen(cov);
    double total = 0.0;
    for (double l : oracle.eigenvalues) total += std::max(0.0, l);
    for (int k = 0; k < kMeasureCount; ++k) {
        CHECK(pca.explained_variance[static_cast<std::size_t>(k)] ==
              Catch::Approx(std::max(0.0, oracle.eigenvalues[static_cast<std::size_t>(k)]) / total)
                  .margin(1e-8));
        // vectors agree up to sign
        double d = 0.0;
        for (int m = 0; m < kMeasureCount; ++m)
            d += pca.components[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] *
                 oracle.eigenvectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
        CHECK(std::abs(d) == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("correlation_matrix: duplicated, negated, and constant columns") {
    Rng rng(2929);
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 200; ++i) {
        std::array<double, kMeasureCount> s;
        for (int m = 0; m < kMeasureCount; ++m)
            s[static_cast<std::size_t>(m)] = testsupport::uniform(rng, 0.0, 1.0);
        s[1] = s[0];       // duplicated column
        s[2] = 1.0 - s[0]; // negated column
        s[3] = 0.5;        // constant column
        samples.push_back(make_sample(s, i % 2));
    }
    CorrelationMatrix corr = correlation_matrix(samples);
    CHECK(corr.rho[0][1] == Catch::Approx(1.0).margin(1e-12));
    CHECK(corr.rho[0][2] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(corr.constant[3]);
    CHECK_FALSE(corr.constant[0]);
    CHECK(corr.rho[3][3] == 1.0);
    for (int m = 0; m < kMeasureCount; ++m)
        if (m != 3) CHECK(corr.rho[3][static_cast<std::size_t>(m)] == 0.0);
}

TEST_CASE("correlation_matrix: independent columns decorrelate at n = 10^4") {
    Rng rng(3030);
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 10000; ++i) {
        std::array<double, kMeasureCount> s;
        for (int m = 0; m < kMeasureCount; ++m)
            s[static_cast<std::size_t>(m)] = testsupport::uniform(rng, 0.0, 1.0);
        samples.push_back(make_sample(s, i % 2));
    }
    CorrelationMatrix corr = correlation_matrix(samples);
    for (int a = 0; a < kMeasureCount; ++a)
        for (int b = a + 1; b < kMeasureCount; ++b)
            CHECK(std::abs(corr.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) < 0.1);
}

TEST_CASE("aggregate: means per stratum and polarity") {
    WeightVector uniform;
    uniform.normalization = WeightNormalization::UnitSum;
    for (int m = 0; m < kMeasureCount; ++m) {
        uniform.weights[static_cast<std::size_t>(m)] = 1.0 / kMeasureCount;
        uniform.active_set.push_back(static_cast<MeasureId>(m));
    }

    std::array<double, kMeasureCount> ones;
    ones.fill(1.0);
    std::array<double, kMeasureCount> zeros{};

    SECTION("single best sample with all scores 1") {
        std::vector<LabeledSample> samples = {make_sample(ones, 1)};
        AggregateTable table = aggregate(samples, StratifyBy::All, uniform, uniform);
        REQUIRE(table.rows.size() == 1); // worst row omitted with warning
        CHECK(table.rows[0].polarity == SelectionPolarity::Best);
        for (int m = 0; m < kMeasureCount; ++m)
            CHECK(table.rows[0].means[static_cast<std::size_t>(m)] == 1.0);
        CHECK(table.rows[0].combined_lr == Catch::Approx(1.0).margin(1e-12));
        CHECK(table.warnings.size() == 1);
    }

    SECTION("two samples 0 and 1 average to 0.5") {
        std::array<double, kMeasureCount> half;
        half.fill(0.0);
        std::vector<LabeledSample> samples = {make_sample(ones, 1), make_sample(zeros, 1),
                                              make_sample(half, 0)};
        AggregateTable table = aggregate(samples, StratifyBy::All, uniform, uniform);
        REQUIRE(table.rows.size() == 2);
        for (int m = 0; m < kMeasureCount; ++m)
            CHECK(table.rows[0].means[static_cast<std::size_t>(m)] == 0.5);
    }

    SECTION("stratum order follows the paper layout and size orders") {
        std::vector<LabeledSample> samples;
        for (LayoutClass lc : {LayoutClass::Energy, LayoutClass::Semantic, LayoutClass::Layered})
            for (int label : {0, 1})
                samples.push_back(make_sample(ones, label, lc));
        AggregateTable by_layout = aggregate(samples, StratifyBy::LayoutClass, uniform, uniform);
        REQUIRE(by_layout.rows.size() == 6);
        CHECK(by_layout.rows[0].stratum == "semantic");
        CHECK(by_layout.rows[2].stratum == "layered");
        CHECK(by_layout.rows[4].stratum == "energy");
        CHECK(by_layout.rows[0].polarity == SelectionPolarity::Best);
        CHECK(by_layout.rows[1].polarity == SelectionPolarity::Worst);

        samples.clear();
        for (SizeClass sc : {SizeClass::XL, SizeClass::S, SizeClass::M, SizeClass::L})
            for (int label : {0, 1})
                samples.push_back(make_sample(ones, label, LayoutClass::Energy, sc));
        AggregateTable by_size = aggregate(samples, StratifyBy::SizeClass, uniform, uniform);
        REQUIRE(by_size.rows.size() == 8);
        CHECK(by_size.rows[0].stratum == "S");
        CHECK(by_size.rows[2].stratum == "M");
        CHECK(by_size.rows[4].stratum == "L");
        CHECK(by_size.rows[6].stratum == "XL");
    }

    SECTION("graphs order by layout class then id") {
        std::vector<LabeledSample> samples;
        samples.push_back(make_sample(ones, 1, LayoutClass::Energy, SizeClass::S, "e_graph"));
        samples.push_back(make_sample(ones, 0, LayoutClass::Energy, SizeClass::S, "e_graph"));
        samples.push_back(make_sample(ones, 1, LayoutClass::Semantic, SizeClass::S, "s_graph"));
        samples.push_back(make_sample(ones, 0, LayoutClass::Semantic, SizeClass::S, "s_graph"));
        AggregateTable table = aggregate(samples, StratifyBy::Graph, uniform, uniform);
        REQUIRE(table.rows.size() == 4);
        CHECK(table.rows[0].stratum == "s_graph"); // semantic sorts before energy
        CHECK(table.rows[2].stratum == "e_graph");
    }
}

TEST_CASE("PCA first component separates separable labeled data") {
    Rng rng(3131);
    std::vector<LabeledSample> samples;
    for (int label : {1, 0}) {
        for (int i = 0; i < 150; ++i) {
            std::array<double, kMeasureCount> s;
            for (int m = 0; m < kMeasureCount; ++m)
                s[static_cast<std::size_t>(m)] = testsupport::uniform(rng, 0.0, 0.2);
            for (int m : {0, 4, 8}) {
                double center = label == 1 ? 0.8 : 0.2;
                s[static_cast<std::size_t>(m)] = center + testsupport::uniform(rng, -0.15, 0.15);
            }
            samples.push_back(make_sample(s, label));
        }
    }
    PcaResult pca = pca_analysis(samples);
    double best_mean = 0.0, worst_mean = 0.0;
    int nb = 0, nw = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].label == 1) {
            best_mean += pca.projections[i][0];
            ++nb;
        } else {
            worst_mean += pca.projections[i][0];
            ++nw;
        }
    }
    best_mean /= nb;
    worst_mean /= nw;
    double midpoint = 0.5 * (best_mean + worst_mean);
    bool best_above = best_mean > worst_mean;
    int correct = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        bool above = pca.projections[i][0] > midpoint;
        int predicted = (above == best_above) ? 1 : 0;
        if (predicted == samples[i].label) ++correct;
    }
    double accuracy = static_cast<double>(correct) / samples.size();
    CHECK(accuracy > 0.5);
    CHECK(accuracy > 0.9); // strongly separable by construction
}

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "viewscore/errors.hpp"
#include "viewscore/geometry.hpp"
#include "viewscore/measures.hpp"
#include "viewscore/model.hpp"

namespace viewscore {

// Orthonormal principal axes with descending nonnegative eigenvalues.
struct PrincipalAxes {
    std::array<Vec3, 3> eigenvectors;
    std::array<double, 3> eigenvalues;
};

namespace detail {

// Largest-magnitude component nonnegative, ties resolved by the earliest
// axis. Makes eigenvector signs deterministic.
inline Vec3 canonical_sign(Vec3 v) {
    double ax = std::abs(v.x), ay = std::abs(v.y), az = std::abs(v.z);
    double lead = v.x;
    if (ay > ax && ay >= az) lead = v.y;
    else if (az > ax && az > ay) lead = v.z;
    return lead < 0.0 ? -v : v;
}

} // namespace detail

// Eigen-decomposition of the population covariance of the node positions.
inline PrincipalAxes pca_axes(const Layout3D& layout) {
    if (layout.positions.empty()) throw_domain("pca_axes: layout has no nodes");
    const double n = static_cast<double>(layout.positions.size());
    Vec3 mean{};
    for (const Vec3& p : layout.positions) mean = mean + p;
    mean = mean * (1.0 / n);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Vec3& p : layout.positions) {
        Eigen::Vector3d d(p.x - mean.x, p.y - mean.y, p.z - mean.z);
        cov += d * d.transpose();
    }
    cov /= n;

    PrincipalAxes axes;
    if (cov.norm() <= 0.0) {
        axes.eigenvectors = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        axes.eigenvalues = {0.0, 0.0, 0.0};
        return axes;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    for (int k = 0; k < 3; ++k) {
        int src = 2 - k; // Eigen sorts ascending
        Eigen::Vector3d e = solver.eigenvectors().col(src);
        axes.eigenvectors[static_cast<std::size_t>(k)] =
            detail::canonical_sign({e.x(), e.y(), e.z()});
        axes.eigenvalues[static_cast<std::size_t>(k)] =
            std::max(0.0, solver.eigenvalues()(src));
    }
    return axes;
}

// Isometric viewpoint deviation: 1 - alpha * sigma_w / sigma_max, where
// sigma_w is the eigenvalue-weighted standard deviation of the normalized
// absolute view projections onto the principal axes and alpha gates by the
// anisotropy of the eigenvalue weights. 1 means a balanced view or an
// isotropic layout.
inline RawMeasure iso_score(Vec3 v, const PrincipalAxes& axes) {
    double vn = norm(v);
    if (std::abs(vn - 1.0) > 1e-6) throw_domain("iso_score: view vector must be unit length");
    v = v * (1.0 / vn);

    double lambda_sum = axes.eigenvalues[0] + axes.eigenvalues[1] + axes.eigenvalues[2];
    if (!(lambda_sum > 0.0)) return {MeasureId::ISO, 1.0};

    std::array<double, 3> w{axes.eigenvalues[0] / lambda_sum, axes.eigenvalues[1] / lambda_sum,
                            axes.eigenvalues[2] / lambda_sum};
    std::array<double, 3> a{std::abs(dot(axes.eigenvectors[0], v)),
                            std::abs(dot(axes.eigenvectors[1], v)),
                            std::abs(dot(axes.eigenvectors[2], v))};
    double a_sum = a[0] + a[1] + a[2];
    std::array<double, 3> a_norm{a[0] / a_sum, a[1] / a_sum, a[2] / a_sum};

    double mu = w[0] * a_norm[0] + w[1] * a_norm[1] + w[2] * a_norm[2];
    double var_w = 0.0;
    for (int k = 0; k < 3; ++k) {
        double d = a_norm[static_cast<std::size_t>(k)] - mu;
        var_w += w[static_cast<std::size_t>(k)] * d * d;
    }
    double sigma_w = std::sqrt(var_w);

    constexpr double sigma_max = 0.57735026918962576451; // 1/sqrt(3)
    // sample standard deviation of the three weights; the weights sum to 1,
    // so their mean is 1/3 and the fully degenerate case (1,0,0) hits
    // sigma_max exactly
    double dev_sq = 0.0;
    for (double wk : w) dev_sq += (wk - 1.0 / 3.0) * (wk - 1.0 / 3.0);
    double alpha = std::sqrt(dev_sq / 2.0) / sigma_max;

    double value = 1.0 - alpha * sigma_w / sigma_max;
    return {MeasureId::ISO, std::clamp(value, 0.0, 1.0)};
}

} // namespace viewscore

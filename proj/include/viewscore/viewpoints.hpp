#pragma once

#include <cmath>
#include <vector>

#include "viewscore/errors.hpp"
#include "viewscore/geometry.hpp"

namespace viewscore {

// Deterministic near-uniform sphere sampling via the Fibonacci lattice:
// z_i = 1 - (2i+1)/count, phi_i = i * pi * (3 - sqrt(5)).
inline std::vector<Vec3> fibonacci_viewpoints(int count) {
    if (count < 1) throw_domain("fibonacci_viewpoints: count must be >= 1");
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden_angle * static_cast<double>(i);
        points.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return points;
}

} // namespace viewscore

#pragma once

#include <cmath>

#include "viewscore/errors.hpp"
#include "viewscore/geometry.hpp"
#include "viewscore/model.hpp"

namespace viewscore {

struct CameraConfig {
    double vertical_fov_deg = 90.0;
    double aspect = 1.0;           // width / height
    double distance_factor = 2.5;  // eye distance in multiples of bounding_radius
    Vec3 preferred_up{0.0, 1.0, 0.0};
    Vec3 fallback_up{1.0, 0.0, 0.0};
};

inline void validate_camera_config(const CameraConfig& c) {
    if (!(c.vertical_fov_deg > 0.0 && c.vertical_fov_deg < 180.0))
        throw_domain("camera: vertical_fov must be in (0, 180) degrees");
    if (!(c.aspect > 0.0)) throw_domain("camera: aspect must be positive");
    if (!(c.distance_factor > 1.0))
        throw_domain("camera: distance_factor must exceed 1 (eye outside the bounding sphere)");
}

// Right-handed orthonormal frame; forward points from the eye toward the
// graph center. The focal plane sits at distance 1, so the viewport height is
// 2 tan(fov/2) and all projected lengths are resolution independent.
struct Camera {
    Vec3 eye;
    Vec3 forward;
    Vec3 right;
    Vec3 up;
    double focal = 1.0;
    double viewport_w = 0.0;
    double viewport_h = 0.0;
};

inline Camera camera_from_viewpoint(Vec3 v, const Layout3D& layout, const CameraConfig& config) {
    validate_camera_config(config);
    double n = norm(v);
    if (std::abs(n - 1.0) > 1e-6)
        throw_domain("camera_from_viewpoint: view vector must be unit length");
    if (!(layout.bounding_radius > 0.0))
        throw_domain("camera_from_viewpoint: degenerate layout (bounding_radius = 0)");
    v = v * (1.0 / n);

    Camera cam;
    cam.forward = v;
    cam.eye = layout.center - v * (config.distance_factor * layout.bounding_radius);

    Vec3 up_axis = normalized(config.preferred_up);
    if (std::abs(dot(v, up_axis)) > 0.999) up_axis = normalized(config.fallback_up);
    cam.right = normalized(cross(up_axis, cam.forward));
    cam.up = cross(cam.forward, cam.right);

    cam.focal = 1.0;
    cam.viewport_h = 2.0 * std::tan(deg_to_rad(config.vertical_fov_deg) * 0.5);
    cam.viewport_w = config.aspect * cam.viewport_h;
    return cam;
}

} // namespace viewscore

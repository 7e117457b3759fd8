#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "viewscore/csvio.hpp"
#include "viewscore/geometry.hpp"
#include "viewscore/model.hpp"

namespace viewscore {

namespace detail {

// longitude/latitude of a direction, +y up; u, v in [0,1]
inline Vec2 equirect_uv(Vec3 dir) {
    double lon = std::atan2(dir.z, dir.x);
    double lat = std::asin(std::clamp(dir.y, -1.0, 1.0));
    return {(lon + kPi) / (2.0 * kPi), (lat + kPi / 2.0) / kPi};
}

// red -> yellow -> green ramp over [0,1]
inline std::string score_color(double score) {
    score = std::clamp(score, 0.0, 1.0);
    auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
    double r, g, b;
    if (score < 0.5) {
        double t = score * 2.0;
        r = lerp(215, 255, t);
        g = lerp(25, 255, t);
        b = lerp(28, 191, t);
    } else {
        double t = (score - 0.5) * 2.0;
        r = lerp(255, 26, t);
        g = lerp(255, 150, t);
        b = lerp(191, 65, t);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(r)), static_cast<int>(std::lround(g)),
                  static_cast<int>(std::lround(b)));
    return buf;
}

} // namespace detail

struct SphereMarker {
    Vec3 direction;
    SelectionPolarity polarity;
};

// Equirectangular heatmap of per-viewpoint scores with nearest-sample
// coloring plus best/worst selection markers; fully deterministic output.
inline std::string render_sphere_heatmap(const std::vector<Vec3>& viewpoints,
                                         const std::vector<double>& scores,
                                         const std::vector<SphereMarker>& markers,
                                         const std::string& title,
                                         const std::string& provenance) {
    constexpr int kCellsX = 180;
    constexpr int kCellsY = 90;
    constexpr double kCellPx = 4.0;
    const double width = kCellsX * kCellPx;
    const double height = kCellsY * kCellPx;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           format_double(width) + "\" height=\"" + format_double(height + 20.0) + "\">\n";
    svg += "<!-- " + provenance + " -->\n";
    svg += "<title>" + title + "</title>\n";

    for (int cy = 0; cy < kCellsY; ++cy) {
        for (int cx = 0; cx < kCellsX; ++cx) {
            double u = (cx + 0.5) / kCellsX;
            double v = (cy + 0.5) / kCellsY;
            double lon = u * 2.0 * kPi - kPi;
            double lat = v * kPi - kPi / 2.0;
            Vec3 dir{std::cos(lat) * std::cos(lon), std::sin(lat), std::cos(lat) * std::sin(lon)};
            std::size_t nearest = 0;
            double best_dot = -2.0;
            for (std::size_t i = 0; i < viewpoints.size(); ++i) {
                double d = dot(dir, viewpoints[i]);
                if (d > best_dot) {
                    best_dot = d;
                    nearest = i;
                }
            }
            // v grows upward (latitude), SVG y grows downward
            double px = cx * kCellPx;
            double py = (kCellsY - 1 - cy) * kCellPx;
            svg += "<rect x=\"" + format_double(px) + "\" y=\"" + format_double(py) +
                   "\" width=\"" + format_double(kCellPx) + "\" height=\"" +
                   format_double(kCellPx) + "\" fill=\"" +
                   detail::score_color(scores[nearest]) + "\"/>\n";
        }
    }

    for (const SphereMarker& marker : markers) {
        Vec2 uv = detail::equirect_uv(normalized(marker.direction));
        double px = uv.x * width;
        double py = (1.0 - uv.y) * height;
        const char* stroke = marker.polarity == SelectionPolarity::Best ? "#0a5d00" : "#8b0000";
        svg += "<circle cx=\"" + format_double(px) + "\" cy=\"" + format_double(py) +
               "\" r=\"5\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
    }

    svg += "<text x=\"4\" y=\"" + format_double(height + 14.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + title + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace viewscore

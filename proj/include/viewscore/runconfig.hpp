#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "viewscore/camera.hpp"
#include "viewscore/csvio.hpp"
#include "viewscore/errors.hpp"
#include "viewscore/measures.hpp"
#include "viewscore/pipeline.hpp"

namespace viewscore {

struct RunConfig {
    CameraConfig camera;
    int sample_count = 5000;
    EvalParams eval;
    std::vector<int> subset_sizes{21, 5, 3};
    std::string out_dir = "out";
    int threads = 0; // 0 = hardware concurrency
};

inline void validate_run_config(const RunConfig& c) {
    if (c.sample_count < 2) throw_usage("config: sample_count must be >= 2");
    if (c.eval.raster_resolution < 64) throw_usage("config: raster_resolution must be >= 64");
    if (c.threads < 0) throw_usage("config: threads must be >= 0");
    if (c.subset_sizes.empty()) throw_usage("config: subset_sizes must not be empty");
    for (int k : c.subset_sizes)
        if (k < 1 || k > kMeasureCount)
            throw_usage("config: subset size " + std::to_string(k) + " out of [1, " +
                        std::to_string(kMeasureCount) + "]");
    try {
        validate_camera_config(c.camera);
    } catch (const Error& e) {
        throw_usage(std::string("config: ") + e.what());
    }
}

// Canonical echo of the fully resolved configuration; its hash keys every
// artifact so reruns can be checked for config identity.
inline nlohmann::ordered_json config_echo_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["camera"] = {{"vertical_fov_deg", c.camera.vertical_fov_deg},
                   {"aspect", c.camera.aspect},
                   {"distance_factor", c.camera.distance_factor},
                   {"preferred_up",
                    {c.camera.preferred_up.x, c.camera.preferred_up.y, c.camera.preferred_up.z}},
                   {"fallback_up",
                    {c.camera.fallback_up.x, c.camera.fallback_up.y, c.camera.fallback_up.z}}};
    j["sample_count"] = c.sample_count;
    j["raster_resolution"] = c.eval.raster_resolution;
    j["symmetry"] = {{"axis_theta_bin_deg", c.eval.symmetry.axis_theta_bin_deg},
                     {"axis_rho_bin_frac", c.eval.symmetry.axis_rho_bin_frac},
                     {"center_bin_frac", c.eval.symmetry.center_bin_frac},
                     {"rot_angle_bin_deg", c.eval.symmetry.rot_angle_bin_deg},
                     {"trans_bin_frac", c.eval.symmetry.trans_bin_frac},
                     {"sigma_length_factor", c.eval.symmetry.sigma_length_factor}};
    j["subset_sizes"] = c.subset_sizes;
    j["threads"] = c.threads;
    j["registry"] = kRegistryVersion;
    return j;
}

inline std::string config_hash(const RunConfig& c) {
    return fnv1a_hex(config_echo_json(c).dump());
}

// Hash of the fields that determine sampled raw values: camera, resolution,
// symmetry binning, and sample count. Range tables are keyed by this.
inline std::string range_key_hash(const RunConfig& c) {
    nlohmann::ordered_json j = config_echo_json(c);
    j.erase("subset_sizes");
    j.erase("threads");
    return fnv1a_hex(j.dump());
}

// Fills a RunConfig from an optional JSON file; CLI flags override afterwards.
inline RunConfig load_config(const std::optional<std::string>& path) {
    RunConfig config;
    if (!path) return config;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(*path));
    } catch (const nlohmann::json::parse_error& e) {
        throw_usage("config '" + *path + "': " + e.what());
    }
    if (!doc.is_object()) throw_usage("config '" + *path + "': top level must be an object");

    auto get_double = [&](const nlohmann::json& obj, const char* key, double& out) {
        if (obj.contains(key)) out = obj[key].get<double>();
    };
    if (doc.contains("camera")) {
        const auto& cam = doc["camera"];
        get_double(cam, "vertical_fov_deg", config.camera.vertical_fov_deg);
        get_double(cam, "aspect", config.camera.aspect);
        get_double(cam, "distance_factor", config.camera.distance_factor);
        auto get_vec = [&](const char* key, Vec3& out) {
            if (cam.contains(key)) {
                const auto& a = cam[key];
                if (!a.is_array() || a.size() != 3)
                    throw_usage(std::string("config: camera.") + key + " must be [x,y,z]");
                out = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
            }
        };
        get_vec("preferred_up", config.camera.preferred_up);
        get_vec("fallback_up", config.camera.fallback_up);
    }
    if (doc.contains("sample_count")) config.sample_count = doc["sample_count"].get<int>();
    if (doc.contains("raster_resolution"))
        config.eval.raster_resolution = doc["raster_resolution"].get<int>();
    if (doc.contains("symmetry")) {
        const auto& sym = doc["symmetry"];
        get_double(sym, "axis_theta_bin_deg", config.eval.symmetry.axis_theta_bin_deg);
        get_double(sym, "axis_rho_bin_frac", config.eval.symmetry.axis_rho_bin_frac);
        get_double(sym, "center_bin_frac", config.eval.symmetry.center_bin_frac);
        get_double(sym, "rot_angle_bin_deg", config.eval.symmetry.rot_angle_bin_deg);
        get_double(sym, "trans_bin_frac", config.eval.symmetry.trans_bin_frac);
        get_double(sym, "sigma_length_factor", config.eval.symmetry.sigma_length_factor);
    }
    if (doc.contains("subset_sizes")) {
        config.subset_sizes.clear();
        for (const auto& k : doc["subset_sizes"]) config.subset_sizes.push_back(k.get<int>());
    }
    if (doc.contains("out_dir")) config.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("threads")) config.threads = doc["threads"].get<int>();
    return config;
}

} // namespace viewscore

#pragma once

#include <filesystem>
#include <string>

#include "cff/augment.hpp"
#include "cff/bev.hpp"
#include "cff/depth_completion.hpp"
#include "cff/sim.hpp"

namespace cff {

/// Every tunable default in one place. A config file is key-value text
/// (`key value` per line, `#` comments); unknown keys are errors so typos
/// never pass silently.
struct RunConfig {
    int stride = 4;
    int num_classes = 10;
    double threshold = 0.1;

    // synthetic camera rig
    int image_width = 800;
    int image_height = 448;
    double focal = 600.0;
    double cam_height = 1.6;
    double ring_radius = 0.5;
    int cameras = 6;

    // lidar scanner
    int beams = 32;
    double beam_min_deg = -30.0;
    double beam_max_deg = 10.0;
    double azimuth_resolution_deg = 0.2;
    double max_range = 70.0;
    double lidar_origin_z = 1.8;
    double noise_sigma = 0.0;

    BevGridConfig grid;
    DepthFillConfig depth;
    AugmentationRanges augment;

    LidarConfig lidar() const;
    void validate() const;
};

/// Applies one `key value` override. Throws ParseError on unknown keys or
/// unparseable values.
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace cff

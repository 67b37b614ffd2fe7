#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cff/config.hpp"
#include "cff/pipeline.hpp"

namespace cff::cli {

/// Loads a frame directory produced by cmd_simulate: cloud.cffp plus
/// cam<i>_{calib.txt, heatmap.cfft, features.cfft} for consecutive i
/// starting at 0. Ground-truth depth files are left untouched; depth is
/// recompleted from the cloud.
FrameInput load_frame(const std::filesystem::path& frame_dir, const RunConfig& config);

struct SimulateOptions {
    std::filesystem::path scene_file;
    std::filesystem::path out_dir;
    uint64_t seed = 0;
    RunConfig config;
};

/// Renders a synthetic frame to disk: LiDAR cloud, per-camera heatmap,
/// features, ground-truth depth, calibration, and a checksum manifest.
int cmd_simulate(const SimulateOptions& opt, std::ostream& out);

struct ProjectOptions {
    std::filesystem::path frame_dir;
    std::filesystem::path out_dir;
    std::filesystem::path augment_file;  // empty = no augmentation
    bool write_pgm = false;
    RunConfig config;
};

/// Runs the fusion pipeline on a frame directory and writes the camera,
/// lidar, and fused BEV grids plus a stats CSV.
int cmd_project(const ProjectOptions& opt, std::ostream& out);

struct BenchOptions {
    std::filesystem::path frame_dir;
    std::filesystem::path out_csv;  // empty = CSV to stdout
    std::vector<double> thresholds = {0.5, 0.1, 0.05, 0.01, 0.0};
    int reps = 5;
    RunConfig config;
};

/// Threshold sweep over one frame. The CSV schema is fixed:
/// `threshold,pixels,latency_ms`. Depth completion time is reported once
/// on the side channel, never inside the CSV.
int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& side);

struct AugmentOptions {
    std::filesystem::path params_file;  // empty = sample from seed
    uint64_t seed = 0;
    bool invert = false;
    std::filesystem::path cloud_in;   // optional
    std::filesystem::path points_in;  // optional pseudo-point tensor
    std::filesystem::path out_dir;
    RunConfig config;
};

/// Applies a saved or freshly sampled transform to a cloud and/or
/// pseudo-point tensor. Always writes params.txt with the record actually
/// applied (after inversion when --invert is set).
int cmd_augment(const AugmentOptions& opt, std::ostream& out);

struct DepthOptions {
    std::filesystem::path cloud_file;
    std::filesystem::path calib_file;
    std::filesystem::path gt_file;  // optional ground-truth depth tensor
    std::string method = "ipbasic";  // ipbasic | nn | both
    std::filesystem::path out_dir;
    RunConfig config;
};

/// Standalone depth completion: renders sparse depth from the cloud,
/// completes it, writes the dense result, and reports RMSE against the
/// ground truth when provided.
int cmd_depth(const DepthOptions& opt, std::ostream& out);

}  // namespace cff::cli

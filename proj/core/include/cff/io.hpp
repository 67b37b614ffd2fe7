#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cff/augment.hpp"
#include "cff/bev.hpp"
#include "cff/depth_completion.hpp"
#include "cff/geometry.hpp"
#include "cff/heatmap.hpp"
#include "cff/sim.hpp"

namespace cff {

/// In-memory image of a CFFT tensor file: little-endian float32 payload
/// with row-major dims, slowest axis first. Rank is 1 to 4.
struct Tensor {
    std::vector<uint32_t> dims;
    std::vector<float> values;

    size_t element_count() const {
        size_t n = 1;
        for (uint32_t d : dims) n *= d;
        return n;
    }
    void validate() const;
};

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const Tensor& tensor);

/// CFFP point cloud: u32 count then count x 4 float32 (x, y, z, intensity).
PointCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// Tensor layout conventions shared by every tool: heatmaps [K, H, W],
// features [C, H, W], dense depth [2, H, W] (depth plane then 0/1 mask),
// pseudo-points [N, 5 + C] with columns x, y, z, class, score, feature.
Tensor heatmap_to_tensor(const KeypointHeatmap& hm);
KeypointHeatmap tensor_to_heatmap(const Tensor& t, int stride);
Tensor features_to_tensor(const FeatureMap& fm);
FeatureMap tensor_to_features(const Tensor& t);
Tensor depth_to_tensor(const DenseDepthMap& dd);
DenseDepthMap tensor_to_depth(const Tensor& t);
Tensor pseudo_points_to_tensor(const std::vector<FeaturePseudoPoint>& points);
std::vector<FeaturePseudoPoint> tensor_to_pseudo_points(const Tensor& t);

/// CFFB BEV container: magic, grid extents and cell size as float64 (so
/// the configured doubles round-trip exactly), u32 channel count, then two
/// embedded CFFT tensors: values [C, ny, nx] and occupancy [ny, nx].
struct BevFile {
    BevFeatureGrid grid;
    BevGridConfig config;
};

void write_bev(const std::filesystem::path& path, const BevFeatureGrid& grid,
               const BevGridConfig& config);
BevFile read_bev(const std::filesystem::path& path);

/// Calibration text: one `key value` line per intrinsic plus a
/// `cam_from_world` line carrying 16 row-major values, printed to
/// round-trip exactly.
std::string format_calibration(const CameraCalibration& calib);
CameraCalibration parse_calibration(const std::string& text);
CameraCalibration read_calibration(const std::filesystem::path& path);
void write_calibration(const std::filesystem::path& path, const CameraCalibration& calib);

/// Scene text: `box cx cy cz sx sy sz yaw class` lines plus optional
/// `ground z` and `extent e`. Blank lines and `#` comments are ignored.
/// Parse errors carry the 1-based line number.
SceneSpec parse_scene(const std::string& text);
std::string format_scene(const SceneSpec& scene);
SceneSpec read_scene(const std::filesystem::path& path);
void write_scene(const std::filesystem::path& path, const SceneSpec& scene);

AugmentationParams read_params(const std::filesystem::path& path);
void write_params(const std::filesystem::path& path, const AugmentationParams& params);

/// Manifest: one `crc32_hex  basename` line per file, in the given order.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::filesystem::path>& files);

/// Binary PGM of the occupancy plane, scaled so any occupied cell is
/// clearly brighter than an empty one.
void write_occupancy_pgm(const std::filesystem::path& path, const BevFeatureGrid& grid);

}  // namespace cff

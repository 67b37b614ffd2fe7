#pragma once

#include <cstdint>
#include <vector>

#include "cff/depth_completion.hpp"
#include "cff/errors.hpp"
#include "cff/geometry.hpp"
#include "cff/heatmap.hpp"

namespace cff {

/// Yaw-rotated box obstacle. size is the full extent along the box's local
/// x/y/z axes.
struct BoxSpec {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Vector3d size = Eigen::Vector3d::Ones();
    double yaw = 0.0;
    int class_id = 0;
};

/// A synthetic scene: boxes over an optional ground plane, clipped to a
/// square of half-width `extent` around the origin. Surfaces outside the
/// extent do not exist; rays pass through.
struct SceneSpec {
    std::vector<BoxSpec> boxes;
    bool has_ground = false;
    double ground_z = 0.0;
    double extent = 100.0;

    void validate() const;
};

/// Spinning-scanner model: one ray per (beam elevation, azimuth step).
struct LidarConfig {
    std::vector<double> beam_elevations;  // radians
    double azimuth_resolution = 0.0034906585039886591;  // 0.2 degrees
    double max_range = 70.0;
    Eigen::Vector3d origin = {0.0, 0.0, 1.8};
    double noise_sigma = 0.0;  // Gaussian range noise, meters

    void validate() const;

    /// 32 beams spanning elevations -30 to +10 degrees.
    static LidarConfig default32();
};

/// Casts every (beam, azimuth) ray against the scene and keeps the nearest
/// hit within max range. Output order is beam-major, azimuth-minor.
/// Intensity marks the surface kind: 0.5 for boxes, 0.2 for ground. With
/// noise_sigma > 0 each hit's range is perturbed by seeded Gaussian noise.
PointCloud raycast_lidar(const SceneSpec& scene, const LidarConfig& lc, uint64_t seed);

/// Ground-truth depth at heatmap resolution: casts a ray through each grid
/// pixel's center and records the nearest surface's camera-frame z. Misses
/// get the sentinel value and mask = false.
DenseDepthMap render_depth(const SceneSpec& scene, const CameraCalibration& calib,
                           int stride, double sentinel = kSentinelDepth);

/// Synthetic detection heatmap: a Gaussian splat per visible box center on
/// its class channel, sigma = max(1, projected box diagonal / 6) grid
/// pixels, truncated at 3 sigma, overlaps resolved by per-pixel max. The
/// splat peak is exactly 1 at the grid pixel containing the projected
/// center.
KeypointHeatmap render_heatmap(const SceneSpec& scene, const CameraCalibration& calib,
                               int stride, int num_classes);

/// Synthetic backbone features, K + 2 channels: one-hot class of the box
/// whose splat value dominates the pixel (earliest box wins ties, all
/// zeros where no splat reaches), then the pixel center's normalized image
/// coordinates (u / width, v / height).
FeatureMap render_features(const SceneSpec& scene, const CameraCalibration& calib,
                           int stride, int num_classes);

/// n outward-facing cameras evenly spaced on a circle of the given radius,
/// optical axes horizontal. Optical frame: z forward, x right, y down.
std::vector<CameraCalibration> make_camera_ring(int n, int width, int height,
                                                double focal, double cam_height,
                                                double radius);

}  // namespace cff

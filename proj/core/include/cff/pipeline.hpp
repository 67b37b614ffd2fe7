#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cff/augment.hpp"
#include "cff/bev.hpp"
#include "cff/depth_completion.hpp"
#include "cff/geometry.hpp"
#include "cff/heatmap.hpp"

namespace cff {

/// One camera's inputs for a frame. depth_override, when set, replaces the
/// render-and-complete depth stage; it must match the heatmap's grid size.
struct CameraFrame {
    std::string name;
    CameraCalibration calib;
    KeypointHeatmap heatmap;
    FeatureMap features;
    std::optional<DenseDepthMap> depth_override;
};

struct FrameInput {
    PointCloud cloud;
    std::vector<CameraFrame> cameras;
    BevGridConfig grid;
    DepthFillConfig depth_cfg;
    std::optional<AugmentationParams> augment;
    double threshold = 0.1;
};

/// Per-frame accounting. Conservation holds exactly:
/// selected = lifted + guard_dropped, lifted = pooled + range_dropped.
struct FrameStats {
    std::vector<long> pixels_per_camera;
    long selected = 0;
    long lifted = 0;
    long guard_dropped = 0;  // selected pixels rejected by the depth mask
    long range_dropped = 0;  // lifted points outside the detection range
    long pooled = 0;
    long cells_occupied = 0;
    double depth_ms = 0.0;
    double select_ms = 0.0;
    double lift_ms = 0.0;
    double pool_ms = 0.0;
    double rasterize_ms = 0.0;

    /// Selection through pooling; excludes the threshold-independent depth
    /// completion and the LiDAR rasterization.
    double projection_ms() const { return select_ms + lift_ms + pool_ms; }
};

struct FuseResult {
    BevFeatureGrid camera;
    BevFeatureGrid lidar;
    BevFeatureGrid fused;
    FrameStats stats;
};

/// Runs the full frame: per camera render sparse depth from the
/// UNAUGMENTED cloud, complete it, select pixels, lift them; then union
/// pseudo-points across cameras, replay augmentation (cloud and
/// pseudo-points) when params are present, range-filter, max-pool,
/// rasterize the (augmented) cloud, and concatenate camera-first.
/// Deterministic given inputs. A failure inside one camera's stages is
/// rethrown with a diagnostic naming that camera.
FuseResult fuse_frame(const FrameInput& fi);

struct SweepRow {
    double threshold = 0.0;
    long pixels = 0;          // pixels selected across all cameras
    double latency_ms = 0.0;  // median projection latency over the reps
    FrameStats stats;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double depth_ms = 0.0;  // completion cost, threshold-independent
};

/// Times the projection path (select, lift, pool) at each threshold,
/// median of `reps` runs, rows in the given order. Depth completion runs
/// once up front and is reported separately.
SweepResult threshold_sweep(const FrameInput& fi, const std::vector<double>& thresholds,
                            int reps = 3);

}  // namespace cff

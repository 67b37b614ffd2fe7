#pragma once

#include <cstdint>
#include <vector>

#include "cff/depth_completion.hpp"
#include "cff/errors.hpp"
#include "cff/geometry.hpp"
#include "cff/heatmap.hpp"

namespace cff {

/// A selected camera pixel lifted into the shared 3D frame. Carries the
/// class/score pair from the heatmap plus the feature vector sampled at
/// the source pixel.
struct FeaturePseudoPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    int class_id = 0;
    float score = 0.0f;
    std::vector<float> feature;
};

/// Axis-aligned BEV grid extents. Cells are indexed by
/// ix = floor((x - x_min) / cell_size), iy likewise from y; ranges are
/// closed below and open above.
struct BevGridConfig {
    double x_min = -54.0;
    double x_max = 54.0;
    double y_min = -54.0;
    double y_max = 54.0;
    double z_min = -5.0;
    double z_max = 3.0;
    double cell_size = 0.6;

    int nx() const;
    int ny() const;

    /// Throws InvalidRangeError unless bounds are ordered, cell_size is
    /// positive, and both extents are integer multiples of cell_size.
    void validate() const;

    bool contains(double x, double y, double z) const {
        return x >= x_min && x < x_max && y >= y_min && y < y_max &&
               z >= z_min && z < z_max;
    }

    int cell_x(double x) const { return static_cast<int>((x - x_min) / cell_size); }
    int cell_y(double y) const { return static_cast<int>((y - y_min) / cell_size); }
};

/// Dense BEV feature grid. values is laid out [channel][iy][ix]; occupancy
/// counts the points pooled into each cell.
struct BevFeatureGrid {
    int nx = 0;
    int ny = 0;
    int channels = 0;
    std::vector<float> values;
    std::vector<int32_t> occupancy;

    BevFeatureGrid() = default;
    BevFeatureGrid(int nx_, int ny_, int channels_)
        : nx(nx_), ny(ny_), channels(channels_),
          values(size_t(channels_) * ny_ * nx_, 0.0f),
          occupancy(size_t(ny_) * nx_, 0) {}

    float& at(int c, int iy, int ix) {
        return values[(size_t(c) * ny + iy) * nx + ix];
    }
    float at(int c, int iy, int ix) const {
        return values[(size_t(c) * ny + iy) * nx + ix];
    }
    int32_t count(int iy, int ix) const { return occupancy[size_t(iy) * nx + ix]; }
};

struct LiftResult {
    std::vector<FeaturePseudoPoint> points;
    int guard_dropped = 0;  // pixels rejected by the completion mask
};

/// Back-projects selected pixels through the dense depth map into world
/// space. Pixel (u, v) at heatmap stride s reads depth at (u, v) and lifts
/// the image point ((u + 0.5) * s, (v + 0.5) * s). Pixels whose depth is
/// masked out are dropped and counted, never lifted.
LiftResult lift_pixels(const std::vector<SelectedPixel>& pixels,
                       const DenseDepthMap& depth, int stride,
                       const CameraCalibration& calib);

/// Keeps the points inside the grid volume. Bounds are closed below, open
/// above on all three axes.
std::vector<FeaturePseudoPoint> range_filter(std::vector<FeaturePseudoPoint> points,
                                             const BevGridConfig& grid);

/// Pools pseudo-point features into the grid, channel-wise maximum per
/// cell. Every input point must already lie inside the grid volume;
/// a point outside throws PointOutOfRangeError. All points must share the
/// feature width, which becomes the grid channel count.
BevFeatureGrid bev_max_pool(const std::vector<FeaturePseudoPoint>& points,
                            const BevGridConfig& grid);

/// Rasterizes a raw cloud into 4 fixed channels per cell:
/// [log1p(count), max z, mean intensity, mean z]. Points outside the grid
/// volume are skipped. Accumulation runs in input order at double
/// precision.
BevFeatureGrid rasterize_lidar_bev(const PointCloud& cloud, const BevGridConfig& grid);

/// Concatenates two grids along the channel axis, camera grid first.
/// Occupancy becomes the elementwise max of the two counts. Throws
/// DimensionMismatchError on differing spatial shapes.
BevFeatureGrid concat_bev(const BevFeatureGrid& camera, const BevFeatureGrid& lidar);

}  // namespace cff

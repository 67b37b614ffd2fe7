#include "cff/bev.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cff {

namespace {

int cells_along(double lo, double hi, double cell, const char* axis) {
    const double span = (hi - lo) / cell;
    const double rounded = std::round(span);
    if (std::abs(span - rounded) > 1e-6 || rounded < 1.0) {
        throw InvalidRangeError(std::string("bev grid: ") + axis +
                                " extent is not a positive multiple of cell_size");
    }
    return static_cast<int>(rounded);
}

}  // namespace

int BevGridConfig::nx() const { return cells_along(x_min, x_max, cell_size, "x"); }
int BevGridConfig::ny() const { return cells_along(y_min, y_max, cell_size, "y"); }

void BevGridConfig::validate() const {
    if (!(cell_size > 0.0)) {
        throw InvalidRangeError("bev grid: cell_size must be positive");
    }
    if (!(x_min < x_max) || !(y_min < y_max) || !(z_min < z_max)) {
        throw InvalidRangeError("bev grid: bounds must be ordered min < max");
    }
    nx();
    ny();
}

LiftResult lift_pixels(const std::vector<SelectedPixel>& pixels,
                       const DenseDepthMap& depth, int stride,
                       const CameraCalibration& calib) {
    if (stride < 1) throw InvalidRangeError("lift_pixels: stride must be >= 1");
    LiftResult out;
    out.points.reserve(pixels.size());
    for (const SelectedPixel& px : pixels) {
        if (px.u < 0 || px.u >= depth.width || px.v < 0 || px.v >= depth.height) {
            throw DimensionMismatchError(
                "lift_pixels: pixel (" + std::to_string(px.u) + ", " +
                std::to_string(px.v) + ") outside depth map " +
                std::to_string(depth.width) + "x" + std::to_string(depth.height));
        }
        if (!depth.mask_at(px.u, px.v)) {
            ++out.guard_dropped;
            continue;
        }
        const double u_img = (px.u + 0.5) * stride;
        const double v_img = (px.v + 0.5) * stride;
        const Eigen::Vector3d p =
            image_to_world(u_img, v_img, depth.at(px.u, px.v), calib);
        FeaturePseudoPoint fp;
        fp.x = p.x();
        fp.y = p.y();
        fp.z = p.z();
        fp.class_id = px.class_id;
        fp.score = px.score;
        fp.feature = px.feature;
        out.points.push_back(std::move(fp));
    }
    return out;
}

std::vector<FeaturePseudoPoint> range_filter(std::vector<FeaturePseudoPoint> points,
                                             const BevGridConfig& grid) {
    grid.validate();
    std::erase_if(points, [&](const FeaturePseudoPoint& p) {
        return !grid.contains(p.x, p.y, p.z);
    });
    return points;
}

BevFeatureGrid bev_max_pool(const std::vector<FeaturePseudoPoint>& points,
                            const BevGridConfig& grid) {
    grid.validate();
    const int nx = grid.nx();
    const int ny = grid.ny();
    int channels = 0;
    for (const FeaturePseudoPoint& p : points) {
        if (channels == 0) {
            channels = static_cast<int>(p.feature.size());
        } else if (static_cast<int>(p.feature.size()) != channels) {
            throw DimensionMismatchError(
                "bev_max_pool: feature width " + std::to_string(p.feature.size()) +
                " differs from " + std::to_string(channels));
        }
    }
    BevFeatureGrid out(nx, ny, channels);
    for (const FeaturePseudoPoint& p : points) {
        if (!grid.contains(p.x, p.y, p.z)) {
            throw PointOutOfRangeError(
                "bev_max_pool: point (" + std::to_string(p.x) + ", " +
                std::to_string(p.y) + ", " + std::to_string(p.z) +
                ") outside grid volume");
        }
        const int ix = grid.cell_x(p.x);
        const int iy = grid.cell_y(p.y);
        const size_t cell = size_t(iy) * nx + ix;
        if (out.occupancy[cell] == 0) {
            for (int c = 0; c < channels; ++c) out.at(c, iy, ix) = p.feature[c];
        } else {
            for (int c = 0; c < channels; ++c) {
                out.at(c, iy, ix) = std::max(out.at(c, iy, ix), p.feature[c]);
            }
        }
        ++out.occupancy[cell];
    }
    return out;
}

BevFeatureGrid rasterize_lidar_bev(const PointCloud& cloud, const BevGridConfig& grid) {
    grid.validate();
    const int nx = grid.nx();
    const int ny = grid.ny();
    BevFeatureGrid out(nx, ny, 4);
    std::vector<double> max_z(size_t(ny) * nx, 0.0);
    std::vector<double> sum_i(size_t(ny) * nx, 0.0);
    std::vector<double> sum_z(size_t(ny) * nx, 0.0);
    for (const LidarPoint& p : cloud.points) {
        if (!grid.contains(p.x, p.y, p.z)) continue;
        const size_t cell = size_t(grid.cell_y(p.y)) * nx + grid.cell_x(p.x);
        if (out.occupancy[cell] == 0 || p.z > max_z[cell]) max_z[cell] = p.z;
        sum_i[cell] += p.intensity;
        sum_z[cell] += p.z;
        ++out.occupancy[cell];
    }
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const size_t cell = size_t(iy) * nx + ix;
            const int32_t n = out.occupancy[cell];
            if (n == 0) continue;
            out.at(0, iy, ix) = static_cast<float>(std::log1p(double(n)));
            out.at(1, iy, ix) = static_cast<float>(max_z[cell]);
            out.at(2, iy, ix) = static_cast<float>(sum_i[cell] / n);
            out.at(3, iy, ix) = static_cast<float>(sum_z[cell] / n);
        }
    }
    return out;
}

BevFeatureGrid concat_bev(const BevFeatureGrid& camera, const BevFeatureGrid& lidar) {
    if (camera.nx != lidar.nx || camera.ny != lidar.ny) {
        throw DimensionMismatchError(
            "concat_bev: grid shapes differ, " + std::to_string(camera.nx) + "x" +
            std::to_string(camera.ny) + " vs " + std::to_string(lidar.nx) + "x" +
            std::to_string(lidar.ny));
    }
    BevFeatureGrid out(camera.nx, camera.ny, camera.channels + lidar.channels);
    std::copy(camera.values.begin(), camera.values.end(), out.values.begin());
    std::copy(lidar.values.begin(), lidar.values.end(),
              out.values.begin() + camera.values.size());
    for (size_t i = 0; i < out.occupancy.size(); ++i) {
        out.occupancy[i] = std::max(camera.occupancy[i], lidar.occupancy[i]);
    }
    return out;
}

}  // namespace cff

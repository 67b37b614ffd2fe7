#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cff/errors.hpp"

namespace cff {

/// Pinhole intrinsics plus the rigid camera-from-world transform for one
/// camera. Depth is always camera-frame z, not ray length.
struct CameraCalibration {
    double fx = 0.0;  ///< focal length, pixels
    double fy = 0.0;
    double cx = 0.0;  ///< principal point, pixels
    double cy = 0.0;
    int width = 0;  ///< image size, pixels
    int height = 0;
    /// 4x4 rigid transform (rotation + translation in meters), row-major
    /// convention: p_cam = R * p_world + t.
    Eigen::Matrix4d cam_from_world = Eigen::Matrix4d::Identity();

    /// Throws InvalidRangeError unless fx,fy > 0, the principal point lies
    /// inside the image, and the rotation block is orthonormal with
    /// determinant +1 (to 1e-9).
    void validate() const;

    Eigen::Matrix3d rotation() const { return cam_from_world.topLeftCorner<3, 3>(); }
    Eigen::Vector3d translation() const { return cam_from_world.topRightCorner<3, 1>(); }
    /// Camera center in world coordinates.
    Eigen::Vector3d center() const { return -rotation().transpose() * translation(); }
};

struct LidarPoint {
    double x = 0.0;  ///< meters, world frame
    double y = 0.0;
    double z = 0.0;
    double intensity = 0.0;  ///< unitless, [0, 1]
};

struct PointCloud {
    std::vector<LidarPoint> points;

    /// Throws InvalidRangeError on any non-finite coordinate.
    void validate() const;
};

/// Per-pixel metric depth at feature-grid resolution; 0 means "no sample".
struct SparseDepthMap {
    int width = 0;  ///< grid size at feature stride
    int height = 0;
    std::vector<double> depth;

    SparseDepthMap() = default;
    SparseDepthMap(int w, int h) : width(w), height(h), depth(size_t(w) * h, 0.0) {}

    double at(int u, int v) const { return depth[size_t(v) * width + u]; }
    double& at(int u, int v) { return depth[size_t(v) * width + u]; }
    bool valid(int u, int v) const { return at(u, v) > 0.0; }
    double valid_fraction() const;
};

/// Image-plane position with the camera-frame z that produced it.
struct ImagePoint {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
};

/// Rigid transform into the camera frame: R * p + t.
Eigen::Vector3d world_to_camera(const Eigen::Vector3d& p, const CameraCalibration& calib);

/// Pinhole projection of a camera-frame point. No bounds clamp; the caller
/// filters. Throws BehindCameraError if pc.z <= 0.
ImagePoint camera_to_image(const Eigen::Vector3d& pc, const CameraCalibration& calib);

/// Inverse of camera_to_image composed with world_to_camera. Throws
/// NonPositiveDepthError if depth <= 0.
Eigen::Vector3d image_to_world(double u, double v, double depth,
                               const CameraCalibration& calib);

/// Projects every in-frustum LiDAR point to the feature grid (pixel
/// (floor(u/s), floor(v/s))); collisions keep the minimum depth. Points with
/// z <= 0 or projecting outside [0,width)x[0,height) are dropped.
SparseDepthMap render_sparse_depth(const PointCloud& cloud, const CameraCalibration& calib,
                                   int stride);

}  // namespace cff

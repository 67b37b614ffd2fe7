#include "cff/geometry.hpp"

#include <cmath>

namespace cff {

void CameraCalibration::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) {
        throw InvalidRangeError("calibration: focal lengths must be positive");
    }
    if (width <= 0 || height <= 0) {
        throw InvalidRangeError("calibration: image size must be positive");
    }
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
        throw InvalidRangeError("calibration: principal point outside image");
    }
    const Eigen::Matrix3d r = rotation();
    const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity())
                             .cwiseAbs()
                             .maxCoeff();
    if (ortho > 1e-9) {
        throw InvalidRangeError("calibration: rotation block not orthonormal");
    }
    if (std::abs(r.determinant() - 1.0) > 1e-9) {
        throw InvalidRangeError("calibration: rotation determinant must be +1");
    }
    const Eigen::RowVector4d bottom = cam_from_world.row(3);
    if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-9) {
        throw InvalidRangeError("calibration: last transform row must be [0 0 0 1]");
    }
}

void PointCloud::validate() const {
    for (const LidarPoint& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
            !std::isfinite(p.intensity)) {
            throw InvalidRangeError("point cloud contains non-finite values");
        }
    }
}

double SparseDepthMap::valid_fraction() const {
    if (depth.empty()) return 0.0;
    size_t n = 0;
    for (double d : depth) {
        if (d > 0.0) ++n;
    }
    return static_cast<double>(n) / static_cast<double>(depth.size());
}

Eigen::Vector3d world_to_camera(const Eigen::Vector3d& p, const CameraCalibration& calib) {
    return calib.rotation() * p + calib.translation();
}

ImagePoint camera_to_image(const Eigen::Vector3d& pc, const CameraCalibration& calib) {
    if (!(pc.z() > 0.0)) {
        throw BehindCameraError("camera_to_image: point has non-positive z");
    }
    return ImagePoint{calib.fx * pc.x() / pc.z() + calib.cx,
                      calib.fy * pc.y() / pc.z() + calib.cy, pc.z()};
}

Eigen::Vector3d image_to_world(double u, double v, double depth,
                               const CameraCalibration& calib) {
    if (!(depth > 0.0)) {
        throw NonPositiveDepthError("image_to_world: depth must be positive");
    }
    const Eigen::Vector3d pc((u - calib.cx) / calib.fx * depth,
                             (v - calib.cy) / calib.fy * depth, depth);
    return calib.rotation().transpose() * (pc - calib.translation());
}

SparseDepthMap render_sparse_depth(const PointCloud& cloud, const CameraCalibration& calib,
                                   int stride) {
    if (stride < 1) {
        throw InvalidRangeError("render_sparse_depth: stride must be >= 1");
    }
    SparseDepthMap map(calib.width / stride, calib.height / stride);
    const Eigen::Matrix3d r = calib.rotation();
    const Eigen::Vector3d t = calib.translation();
    for (const LidarPoint& p : cloud.points) {
        const Eigen::Vector3d pc = r * Eigen::Vector3d(p.x, p.y, p.z) + t;
        if (!(pc.z() > 0.0)) continue;
        const double u = calib.fx * pc.x() / pc.z() + calib.cx;
        const double v = calib.fy * pc.y() / pc.z() + calib.cy;
        if (u < 0.0 || u >= calib.width || v < 0.0 || v >= calib.height) continue;
        const int gu = static_cast<int>(u) / stride;
        const int gv = static_cast<int>(v) / stride;
        if (gu >= map.width || gv >= map.height) continue;
        double& cell = map.at(gu, gv);
        if (cell == 0.0 || pc.z() < cell) cell = pc.z();
    }
    return map;
}

}  // namespace cff

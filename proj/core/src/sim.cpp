#include "cff/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cff/random.hpp"

namespace cff {

namespace {

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    double intensity = 0.0;
    bool valid = false;
};

// Slab intersection in the box's local frame. Returns the smallest
// positive ray parameter, or the exit parameter when the origin is inside.
bool ray_box(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
             const BoxSpec& box, double* t_out) {
    const double c = std::cos(box.yaw);
    const double s = std::sin(box.yaw);
    const Eigen::Vector3d rel = origin - box.center;
    const Eigen::Vector3d o(c * rel.x() + s * rel.y(), -s * rel.x() + c * rel.y(), rel.z());
    const Eigen::Vector3d d(c * dir.x() + s * dir.y(), -s * dir.x() + c * dir.y(), dir.z());
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
        const double half = box.size[axis] * 0.5;
        if (d[axis] == 0.0) {
            if (o[axis] < -half || o[axis] > half) return false;
            continue;
        }
        double t1 = (-half - o[axis]) / d[axis];
        double t2 = (half - o[axis]) / d[axis];
        if (t1 > t2) std::swap(t1, t2);
        t_near = std::max(t_near, t1);
        t_far = std::min(t_far, t2);
        if (t_near > t_far) return false;
    }
    if (t_far <= 0.0) return false;
    *t_out = t_near > 0.0 ? t_near : t_far;
    return true;
}

bool within_extent(const Eigen::Vector3d& p, double extent) {
    return std::abs(p.x()) <= extent && std::abs(p.y()) <= extent;
}

// Nearest surviving scene intersection along origin + t * dir, t > 0.
// Candidate hits outside the scene extent are discarded individually.
Hit cast_ray(const SceneSpec& scene, const Eigen::Vector3d& origin,
             const Eigen::Vector3d& dir) {
    Hit hit;
    for (const BoxSpec& box : scene.boxes) {
        double t = 0.0;
        if (!ray_box(origin, dir, box, &t)) continue;
        if (t >= hit.t) continue;
        if (!within_extent(origin + t * dir, scene.extent)) continue;
        hit.t = t;
        hit.intensity = 0.5;
        hit.valid = true;
    }
    if (scene.has_ground && dir.z() != 0.0) {
        const double t = (scene.ground_z - origin.z()) / dir.z();
        if (t > 0.0 && t < hit.t && within_extent(origin + t * dir, scene.extent)) {
            hit.t = t;
            hit.intensity = 0.2;
            hit.valid = true;
        }
    }
    return hit;
}

struct Splat {
    int pu = 0;
    int pv = 0;
    double sigma = 1.0;
    int class_id = 0;
};

// Projects each box center; boxes behind the camera or off-image yield no
// splat. sigma scales with the box's projected diagonal in grid pixels.
std::vector<Splat> project_splats(const SceneSpec& scene, const CameraCalibration& calib,
                                  int stride) {
    std::vector<Splat> splats;
    for (const BoxSpec& box : scene.boxes) {
        const Eigen::Vector3d pc = world_to_camera(box.center, calib);
        if (pc.z() <= 0.0) continue;
        const ImagePoint img = camera_to_image(pc, calib);
        if (img.u < 0.0 || img.u >= calib.width || img.v < 0.0 || img.v >= calib.height) {
            continue;
        }
        Splat sp;
        sp.pu = static_cast<int>(img.u / stride);
        sp.pv = static_cast<int>(img.v / stride);
        const double diag_px =
            box.size.norm() * 0.5 * (calib.fx + calib.fy) / (pc.z() * stride);
        sp.sigma = std::max(1.0, diag_px / 6.0);
        sp.class_id = box.class_id;
        splats.push_back(sp);
    }
    return splats;
}

void check_classes(const SceneSpec& scene, int num_classes) {
    for (const BoxSpec& box : scene.boxes) {
        if (box.class_id >= num_classes) {
            throw InvalidRangeError("scene: class_id " + std::to_string(box.class_id) +
                                    " outside [0, " + std::to_string(num_classes) + ")");
        }
    }
}

}  // namespace

void SceneSpec::validate() const {
    for (const BoxSpec& box : boxes) {
        if (!(box.size.x() > 0.0) || !(box.size.y() > 0.0) || !(box.size.z() > 0.0)) {
            throw InvalidRangeError("scene: box sizes must be positive");
        }
        if (box.class_id < 0) {
            throw InvalidRangeError("scene: class_id must be >= 0");
        }
        if (!std::isfinite(box.yaw)) {
            throw InvalidRangeError("scene: box yaw must be finite");
        }
    }
    if (!(extent > 0.0)) {
        throw InvalidRangeError("scene: extent must be positive");
    }
}

void LidarConfig::validate() const {
    if (beam_elevations.empty()) {
        throw InvalidRangeError("lidar config: need at least one beam");
    }
    if (!(azimuth_resolution > 0.0)) {
        throw InvalidRangeError("lidar config: azimuth_resolution must be positive");
    }
    if (!(max_range > 0.0)) {
        throw InvalidRangeError("lidar config: max_range must be positive");
    }
    if (noise_sigma < 0.0) {
        throw InvalidRangeError("lidar config: noise_sigma must be >= 0");
    }
}

LidarConfig LidarConfig::default32() {
    LidarConfig lc;
    constexpr int kBeams = 32;
    const double lo = -30.0 * std::numbers::pi / 180.0;
    const double hi = 10.0 * std::numbers::pi / 180.0;
    lc.beam_elevations.reserve(kBeams);
    for (int i = 0; i < kBeams; ++i) {
        lc.beam_elevations.push_back(lo + (hi - lo) * i / (kBeams - 1));
    }
    return lc;
}

PointCloud raycast_lidar(const SceneSpec& scene, const LidarConfig& lc, uint64_t seed) {
    scene.validate();
    lc.validate();
    const int n_az = std::max<int>(
        1, static_cast<int>(std::llround(2.0 * std::numbers::pi / lc.azimuth_resolution)));
    SplitMix64 rng(seed);
    PointCloud cloud;
    for (double elevation : lc.beam_elevations) {
        const double ce = std::cos(elevation);
        const double se = std::sin(elevation);
        for (int i = 0; i < n_az; ++i) {
            const double az = i * lc.azimuth_resolution;
            const Eigen::Vector3d dir(ce * std::cos(az), ce * std::sin(az), se);
            Hit hit = cast_ray(scene, lc.origin, dir);
            if (!hit.valid || hit.t > lc.max_range) continue;
            double range = hit.t;
            if (lc.noise_sigma > 0.0) range += rng.gaussian(0.0, lc.noise_sigma);
            const Eigen::Vector3d p = lc.origin + range * dir;
            cloud.points.push_back({p.x(), p.y(), p.z(), hit.intensity});
        }
    }
    return cloud;
}

DenseDepthMap render_depth(const SceneSpec& scene, const CameraCalibration& calib,
                           int stride, double sentinel) {
    scene.validate();
    calib.validate();
    if (stride < 1) throw InvalidRangeError("render_depth: stride must be >= 1");
    const int gw = calib.width / stride;
    const int gh = calib.height / stride;
    DenseDepthMap out(gw, gh);
    const Eigen::Matrix3d r_t = calib.rotation().transpose();
    const Eigen::Vector3d center = calib.center();
    for (int v = 0; v < gh; ++v) {
        for (int u = 0; u < gw; ++u) {
            const double iu = (u + 0.5) * stride;
            const double iv = (v + 0.5) * stride;
            // z-component 1 makes the ray parameter equal camera-frame depth
            const Eigen::Vector3d dir_c((iu - calib.cx) / calib.fx,
                                        (iv - calib.cy) / calib.fy, 1.0);
            const Hit hit = cast_ray(scene, center, r_t * dir_c);
            const size_t idx = size_t(v) * gw + u;
            if (hit.valid) {
                out.depth[idx] = hit.t;
                out.in_range[idx] = 1;
            } else {
                out.depth[idx] = sentinel;
                out.in_range[idx] = 0;
            }
        }
    }
    return out;
}

KeypointHeatmap render_heatmap(const SceneSpec& scene, const CameraCalibration& calib,
                               int stride, int num_classes) {
    scene.validate();
    calib.validate();
    if (stride < 1 || num_classes < 1) {
        throw InvalidRangeError("render_heatmap: stride and num_classes must be >= 1");
    }
    check_classes(scene, num_classes);
    const int gw = calib.width / stride;
    const int gh = calib.height / stride;
    KeypointHeatmap hm(gw, gh, num_classes, stride);
    for (const Splat& sp : project_splats(scene, calib, stride)) {
        const int radius = static_cast<int>(std::ceil(3.0 * sp.sigma));
        for (int dv = -radius; dv <= radius; ++dv) {
            for (int du = -radius; du <= radius; ++du) {
                const int u = sp.pu + du;
                const int v = sp.pv + dv;
                if (u < 0 || u >= gw || v < 0 || v >= gh) continue;
                const double d2 = double(du) * du + double(dv) * dv;
                if (d2 > 9.0 * sp.sigma * sp.sigma) continue;
                const float val =
                    static_cast<float>(std::exp(-d2 / (2.0 * sp.sigma * sp.sigma)));
                float& cell = hm.at(sp.class_id, v, u);
                cell = std::max(cell, val);
            }
        }
    }
    return hm;
}

FeatureMap render_features(const SceneSpec& scene, const CameraCalibration& calib,
                           int stride, int num_classes) {
    scene.validate();
    calib.validate();
    if (stride < 1 || num_classes < 1) {
        throw InvalidRangeError("render_features: stride and num_classes must be >= 1");
    }
    check_classes(scene, num_classes);
    const int gw = calib.width / stride;
    const int gh = calib.height / stride;
    FeatureMap fm(gw, gh, num_classes + 2);
    std::vector<double> best(size_t(gw) * gh, 0.0);
    std::vector<int> best_class(size_t(gw) * gh, -1);
    for (const Splat& sp : project_splats(scene, calib, stride)) {
        const int radius = static_cast<int>(std::ceil(3.0 * sp.sigma));
        for (int dv = -radius; dv <= radius; ++dv) {
            for (int du = -radius; du <= radius; ++du) {
                const int u = sp.pu + du;
                const int v = sp.pv + dv;
                if (u < 0 || u >= gw || v < 0 || v >= gh) continue;
                const double d2 = double(du) * du + double(dv) * dv;
                if (d2 > 9.0 * sp.sigma * sp.sigma) continue;
                const double val = std::exp(-d2 / (2.0 * sp.sigma * sp.sigma));
                const size_t idx = size_t(v) * gw + u;
                // strict > keeps the earliest box on exact ties
                if (val > best[idx]) {
                    best[idx] = val;
                    best_class[idx] = sp.class_id;
                }
            }
        }
    }
    for (int v = 0; v < gh; ++v) {
        for (int u = 0; u < gw; ++u) {
            const size_t idx = size_t(v) * gw + u;
            if (best_class[idx] >= 0) fm.at(best_class[idx], v, u) = 1.0f;
            fm.at(num_classes, v, u) =
                static_cast<float>((u + 0.5) * stride / calib.width);
            fm.at(num_classes + 1, v, u) =
                static_cast<float>((v + 0.5) * stride / calib.height);
        }
    }
    return fm;
}

std::vector<CameraCalibration> make_camera_ring(int n, int width, int height,
                                                double focal, double cam_height,
                                                double radius) {
    if (n < 1) throw InvalidRangeError("camera ring: need at least one camera");
    std::vector<CameraCalibration> rig;
    rig.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double az = 2.0 * std::numbers::pi * i / n;
        const Eigen::Vector3d forward(std::cos(az), std::sin(az), 0.0);
        const Eigen::Vector3d up(0.0, 0.0, 1.0);
        const Eigen::Vector3d right = forward.cross(up);
        const Eigen::Vector3d down = forward.cross(right);
        Eigen::Matrix3d world_from_cam;
        world_from_cam.col(0) = right;
        world_from_cam.col(1) = down;
        world_from_cam.col(2) = forward;
        const Eigen::Vector3d center = radius * Eigen::Vector3d(std::cos(az), std::sin(az), 0.0) +
                                       Eigen::Vector3d(0.0, 0.0, cam_height);
        CameraCalibration calib;
        calib.fx = focal;
        calib.fy = focal;
        calib.cx = width * 0.5;
        calib.cy = height * 0.5;
        calib.width = width;
        calib.height = height;
        calib.cam_from_world = Eigen::Matrix4d::Identity();
        calib.cam_from_world.block<3, 3>(0, 0) = world_from_cam.transpose();
        calib.cam_from_world.block<3, 1>(0, 3) = -(world_from_cam.transpose() * center);
        calib.validate();
        rig.push_back(calib);
    }
    return rig;
}

}  // namespace cff

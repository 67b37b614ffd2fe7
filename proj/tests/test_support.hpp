#pragma once

#include <cmath>
#include <vector>

#include "cff/geometry.hpp"
#include "cff/heatmap.hpp"
#include "cff/random.hpp"
#include "cff/sim.hpp"

namespace cfftest {

inline Eigen::Matrix3d random_rotation(cff::SplitMix64& rng) {
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q[i] = rng.gaussian(0.0, 1.0);
    q.normalize();
    return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).toRotationMatrix();
}

inline cff::CameraCalibration identity_camera(int width, int height, double focal) {
    cff::CameraCalibration calib;
    calib.fx = focal;
    calib.fy = focal;
    calib.cx = width * 0.5;
    calib.cy = height * 0.5;
    calib.width = width;
    calib.height = height;
    calib.cam_from_world = Eigen::Matrix4d::Identity();
    return calib;
}

inline cff::CameraCalibration random_camera(cff::SplitMix64& rng) {
    cff::CameraCalibration calib;
    calib.width = 800;
    calib.height = 448;
    calib.fx = rng.uniform(300.0, 900.0);
    calib.fy = rng.uniform(300.0, 900.0);
    calib.cx = 400.0 + rng.uniform(-30.0, 30.0);
    calib.cy = 224.0 + rng.uniform(-20.0, 20.0);
    calib.cam_from_world = Eigen::Matrix4d::Identity();
    calib.cam_from_world.block<3, 3>(0, 0) = random_rotation(rng);
    calib.cam_from_world.block<3, 1>(0, 3) = Eigen::Vector3d(
        rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    return calib;
}

// Points drawn in the camera frame with z > 0, then mapped to world, so
// every sample projects successfully.
inline Eigen::Vector3d random_point_in_front(cff::SplitMix64& rng,
                                             const cff::CameraCalibration& calib) {
    const double z = rng.uniform(0.2, 90.0);
    const double x = rng.uniform(-0.6, 0.6) * z;
    const double y = rng.uniform(-0.35, 0.35) * z;
    const Eigen::Vector3d pc(x, y, z);
    return calib.rotation().transpose() * (pc - calib.translation());
}

inline cff::KeypointHeatmap random_heatmap(cff::SplitMix64& rng, int w, int h, int k) {
    cff::KeypointHeatmap hm(w, h, k, 4);
    for (float& s : hm.scores) s = static_cast<float>(rng.uniform01());
    // sprinkle exact duplicates so plateau and tie handling is exercised
    const int dups = w * h / 10;
    for (int i = 0; i < dups; ++i) {
        const int u = static_cast<int>(rng.next() % uint64_t(w));
        const int v = static_cast<int>(rng.next() % uint64_t(h));
        const int c = static_cast<int>(rng.next() % uint64_t(k));
        const int du = u + 1 < w ? 1 : -1;
        hm.at(c, v, u + du) = hm.at(c, v, u);
    }
    return hm;
}

inline cff::FeatureMap random_features(cff::SplitMix64& rng, int w, int h, int c) {
    cff::FeatureMap fm(w, h, c);
    for (float& v : fm.values) v = static_cast<float>(rng.uniform(-2.0, 2.0));
    return fm;
}

inline cff::SparseDepthMap random_sparse(cff::SplitMix64& rng, int w, int h,
                                         double density) {
    cff::SparseDepthMap sd(w, h);
    for (double& d : sd.depth) {
        if (rng.uniform01() < density) d = rng.uniform(1.0, 60.0);
    }
    return sd;
}

// A ring of boxes around the origin over a ground plane: the standard
// multi-camera test scene.
inline cff::SceneSpec ring_scene(cff::SplitMix64& rng, int n_boxes, double r_min,
                                 double r_max, int num_classes) {
    cff::SceneSpec scene;
    scene.has_ground = true;
    scene.ground_z = 0.0;
    scene.extent = 80.0;
    for (int i = 0; i < n_boxes; ++i) {
        cff::BoxSpec box;
        const double angle = rng.uniform(0.0, 6.283185307179586);
        const double dist = rng.uniform(r_min, r_max);
        box.center = {dist * std::cos(angle), dist * std::sin(angle),
                      rng.uniform(0.5, 1.3)};
        box.size = {rng.uniform(0.8, 4.0), rng.uniform(0.8, 2.2), rng.uniform(1.0, 2.4)};
        box.yaw = rng.uniform(-3.1, 3.1);
        box.class_id = static_cast<int>(rng.next() % uint64_t(num_classes));
        scene.boxes.push_back(box);
    }
    return scene;
}

}  // namespace cfftest

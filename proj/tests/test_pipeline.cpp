#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "cff/pipeline.hpp"
#include "cff/random.hpp"
#include "cff/sim.hpp"
#include "test_support.hpp"

using namespace cff;

namespace {

// A small but fully populated two-camera frame over a synthetic scene.
FrameInput make_scene_frame(uint64_t seed) {
    SplitMix64 rng(seed);
    const SceneSpec scene = cfftest::ring_scene(rng, 10, 4.0, 25.0, 4);
    LidarConfig lc = LidarConfig::default32();
    lc.azimuth_resolution = 0.02;

    FrameInput fi;
    fi.cloud = raycast_lidar(scene, lc, seed);
    const auto rig = make_camera_ring(2, 320, 192, 150.0, 1.6, 0.5);
    for (size_t i = 0; i < rig.size(); ++i) {
        CameraFrame cam;
        cam.name = "cam" + std::to_string(i);
        cam.calib = rig[i];
        cam.heatmap = render_heatmap(scene, rig[i], 4, 4);
        cam.features = render_features(scene, rig[i], 4, 4);
        fi.cameras.push_back(std::move(cam));
    }
    fi.threshold = 0.25;
    return fi;
}

// Uniform synthetic frame: constant depth override, a handful of hot
// pixels per camera. No scene or completion involved.
FrameInput make_flat_frame(int hot_pixels) {
    FrameInput fi;
    fi.cloud.points.push_back({1.0, 1.0, 0.5, 0.5});
    for (int i = 0; i < 2; ++i) {
        CameraFrame cam;
        cam.name = "flat" + std::to_string(i);
        cam.calib = cfftest::identity_camera(800, 448, 600.0);
        cam.heatmap = KeypointHeatmap(200, 112, 2, 4);
        std::fill(cam.heatmap.scores.begin(), cam.heatmap.scores.end(), 0.05f);
        for (int p = 0; p < hot_pixels; ++p) {
            cam.heatmap.at(0, 3 + p, 7 + 2 * p) = 0.9f;
        }
        cam.features = FeatureMap(200, 112, 3);
        DenseDepthMap depth(200, 112);
        std::fill(depth.depth.begin(), depth.depth.end(), 2.0);
        std::fill(depth.in_range.begin(), depth.in_range.end(), 1);
        cam.depth_override = std::move(depth);
        fi.cameras.push_back(std::move(cam));
    }
    return fi;
}

}  // namespace

TEST_CASE("fuse_frame validates thresholds, cameras, and grid shapes") {
    FrameInput fi = make_flat_frame(2);
    fi.threshold = 1.1;
    CHECK_THROWS_AS(fuse_frame(fi), InvalidRangeError);
    fi.threshold = -0.01;
    CHECK_THROWS_AS(fuse_frame(fi), InvalidRangeError);
    fi.threshold = 0.5;

    FrameInput empty = fi;
    empty.cameras.clear();
    CHECK_THROWS_AS(fuse_frame(empty), InvalidRangeError);

    FrameInput stride_clash = fi;
    stride_clash.cameras[1].heatmap.stride = 8;
    CHECK_THROWS_AS(fuse_frame(stride_clash), DimensionMismatchError);

    FrameInput bad_features = fi;
    bad_features.cameras[0].features = FeatureMap(100, 112, 3);
    CHECK_THROWS_AS(fuse_frame(bad_features), DimensionMismatchError);

    FrameInput bad_override = fi;
    bad_override.cameras[1].depth_override = DenseDepthMap(50, 50);
    CHECK_THROWS_AS(fuse_frame(bad_override), DimensionMismatchError);
}

TEST_CASE("per-camera failures name the camera in the diagnostic") {
    // invalid heatmap score caught during validation
    FrameInput fi = make_flat_frame(1);
    fi.cameras[1].heatmap.scores[0] = 1.5f;
    try {
        fuse_frame(fi);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("flat1") != std::string::npos);
    }

    // empty sparse depth caught during completion
    FrameInput behind;
    behind.cloud.points.push_back({-5.0, 0.0, 1.6, 0.5});  // behind the camera
    CameraFrame cam;
    cam.name = "front";
    cam.calib = make_camera_ring(1, 320, 192, 150.0, 1.6, 0.5)[0];
    cam.heatmap = KeypointHeatmap(80, 48, 1, 4);
    cam.features = FeatureMap(80, 48, 3);
    behind.cameras.push_back(std::move(cam));
    try {
        fuse_frame(behind);
        FAIL("expected a completion error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("front") != std::string::npos);
    }
}

TEST_CASE("frame statistics conserve pixel and point counts exactly") {
    const FrameInput fi = make_scene_frame(91);
    for (double threshold : {0.25, 0.05, 0.0}) {
        FrameInput run = fi;
        run.threshold = threshold;
        const FuseResult out = fuse_frame(run);
        const FrameStats& st = out.stats;
        REQUIRE(st.pixels_per_camera.size() == 2);
        CHECK(st.selected ==
              std::accumulate(st.pixels_per_camera.begin(), st.pixels_per_camera.end(), 0L));
        CHECK(st.selected == st.lifted + st.guard_dropped);
        CHECK(st.lifted == st.pooled + st.range_dropped);
        const long occupancy_total = std::accumulate(
            out.camera.occupancy.begin(), out.camera.occupancy.end(), 0L);
        const long occupied_cells = std::count_if(
            out.camera.occupancy.begin(), out.camera.occupancy.end(),
            [](int32_t n) { return n > 0; });
        CHECK(st.pooled == occupancy_total);
        CHECK(st.cells_occupied == occupied_cells);
        if (threshold == 0.25) CHECK(st.selected > 0);
        if (threshold == 0.0) {
            CHECK(st.selected == 2L * 80 * 48);  // every grid pixel, both cameras
        }
        // fused layout: camera channels first, occupancy is the max
        CHECK(out.fused.channels == out.camera.channels + 4);
        for (size_t i = 0; i < out.fused.occupancy.size(); ++i) {
            REQUIRE(out.fused.occupancy[i] ==
                    std::max(out.camera.occupancy[i], out.lidar.occupancy[i]));
        }
    }
}

TEST_CASE("fuse_frame is deterministic") {
    const FrameInput fi = make_scene_frame(92);
    const FuseResult a = fuse_frame(fi);
    const FuseResult b = fuse_frame(fi);
    CHECK(a.camera.values == b.camera.values);
    CHECK(a.camera.occupancy == b.camera.occupancy);
    CHECK(a.lidar.values == b.lidar.values);
    CHECK(a.fused.values == b.fused.values);
    CHECK(a.stats.selected == b.stats.selected);
    CHECK(a.stats.pooled == b.stats.pooled);
}

TEST_CASE("identity augmentation reproduces the unaugmented frame bitwise") {
    FrameInput fi = make_scene_frame(93);
    const FuseResult plain = fuse_frame(fi);
    fi.augment = AugmentationParams{};  // identity
    const FuseResult with_id = fuse_frame(fi);
    CHECK(plain.camera.values == with_id.camera.values);
    CHECK(plain.camera.occupancy == with_id.camera.occupancy);
    CHECK(plain.lidar.values == with_id.lidar.values);
    CHECK(plain.lidar.occupancy == with_id.lidar.occupancy);
    CHECK(plain.fused.values == with_id.fused.values);
}

TEST_CASE("masked depth pixels become guard drops, far depths range drops") {
    FrameInput fi = make_flat_frame(0);
    // every pixel hot so selection is total
    for (auto& cam : fi.cameras) {
        std::fill(cam.heatmap.scores.begin(), cam.heatmap.scores.end(), 1.0f);
    }
    fi.threshold = 0.5;

    // camera 0: mask off a 10x10 block
    for (int v = 0; v < 10; ++v) {
        for (int u = 0; u < 10; ++u) {
            fi.cameras[0].depth_override->in_range[size_t(v) * 200 + u] = 0;
        }
    }
    // camera 1: push a 5x4 block beyond the grid volume (depth stays valid)
    for (int v = 0; v < 4; ++v) {
        for (int u = 0; u < 5; ++u) {
            fi.cameras[1].depth_override->at(u, v) = 200.0;
        }
    }
    const FuseResult out = fuse_frame(fi);
    const long total = 2L * 200 * 112;
    CHECK(out.stats.selected == total);
    CHECK(out.stats.guard_dropped == 100);
    CHECK(out.stats.lifted == total - 100);
    CHECK(out.stats.range_dropped == 20);
    CHECK(out.stats.pooled == total - 120);
}

TEST_CASE("an exactly known box lands in the analytically predicted cell") {
    // One camera looking along +x, one axis-aligned box, ground-truth depth
    // injected. The lone selected pixel must pool into the cell containing
    // the ray/box intersection, computed here from the near-face plane.
    SceneSpec scene;
    BoxSpec box;
    box.center = {10.0, 0.0, 1.0};
    box.size = {2.0, 2.0, 2.0};
    box.yaw = 0.0;
    box.class_id = 1;
    scene.boxes.push_back(box);

    FrameInput fi;
    fi.cloud.points.push_back({4.0, 0.0, 0.5, 0.5});  // irrelevant filler
    CameraFrame cam;
    cam.name = "front";
    cam.calib = make_camera_ring(1, 320, 192, 150.0, 1.6, 0.5)[0];
    cam.heatmap = render_heatmap(scene, cam.calib, 4, 3);
    cam.features = render_features(scene, cam.calib, 4, 3);
    cam.depth_override = render_depth(scene, cam.calib, 4);
    const CameraCalibration calib = cam.calib;
    fi.cameras.push_back(std::move(cam));
    fi.threshold = 0.95;  // only the unit-score splat center survives

    const FuseResult out = fuse_frame(fi);
    REQUIRE(out.stats.selected == 1);
    REQUIRE(out.stats.pooled == 1);

    // locate the splat-center pixel as the renderer does
    const ImagePoint img = camera_to_image(world_to_camera(box.center, calib), calib);
    const int pu = static_cast<int>(img.u / 4);
    const int pv = static_cast<int>(img.v / 4);

    // intersect the pixel-center ray with the box's near face (x = 9)
    const Eigen::Vector3d dir_c(((pu + 0.5) * 4.0 - calib.cx) / calib.fx,
                                ((pv + 0.5) * 4.0 - calib.cy) / calib.fy, 1.0);
    const Eigen::Vector3d origin = calib.center();
    const Eigen::Vector3d dir = calib.rotation().transpose() * dir_c;
    const double t = (9.0 - origin.x()) / dir.x();
    const Eigen::Vector3d surf = origin + t * dir;
    REQUIRE(std::abs(surf.y()) <= 1.0);  // really on the face
    REQUIRE(std::abs(surf.z() - 1.0) <= 1.0);

    const int ix = fi.grid.cell_x(surf.x());
    const int iy = fi.grid.cell_y(surf.y());
    CHECK(out.camera.count(iy, ix) == 1);
    // one-hot class channel of the pooled feature
    CHECK(out.camera.at(1, iy, ix) == 1.0f);
    CHECK(out.camera.at(0, iy, ix) == 0.0f);
    CHECK(out.camera.at(2, iy, ix) == 0.0f);

    // every other cell is empty
    long occupied = 0;
    for (int32_t n : out.camera.occupancy) occupied += n > 0 ? 1 : 0;
    CHECK(occupied == 1);

    SUBCASE("augmentation replays the same point into the transformed cell") {
        AugmentationParams params;
        params.flip_x = true;
        params.scale = 1.03;
        params.rotation_z = 0.2;
        params.tx = 1.0;
        params.ty = -2.0;
        params.tz = 0.3;
        FrameInput augmented = fi;
        augmented.augment = params;
        const FuseResult aug_out = fuse_frame(augmented);
        const Eigen::Vector3d moved = transform_point(surf, params);
        REQUIRE(augmented.grid.contains(moved.x(), moved.y(), moved.z()));
        CHECK(aug_out.stats.pooled == 1);
        CHECK(aug_out.camera.count(augmented.grid.cell_y(moved.y()),
                                   augmented.grid.cell_x(moved.x())) == 1);
        // the raw cloud is augmented for rasterization with the same params
        const BevFeatureGrid direct =
            rasterize_lidar_bev(apply_to_points(fi.cloud, params), augmented.grid);
        CHECK(aug_out.lidar.values == direct.values);
        CHECK(aug_out.lidar.occupancy == direct.occupancy);
    }
}

TEST_CASE("threshold_sweep rejects bad repetition counts and thresholds") {
    const FrameInput fi = make_flat_frame(1);
    CHECK_THROWS_AS(threshold_sweep(fi, {0.5}, 2), InvalidRangeError);
    CHECK_THROWS_AS(threshold_sweep(fi, {1.5}, 3), InvalidRangeError);
    CHECK_THROWS_AS(threshold_sweep(fi, {-0.5}, 3), InvalidRangeError);
}

TEST_CASE("threshold_sweep keeps row order and shares the depth timing") {
    const FrameInput fi = make_scene_frame(94);
    const std::vector<double> thresholds{0.5, 0.1, 0.05, 0.01, 0.0};
    const SweepResult sweep = threshold_sweep(fi, thresholds, 3);
    REQUIRE(sweep.rows.size() == 5);
    CHECK(sweep.depth_ms > 0.0);
    for (size_t i = 0; i < sweep.rows.size(); ++i) {
        CHECK(sweep.rows[i].threshold == thresholds[i]);
        CHECK(sweep.rows[i].stats.depth_ms == sweep.depth_ms);
        CHECK(sweep.rows[i].pixels == sweep.rows[i].stats.selected);
        if (i > 0) CHECK(sweep.rows[i].pixels >= sweep.rows[i - 1].pixels);
    }
    CHECK(sweep.rows.back().pixels == 2L * 80 * 48);
    CHECK(sweep.rows.front().pixels < sweep.rows.back().pixels);
}

TEST_CASE("sweeping everything costs more than sweeping a few pixels") {
    // Latencies at adjacent thresholds drown in scheduler noise, so compare
    // the extremes: 20 hot pixels against every pixel of two cameras.
    const FrameInput fi = make_flat_frame(10);
    const SweepResult sweep = threshold_sweep(fi, {0.5, 0.0}, 7);
    REQUIRE(sweep.rows.size() == 2);
    CHECK(sweep.rows[0].pixels == 20);
    CHECK(sweep.rows[1].pixels == 2L * 200 * 112);
    CHECK(sweep.rows[1].latency_ms > sweep.rows[0].latency_ms);
}

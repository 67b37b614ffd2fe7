#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "cff/config.hpp"
#include "cff/pipeline.hpp"
#include "cff/random.hpp"
#include "cff/sim.hpp"

namespace {

// One shared synthetic frame so every benchmark sees identical inputs.
struct Fixture {
    cff::RunConfig config;
    cff::SceneSpec scene;
    cff::FrameInput frame;
    std::vector<cff::DenseDepthMap> depths;
    cff::SparseDepthMap sparse{1, 1};

    Fixture() {
        cff::SplitMix64 rng(2024);
        scene.has_ground = true;
        scene.ground_z = 0.0;
        scene.extent = 80.0;
        for (int i = 0; i < 30; ++i) {
            cff::BoxSpec box;
            const double angle = rng.uniform(0.0, 6.283185307179586);
            const double dist = rng.uniform(15.0, 45.0);
            box.center = {dist * std::cos(angle), dist * std::sin(angle),
                          rng.uniform(0.6, 1.2)};
            box.size = {rng.uniform(1.0, 4.0), rng.uniform(1.0, 2.2),
                        rng.uniform(1.2, 2.4)};
            box.yaw = rng.uniform(-3.14, 3.14);
            box.class_id = static_cast<int>(rng.next() % config.num_classes);
            scene.boxes.push_back(box);
        }
        frame.cloud = cff::raycast_lidar(scene, config.lidar(), 7);
        frame.grid = config.grid;
        frame.depth_cfg = config.depth;
        frame.threshold = 0.1;
        const std::vector<cff::CameraCalibration> rig = cff::make_camera_ring(
            config.cameras, config.image_width, config.image_height, config.focal,
            config.cam_height, config.ring_radius);
        for (size_t i = 0; i < rig.size(); ++i) {
            cff::CameraFrame cam;
            cam.name = "cam" + std::to_string(i);
            cam.calib = rig[i];
            cam.heatmap =
                cff::render_heatmap(scene, rig[i], config.stride, config.num_classes);
            cam.features =
                cff::render_features(scene, rig[i], config.stride, config.num_classes);
            frame.cameras.push_back(std::move(cam));
        }
        sparse = cff::render_sparse_depth(frame.cloud, rig[0], config.stride);
        for (const cff::CameraFrame& cam : frame.cameras) {
            const cff::SparseDepthMap sd =
                cff::render_sparse_depth(frame.cloud, cam.calib, config.stride);
            depths.push_back(cff::ipbasic_complete(sd, config.depth));
        }
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

void BM_select(benchmark::State& state) {
    const Fixture& f = fixture();
    const double threshold = state.range(0) / 100.0;
    for (auto _ : state) {
        auto selected = cff::select_pixels(f.frame.cameras[0].heatmap,
                                           f.frame.cameras[0].features, threshold);
        benchmark::DoNotOptimize(selected);
    }
}
BENCHMARK(BM_select)->Arg(50)->Arg(10)->Arg(0);

void BM_ipbasic(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state) {
        auto dense = cff::ipbasic_complete(f.sparse, f.config.depth);
        benchmark::DoNotOptimize(dense);
    }
}
BENCHMARK(BM_ipbasic);

void BM_lift(benchmark::State& state) {
    const Fixture& f = fixture();
    const double threshold = state.range(0) / 100.0;
    const auto selected = cff::select_pixels(f.frame.cameras[0].heatmap,
                                             f.frame.cameras[0].features, threshold);
    for (auto _ : state) {
        auto lifted = cff::lift_pixels(selected, f.depths[0], f.config.stride,
                                       f.frame.cameras[0].calib);
        benchmark::DoNotOptimize(lifted);
    }
    state.counters["pixels"] = static_cast<double>(selected.size());
}
BENCHMARK(BM_lift)->Arg(50)->Arg(10)->Arg(0);

void BM_pool(benchmark::State& state) {
    const Fixture& f = fixture();
    std::vector<cff::FeaturePseudoPoint> points;
    for (size_t i = 0; i < f.frame.cameras.size(); ++i) {
        auto selected = cff::select_pixels(f.frame.cameras[i].heatmap,
                                           f.frame.cameras[i].features,
                                           state.range(0) / 100.0);
        auto lifted =
            cff::lift_pixels(selected, f.depths[i], f.config.stride, f.frame.cameras[i].calib);
        points.insert(points.end(), lifted.points.begin(), lifted.points.end());
    }
    points = cff::range_filter(std::move(points), f.frame.grid);
    for (auto _ : state) {
        auto grid = cff::bev_max_pool(points, f.frame.grid);
        benchmark::DoNotOptimize(grid);
    }
    state.counters["points"] = static_cast<double>(points.size());
}
BENCHMARK(BM_pool)->Arg(50)->Arg(10)->Arg(0);

void BM_fuse(benchmark::State& state) {
    const Fixture& f = fixture();
    cff::FrameInput fi = f.frame;
    fi.threshold = state.range(0) / 100.0;
    for (auto _ : state) {
        auto result = cff::fuse_frame(fi);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_fuse)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

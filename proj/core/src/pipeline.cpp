#include "cff/pipeline.hpp"

#include <algorithm>
#include <chrono>

namespace cff {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string camera_label(const CameraFrame& cam, size_t index) {
    return cam.name.empty() ? "camera " + std::to_string(index)
                            : "camera '" + cam.name + "'";
}

void validate_input(const FrameInput& fi) {
    if (fi.cameras.empty()) {
        throw InvalidRangeError("fuse_frame: need at least one camera");
    }
    if (fi.threshold < 0.0 || fi.threshold > 1.0) {
        throw InvalidRangeError("fuse_frame: threshold must be in [0, 1]");
    }
    fi.grid.validate();
    fi.depth_cfg.validate();
    fi.cloud.validate();
    const int stride = fi.cameras.front().heatmap.stride;
    for (size_t i = 0; i < fi.cameras.size(); ++i) {
        const CameraFrame& cam = fi.cameras[i];
        try {
            cam.calib.validate();
            cam.heatmap.validate();
        } catch (const Error& e) {
            throw Error(camera_label(cam, i) + ": " + e.what());
        }
        if (cam.heatmap.stride != stride) {
            throw DimensionMismatchError("fuse_frame: cameras disagree on heatmap stride");
        }
        if (cam.features.width != cam.heatmap.width ||
            cam.features.height != cam.heatmap.height) {
            throw DimensionMismatchError("fuse_frame: camera '" + cam.name +
                                         "' feature map does not match its heatmap");
        }
        if (cam.depth_override &&
            (cam.depth_override->width != cam.heatmap.width ||
             cam.depth_override->height != cam.heatmap.height)) {
            throw DimensionMismatchError("fuse_frame: camera '" + cam.name +
                                         "' depth override does not match its heatmap");
        }
    }
}

// Completed depth per camera; the cloud here is always the unaugmented
// one, since depth lives in the original sensor geometry.
std::vector<DenseDepthMap> complete_depths(const FrameInput& fi, double* depth_ms) {
    std::vector<DenseDepthMap> depths;
    depths.reserve(fi.cameras.size());
    const auto start = Clock::now();
    for (size_t i = 0; i < fi.cameras.size(); ++i) {
        const CameraFrame& cam = fi.cameras[i];
        try {
            if (cam.depth_override) {
                depths.push_back(*cam.depth_override);
            } else {
                const SparseDepthMap sparse =
                    render_sparse_depth(fi.cloud, cam.calib, cam.heatmap.stride);
                depths.push_back(ipbasic_complete(sparse, fi.depth_cfg));
            }
        } catch (const Error& e) {
            throw Error(camera_label(cam, i) + ": " + e.what());
        }
    }
    *depth_ms = ms_since(start);
    return depths;
}

// Selection through pooling at one threshold. Returns the camera BEV grid
// and fills the projection-side stats fields.
BevFeatureGrid run_projection(const FrameInput& fi,
                              const std::vector<DenseDepthMap>& depths,
                              double threshold, FrameStats* stats) {
    stats->pixels_per_camera.clear();
    stats->selected = 0;
    stats->lifted = 0;
    stats->guard_dropped = 0;

    std::vector<FeaturePseudoPoint> pseudo;
    double select_ms = 0.0;
    double lift_ms = 0.0;
    for (size_t i = 0; i < fi.cameras.size(); ++i) {
        const CameraFrame& cam = fi.cameras[i];
        try {
            const auto t_sel = Clock::now();
            const std::vector<SelectedPixel> selected =
                select_pixels(cam.heatmap, cam.features, threshold);
            select_ms += ms_since(t_sel);

            const auto t_lift = Clock::now();
            LiftResult lifted =
                lift_pixels(selected, depths[i], cam.heatmap.stride, cam.calib);
            lift_ms += ms_since(t_lift);

            stats->pixels_per_camera.push_back(static_cast<long>(selected.size()));
            stats->selected += static_cast<long>(selected.size());
            stats->lifted += static_cast<long>(lifted.points.size());
            stats->guard_dropped += lifted.guard_dropped;
            pseudo.insert(pseudo.end(), std::make_move_iterator(lifted.points.begin()),
                          std::make_move_iterator(lifted.points.end()));
        } catch (const Error& e) {
            throw Error(camera_label(cam, i) + ": " + e.what());
        }
    }
    stats->select_ms = select_ms;
    stats->lift_ms = lift_ms;

    if (fi.augment) {
        pseudo = replay_on_pseudo_points(std::move(pseudo), *fi.augment);
    }

    const auto t_pool = Clock::now();
    pseudo = range_filter(std::move(pseudo), fi.grid);
    stats->range_dropped = stats->lifted - static_cast<long>(pseudo.size());
    stats->pooled = static_cast<long>(pseudo.size());
    BevFeatureGrid grid = bev_max_pool(pseudo, fi.grid);
    stats->pool_ms = ms_since(t_pool);

    stats->cells_occupied = 0;
    for (int32_t n : grid.occupancy) {
        if (n > 0) ++stats->cells_occupied;
    }
    return grid;
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

FuseResult fuse_frame(const FrameInput& fi) {
    validate_input(fi);
    FuseResult out;
    std::vector<DenseDepthMap> depths = complete_depths(fi, &out.stats.depth_ms);
    out.camera = run_projection(fi, depths, fi.threshold, &out.stats);

    const PointCloud* cloud = &fi.cloud;
    PointCloud augmented;
    if (fi.augment) {
        augmented = apply_to_points(fi.cloud, *fi.augment);
        cloud = &augmented;
    }
    const auto t_rast = Clock::now();
    out.lidar = rasterize_lidar_bev(*cloud, fi.grid);
    out.stats.rasterize_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t_rast).count();

    out.fused = concat_bev(out.camera, out.lidar);
    return out;
}

SweepResult threshold_sweep(const FrameInput& fi, const std::vector<double>& thresholds,
                            int reps) {
    validate_input(fi);
    if (reps < 3) {
        throw InvalidRangeError("threshold_sweep: need at least 3 repetitions");
    }
    for (double t : thresholds) {
        if (t < 0.0 || t > 1.0) {
            throw InvalidRangeError("threshold_sweep: thresholds must be in [0, 1]");
        }
    }
    SweepResult out;
    std::vector<DenseDepthMap> depths = complete_depths(fi, &out.depth_ms);
    // Repetitions interleave across thresholds so a transient slowdown
    // spreads over every row instead of distorting one row's median.
    std::vector<std::vector<double>> latencies(thresholds.size(),
                                               std::vector<double>(reps, 0.0));
    std::vector<std::vector<FrameStats>> stats(thresholds.size(),
                                               std::vector<FrameStats>(reps));
    for (int r = 0; r < reps; ++r) {
        for (size_t t = 0; t < thresholds.size(); ++t) {
            run_projection(fi, depths, thresholds[t], &stats[t][r]);
            latencies[t][r] = stats[t][r].projection_ms();
        }
    }
    out.rows.reserve(thresholds.size());
    for (size_t t = 0; t < thresholds.size(); ++t) {
        SweepRow row;
        row.threshold = thresholds[t];
        row.latency_ms = median(latencies[t]);
        // keep the breakdown of the lower-median rep
        std::vector<size_t> order(latencies[t].size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return latencies[t][a] < latencies[t][b]; });
        row.stats = stats[t][order[(order.size() - 1) / 2]];
        row.stats.depth_ms = out.depth_ms;
        row.pixels = row.stats.selected;
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace cff

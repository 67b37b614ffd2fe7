#include "cff/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "cff/io.hpp"

namespace cff::cli {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string cam_prefix(int i) { return "cam" + std::to_string(i) + "_"; }

std::string format_row_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string format_ms(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

FrameInput load_frame(const fs::path& frame_dir, const RunConfig& config) {
    FrameInput fi;
    fi.cloud = read_cloud(frame_dir / "cloud.cffp");
    fi.grid = config.grid;
    fi.depth_cfg = config.depth;
    fi.threshold = config.threshold;
    for (int i = 0;; ++i) {
        const fs::path calib_file = frame_dir / (cam_prefix(i) + "calib.txt");
        if (!fs::exists(calib_file)) break;
        CameraFrame cam;
        cam.name = "cam" + std::to_string(i);
        cam.calib = read_calibration(calib_file);
        cam.heatmap = tensor_to_heatmap(
            read_tensor(frame_dir / (cam_prefix(i) + "heatmap.cfft")), config.stride);
        cam.features =
            tensor_to_features(read_tensor(frame_dir / (cam_prefix(i) + "features.cfft")));
        fi.cameras.push_back(std::move(cam));
    }
    if (fi.cameras.empty()) {
        throw IoError("no cam0_calib.txt under " + frame_dir.string());
    }
    return fi;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    opt.config.validate();
    const SceneSpec scene = read_scene(opt.scene_file);
    ensure_dir(opt.out_dir);

    const std::vector<CameraCalibration> rig =
        make_camera_ring(opt.config.cameras, opt.config.image_width,
                         opt.config.image_height, opt.config.focal,
                         opt.config.cam_height, opt.config.ring_radius);

    std::vector<fs::path> written;
    const PointCloud cloud = raycast_lidar(scene, opt.config.lidar(), opt.seed);
    const fs::path cloud_file = opt.out_dir / "cloud.cffp";
    write_cloud(cloud_file, cloud);
    written.push_back(cloud_file);

    for (size_t i = 0; i < rig.size(); ++i) {
        const CameraCalibration& calib = rig[i];
        const std::string prefix = cam_prefix(static_cast<int>(i));

        const fs::path calib_file = opt.out_dir / (prefix + "calib.txt");
        write_calibration(calib_file, calib);
        written.push_back(calib_file);

        const KeypointHeatmap hm =
            render_heatmap(scene, calib, opt.config.stride, opt.config.num_classes);
        const fs::path hm_file = opt.out_dir / (prefix + "heatmap.cfft");
        write_tensor(hm_file, heatmap_to_tensor(hm));
        written.push_back(hm_file);

        const FeatureMap fm =
            render_features(scene, calib, opt.config.stride, opt.config.num_classes);
        const fs::path fm_file = opt.out_dir / (prefix + "features.cfft");
        write_tensor(fm_file, features_to_tensor(fm));
        written.push_back(fm_file);

        const DenseDepthMap gt = render_depth(scene, calib, opt.config.stride,
                                              opt.config.depth.sentinel_depth);
        const fs::path gt_file = opt.out_dir / (prefix + "gtdepth.cfft");
        write_tensor(gt_file, depth_to_tensor(gt));
        written.push_back(gt_file);
    }

    write_manifest(opt.out_dir / "manifest.txt", written);
    out << "simulate: " << cloud.points.size() << " lidar points, " << rig.size()
        << " cameras, " << written.size() << " files -> " << opt.out_dir.string() << "\n";
    return 0;
}

int cmd_project(const ProjectOptions& opt, std::ostream& out) {
    opt.config.validate();
    FrameInput fi = load_frame(opt.frame_dir, opt.config);
    if (!opt.augment_file.empty()) fi.augment = read_params(opt.augment_file);
    ensure_dir(opt.out_dir);

    const FuseResult result = fuse_frame(fi);
    write_bev(opt.out_dir / "camera_bev.cffb", result.camera, fi.grid);
    write_bev(opt.out_dir / "lidar_bev.cffb", result.lidar, fi.grid);
    write_bev(opt.out_dir / "fused_bev.cffb", result.fused, fi.grid);
    if (opt.write_pgm) {
        write_occupancy_pgm(opt.out_dir / "occupancy.pgm", result.fused);
    }

    const FrameStats& s = result.stats;
    std::string csv =
        "threshold,pixels,latency_ms,depth_ms,select_ms,lift_ms,pool_ms,rasterize_ms,"
        "lifted,guard_dropped,range_dropped,pooled,cells_occupied\n";
    csv += format_row_double(fi.threshold) + "," + std::to_string(s.selected) + "," +
           format_ms(s.projection_ms()) + "," + format_ms(s.depth_ms) + "," +
           format_ms(s.select_ms) + "," + format_ms(s.lift_ms) + "," +
           format_ms(s.pool_ms) + "," + format_ms(s.rasterize_ms) + "," +
           std::to_string(s.lifted) + "," + std::to_string(s.guard_dropped) + "," +
           std::to_string(s.range_dropped) + "," + std::to_string(s.pooled) + "," +
           std::to_string(s.cells_occupied) + "\n";
    std::ofstream csv_out(opt.out_dir / "stats.csv", std::ios::binary | std::ios::trunc);
    csv_out << csv;
    if (!csv_out.good()) throw IoError("write failed on stats.csv");

    out << "project: threshold " << format_row_double(fi.threshold) << ", " << s.selected
        << " pixels selected, " << s.pooled << " pseudo-points pooled into "
        << s.cells_occupied << " cells -> " << opt.out_dir.string() << "\n";
    return 0;
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& side) {
    opt.config.validate();
    if (opt.reps < 3) throw InvalidRangeError("bench: repetitions must be >= 3");
    const FrameInput fi = load_frame(opt.frame_dir, opt.config);
    const SweepResult sweep = threshold_sweep(fi, opt.thresholds, opt.reps);

    std::string csv = "threshold,pixels,latency_ms\n";
    for (const SweepRow& row : sweep.rows) {
        csv += format_row_double(row.threshold) + "," + std::to_string(row.pixels) + "," +
               format_ms(row.latency_ms) + "\n";
    }
    if (opt.out_csv.empty()) {
        out << csv;
    } else {
        std::ofstream f(opt.out_csv, std::ios::binary | std::ios::trunc);
        f << csv;
        if (!f.good()) throw IoError("write failed on " + opt.out_csv.string());
        out << "bench: " << sweep.rows.size() << " thresholds -> "
            << opt.out_csv.string() << "\n";
    }
    side << "depth completion: " << format_ms(sweep.depth_ms)
         << " ms (threshold-independent, excluded from latency_ms)\n";
    return 0;
}

int cmd_augment(const AugmentOptions& opt, std::ostream& out) {
    opt.config.validate();
    if (opt.cloud_in.empty() && opt.points_in.empty()) {
        throw InvalidRangeError("augment: need a cloud and/or a pseudo-point tensor");
    }
    AugmentationParams params = opt.params_file.empty()
                                    ? sample_params(opt.seed, opt.config.augment)
                                    : read_params(opt.params_file);
    if (opt.invert) params = params.invert();
    ensure_dir(opt.out_dir);
    write_params(opt.out_dir / "params.txt", params);

    if (!opt.cloud_in.empty()) {
        const PointCloud cloud = read_cloud(opt.cloud_in);
        write_cloud(opt.out_dir / "cloud.cffp", apply_to_points(cloud, params));
    }
    if (!opt.points_in.empty()) {
        std::vector<FeaturePseudoPoint> points =
            tensor_to_pseudo_points(read_tensor(opt.points_in));
        points = replay_on_pseudo_points(std::move(points), params);
        write_tensor(opt.out_dir / "points.cfft", pseudo_points_to_tensor(points));
    }
    out << "augment: applied " << format_params(params) << " -> "
        << opt.out_dir.string() << "\n";
    return 0;
}

int cmd_depth(const DepthOptions& opt, std::ostream& out) {
    opt.config.validate();
    const bool run_ipbasic = opt.method == "ipbasic" || opt.method == "both";
    const bool run_nn = opt.method == "nn" || opt.method == "both";
    if (!run_ipbasic && !run_nn) {
        throw InvalidRangeError("depth: method must be ipbasic, nn, or both");
    }
    const PointCloud cloud = read_cloud(opt.cloud_file);
    const CameraCalibration calib = read_calibration(opt.calib_file);
    const SparseDepthMap sparse = render_sparse_depth(cloud, calib, opt.config.stride);
    ensure_dir(opt.out_dir);

    DenseDepthMap gt(0, 0);
    const bool have_gt = !opt.gt_file.empty();
    if (have_gt) {
        gt = tensor_to_depth(read_tensor(opt.gt_file));
        if (gt.width != sparse.width || gt.height != sparse.height) {
            throw DimensionMismatchError(opt.gt_file.string() +
                                         ": ground truth does not match sparse depth size");
        }
    }

    out << "depth: sparse coverage "
        << format_row_double(100.0 * sparse.valid_fraction()) << "% of "
        << sparse.width << "x" << sparse.height << " pixels\n";

    auto report = [&](const char* name, const DenseDepthMap& dense) {
        write_tensor(opt.out_dir / (std::string("depth_") + name + ".cfft"),
                     depth_to_tensor(dense));
        long masked = 0;
        for (uint8_t m : dense.in_range) masked += m ? 1 : 0;
        out << name << ": " << masked << " in-range pixels";
        if (have_gt) {
            double sq_sum = 0.0;
            long n = 0;
            for (size_t i = 0; i < dense.depth.size(); ++i) {
                if (!dense.in_range[i] || !gt.in_range[i]) continue;
                const double e = dense.depth[i] - gt.depth[i];
                sq_sum += e * e;
                ++n;
            }
            if (n > 0) {
                out << ", rmse " << format_row_double(std::sqrt(sq_sum / n)) << " m over "
                    << n << " pixels";
            } else {
                out << ", no overlap with ground truth";
            }
        }
        out << "\n";
    };

    if (run_ipbasic) report("ipbasic", ipbasic_complete(sparse, opt.config.depth));
    if (run_nn) report("nn", nn_complete(sparse, opt.config.depth));
    return 0;
}

}  // namespace cff::cli

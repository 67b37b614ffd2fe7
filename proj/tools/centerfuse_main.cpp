#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "cff/cli.hpp"
#include "cff/config.hpp"
#include "cff/errors.hpp"

namespace {

struct GlobalFlags {
    std::string config_file;
    uint64_t seed = 0;
    double threshold = 0.0;
    double cell_size = 0.0;
    int stride = 0;
    CLI::Option* threshold_opt = nullptr;
    CLI::Option* cell_size_opt = nullptr;
    CLI::Option* stride_opt = nullptr;

    cff::RunConfig resolve() const {
        cff::RunConfig config;
        if (!config_file.empty()) config = cff::load_config(config_file, config);
        if (threshold_opt->count() > 0) config.threshold = threshold;
        if (cell_size_opt->count() > 0) config.grid.cell_size = cell_size;
        if (stride_opt->count() > 0) config.stride = stride;
        config.validate();
        return config;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selective camera-feature-to-BEV projection toolkit"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_file,
                   "Key-value config file overriding built-in defaults");
    app.add_option("--seed", flags.seed, "PRNG seed (simulate, augment)");
    flags.threshold_opt =
        app.add_option("--threshold", flags.threshold, "Heatmap selection threshold");
    flags.cell_size_opt =
        app.add_option("--cell-size", flags.cell_size, "BEV cell size in meters");
    flags.stride_opt = app.add_option("--stride", flags.stride, "Heatmap stride");

    auto* simulate = app.add_subcommand("simulate", "Render a synthetic frame to disk");
    std::string sim_scene;
    std::string sim_out;
    simulate->add_option("--scene", sim_scene, "Scene description file")->required();
    simulate->add_option("--out", sim_out, "Output directory")->required();

    auto* project = app.add_subcommand("project", "Fuse one frame into BEV grids");
    std::string proj_frame;
    std::string proj_out;
    std::string proj_augment;
    bool proj_pgm = false;
    project->add_option("--frame", proj_frame, "Frame directory from simulate")->required();
    project->add_option("--out", proj_out, "Output directory")->required();
    project->add_option("--augment", proj_augment, "Augmentation params record to replay");
    project->add_flag("--pgm", proj_pgm, "Also write an occupancy PGM");

    auto* bench = app.add_subcommand("bench", "Threshold sweep over one frame");
    std::string bench_frame;
    std::string bench_out;
    std::vector<double> bench_thresholds = {0.5, 0.1, 0.05, 0.01, 0.0};
    int bench_reps = 5;
    bench->add_option("--frame", bench_frame, "Frame directory from simulate")->required();
    bench->add_option("--out", bench_out, "CSV output file (default: stdout)");
    bench->add_option("--thresholds", bench_thresholds, "Comma-separated thresholds")
        ->delimiter(',');
    bench->add_option("--reps", bench_reps, "Timing repetitions per threshold (>= 3)");

    auto* augment = app.add_subcommand("augment", "Apply a saved or sampled transform");
    std::string aug_params;
    std::string aug_cloud;
    std::string aug_points;
    std::string aug_out;
    bool aug_invert = false;
    augment->add_option("--params", aug_params, "Params record (default: sample from --seed)");
    augment->add_option("--cloud", aug_cloud, "Input point cloud (CFFP)");
    augment->add_option("--points", aug_points, "Input pseudo-point tensor (CFFT)");
    augment->add_option("--out", aug_out, "Output directory")->required();
    augment->add_flag("--invert", aug_invert, "Apply the analytic inverse instead");

    auto* depth = app.add_subcommand("depth", "Standalone depth completion");
    std::string depth_cloud;
    std::string depth_calib;
    std::string depth_gt;
    std::string depth_method = "ipbasic";
    std::string depth_out;
    depth->add_option("--cloud", depth_cloud, "Input point cloud (CFFP)")->required();
    depth->add_option("--calib", depth_calib, "Camera calibration file")->required();
    depth->add_option("--gt", depth_gt, "Ground-truth depth tensor for RMSE");
    depth->add_option("--method", depth_method, "ipbasic, nn, or both");
    depth->add_option("--out", depth_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const cff::RunConfig config = flags.resolve();
        if (simulate->parsed()) {
            cff::cli::SimulateOptions opt;
            opt.scene_file = sim_scene;
            opt.out_dir = sim_out;
            opt.seed = flags.seed;
            opt.config = config;
            return cff::cli::cmd_simulate(opt, std::cout);
        }
        if (project->parsed()) {
            cff::cli::ProjectOptions opt;
            opt.frame_dir = proj_frame;
            opt.out_dir = proj_out;
            opt.augment_file = proj_augment;
            opt.write_pgm = proj_pgm;
            opt.config = config;
            return cff::cli::cmd_project(opt, std::cout);
        }
        if (bench->parsed()) {
            cff::cli::BenchOptions opt;
            opt.frame_dir = bench_frame;
            opt.out_csv = bench_out;
            opt.thresholds = bench_thresholds;
            opt.reps = bench_reps;
            opt.config = config;
            return cff::cli::cmd_bench(opt, std::cout, std::cerr);
        }
        if (augment->parsed()) {
            cff::cli::AugmentOptions opt;
            opt.params_file = aug_params;
            opt.seed = flags.seed;
            opt.invert = aug_invert;
            opt.cloud_in = aug_cloud;
            opt.points_in = aug_points;
            opt.out_dir = aug_out;
            opt.config = config;
            return cff::cli::cmd_augment(opt, std::cout);
        }
        if (depth->parsed()) {
            cff::cli::DepthOptions opt;
            opt.cloud_file = depth_cloud;
            opt.calib_file = depth_calib;
            opt.gt_file = depth_gt;
            opt.method = depth_method;
            opt.out_dir = depth_out;
            opt.config = config;
            return cff::cli::cmd_depth(opt, std::cout);
        }
    } catch (const cff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

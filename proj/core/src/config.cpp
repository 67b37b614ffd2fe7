#include "cff/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cff {

namespace {

double to_double(const std::string& value, const std::string& key) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ParseError("config: " + key + ": not a number: \"" + value + "\"");
    }
    if (used != value.size()) {
        throw ParseError("config: " + key + ": not a number: \"" + value + "\"");
    }
    return v;
}

int to_int(const std::string& value, const std::string& key) {
    const double v = to_double(value, key);
    if (v != std::floor(v)) {
        throw ParseError("config: " + key + ": expected an integer, got \"" + value + "\"");
    }
    return static_cast<int>(v);
}

bool to_bool(const std::string& value, const std::string& key) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    throw ParseError("config: " + key + ": expected a boolean, got \"" + value + "\"");
}

}  // namespace

LidarConfig RunConfig::lidar() const {
    LidarConfig lc;
    const double lo = beam_min_deg * std::numbers::pi / 180.0;
    const double hi = beam_max_deg * std::numbers::pi / 180.0;
    lc.beam_elevations.reserve(beams);
    for (int i = 0; i < beams; ++i) {
        lc.beam_elevations.push_back(beams == 1 ? lo : lo + (hi - lo) * i / (beams - 1));
    }
    lc.azimuth_resolution = azimuth_resolution_deg * std::numbers::pi / 180.0;
    lc.max_range = max_range;
    lc.origin = {0.0, 0.0, lidar_origin_z};
    lc.noise_sigma = noise_sigma;
    return lc;
}

void RunConfig::validate() const {
    if (stride < 1) throw InvalidRangeError("config: stride must be >= 1");
    if (num_classes < 1) throw InvalidRangeError("config: num_classes must be >= 1");
    if (threshold < 0.0 || threshold > 1.0) {
        throw InvalidRangeError("config: threshold must be in [0, 1]");
    }
    if (image_width < stride || image_height < stride) {
        throw InvalidRangeError("config: image must be at least one stride cell");
    }
    if (image_width % stride != 0 || image_height % stride != 0) {
        throw InvalidRangeError("config: image size must be divisible by stride");
    }
    if (!(focal > 0.0)) throw InvalidRangeError("config: focal must be positive");
    if (cameras < 1) throw InvalidRangeError("config: cameras must be >= 1");
    if (beams < 1) throw InvalidRangeError("config: beams must be >= 1");
    grid.validate();
    depth.validate();
    augment.validate();
    lidar().validate();
}

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "stride") c.stride = to_int(value, key);
    else if (key == "num_classes") c.num_classes = to_int(value, key);
    else if (key == "threshold") c.threshold = to_double(value, key);
    else if (key == "image_width") c.image_width = to_int(value, key);
    else if (key == "image_height") c.image_height = to_int(value, key);
    else if (key == "focal") c.focal = to_double(value, key);
    else if (key == "cam_height") c.cam_height = to_double(value, key);
    else if (key == "ring_radius") c.ring_radius = to_double(value, key);
    else if (key == "cameras") c.cameras = to_int(value, key);
    else if (key == "beams") c.beams = to_int(value, key);
    else if (key == "beam_min_deg") c.beam_min_deg = to_double(value, key);
    else if (key == "beam_max_deg") c.beam_max_deg = to_double(value, key);
    else if (key == "azimuth_resolution_deg") c.azimuth_resolution_deg = to_double(value, key);
    else if (key == "max_range") c.max_range = to_double(value, key);
    else if (key == "lidar_origin_z") c.lidar_origin_z = to_double(value, key);
    else if (key == "noise_sigma") c.noise_sigma = to_double(value, key);
    else if (key == "x_min") c.grid.x_min = to_double(value, key);
    else if (key == "x_max") c.grid.x_max = to_double(value, key);
    else if (key == "y_min") c.grid.y_min = to_double(value, key);
    else if (key == "y_max") c.grid.y_max = to_double(value, key);
    else if (key == "z_min") c.grid.z_min = to_double(value, key);
    else if (key == "z_max") c.grid.z_max = to_double(value, key);
    else if (key == "cell_size") c.grid.cell_size = to_double(value, key);
    else if (key == "dilation_shape") {
        if (value == "diamond") c.depth.dilation_shape = KernelShape::kDiamond;
        else if (value == "full") c.depth.dilation_shape = KernelShape::kFull;
        else throw ParseError("config: dilation_shape must be diamond or full");
    }
    else if (key == "dilation_kernel") c.depth.dilation_kernel = to_int(value, key);
    else if (key == "closure_kernel") c.depth.closure_kernel = to_int(value, key);
    else if (key == "blur_kernel") c.depth.blur_kernel = to_int(value, key);
    else if (key == "fill_large_holes") c.depth.fill_large_holes = to_bool(value, key);
    else if (key == "max_gap") c.depth.max_gap = to_int(value, key);
    else if (key == "inversion_max") c.depth.inversion_max = to_double(value, key);
    else if (key == "sentinel_depth") c.depth.sentinel_depth = to_double(value, key);
    else if (key == "flip_prob") c.augment.flip_prob = to_double(value, key);
    else if (key == "scale_min") c.augment.scale_min = to_double(value, key);
    else if (key == "scale_max") c.augment.scale_max = to_double(value, key);
    else if (key == "rotation_bound") c.augment.rotation_bound = to_double(value, key);
    else if (key == "translation_std") c.augment.translation_std = to_double(value, key);
    else throw ParseError("config: unknown key \"" + key + "\"");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        std::string value;
        if (!(ls >> value)) {
            throw ParseError("config line " + std::to_string(line_no) +
                             ": missing value for \"" + key + "\"");
        }
        std::string extra;
        if (ls >> extra) {
            throw ParseError("config line " + std::to_string(line_no) +
                             ": trailing content \"" + extra + "\"");
        }
        try {
            apply_config_entry(base, key, value);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str(), base);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace cff

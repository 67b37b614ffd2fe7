#include "cff/io.hpp"

#include <zlib.h>

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cff {

namespace {

void append_u32(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void append_u64(std::string& out, uint64_t v) {
    append_u32(out, static_cast<uint32_t>(v & 0xFFFFFFFFull));
    append_u32(out, static_cast<uint32_t>(v >> 32));
}

void append_f32(std::string& out, float v) { append_u32(out, std::bit_cast<uint32_t>(v)); }
void append_f64(std::string& out, double v) { append_u64(out, std::bit_cast<uint64_t>(v)); }

// Bounds-checked little-endian reader over a loaded file image.
struct ByteReader {
    const std::string& data;
    std::string name;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > data.size()) {
            throw ParseError(name + ": truncated at byte " + std::to_string(pos));
        }
    }
    uint32_t u32() {
        need(4);
        const auto* p = reinterpret_cast<const unsigned char*>(data.data() + pos);
        pos += 4;
        return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
               uint32_t(p[3]) << 24;
    }
    uint64_t u64() {
        const uint64_t lo = u32();
        return lo | uint64_t(u32()) << 32;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    void magic(const char* expect) {
        need(4);
        if (data.compare(pos, 4, expect) != 0) {
            throw ParseError(name + ": bad magic, expected " + expect);
        }
        pos += 4;
    }
    void done() const {
        if (pos != data.size()) {
            throw ParseError(name + ": " + std::to_string(data.size() - pos) +
                             " trailing bytes");
        }
    }
};

std::string load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoError("read failed on " + path.string());
    return std::move(buf).str();
}

void store_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out.good()) throw IoError("write failed on " + path.string());
}

std::string encode_tensor(const Tensor& tensor) {
    tensor.validate();
    std::string out;
    out.reserve(8 + 4 * tensor.dims.size() + 4 * tensor.values.size());
    out += "CFFT";
    append_u32(out, static_cast<uint32_t>(tensor.dims.size()));
    for (uint32_t d : tensor.dims) append_u32(out, d);
    for (float v : tensor.values) append_f32(out, v);
    return out;
}

Tensor decode_tensor(ByteReader& r) {
    r.magic("CFFT");
    Tensor t;
    const uint32_t rank = r.u32();
    if (rank < 1 || rank > 4) {
        throw ParseError(r.name + ": tensor rank " + std::to_string(rank) +
                         " outside [1, 4]");
    }
    t.dims.resize(rank);
    for (uint32_t& d : t.dims) d = r.u32();
    const size_t n = t.element_count();
    r.need(4 * n);
    t.values.resize(n);
    for (float& v : t.values) v = r.f32();
    t.validate();
    return t;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& token, const std::string& context) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ParseError(context + ": not a number: \"" + token + "\"");
    }
    if (used != token.size()) {
        throw ParseError(context + ": not a number: \"" + token + "\"");
    }
    return v;
}

}  // namespace

void Tensor::validate() const {
    if (dims.size() < 1 || dims.size() > 4) {
        throw InvalidRangeError("tensor rank must be in [1, 4]");
    }
    for (uint32_t d : dims) {
        if (d == 0) throw InvalidRangeError("tensor dims must be positive");
    }
    if (values.size() != element_count()) {
        throw DimensionMismatchError("tensor payload " + std::to_string(values.size()) +
                                     " values, dims imply " +
                                     std::to_string(element_count()));
    }
}

Tensor read_tensor(const std::filesystem::path& path) {
    const std::string data = load_file(path);
    ByteReader r{data, path.string()};
    Tensor t = decode_tensor(r);
    r.done();
    return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
    store_file(path, encode_tensor(tensor));
}

PointCloud read_cloud(const std::filesystem::path& path) {
    const std::string data = load_file(path);
    ByteReader r{data, path.string()};
    r.magic("CFFP");
    const uint32_t count = r.u32();
    r.need(size_t(count) * 16);
    PointCloud cloud;
    cloud.points.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        LidarPoint p;
        p.x = r.f32();
        p.y = r.f32();
        p.z = r.f32();
        p.intensity = r.f32();
        cloud.points.push_back(p);
    }
    r.done();
    return cloud;
}

void write_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
    std::string out;
    out.reserve(8 + 16 * cloud.points.size());
    out += "CFFP";
    append_u32(out, static_cast<uint32_t>(cloud.points.size()));
    for (const LidarPoint& p : cloud.points) {
        append_f32(out, static_cast<float>(p.x));
        append_f32(out, static_cast<float>(p.y));
        append_f32(out, static_cast<float>(p.z));
        append_f32(out, static_cast<float>(p.intensity));
    }
    store_file(path, out);
}

Tensor heatmap_to_tensor(const KeypointHeatmap& hm) {
    hm.validate();
    Tensor t;
    t.dims = {static_cast<uint32_t>(hm.num_classes), static_cast<uint32_t>(hm.height),
              static_cast<uint32_t>(hm.width)};
    t.values = hm.scores;
    return t;
}

KeypointHeatmap tensor_to_heatmap(const Tensor& t, int stride) {
    t.validate();
    if (t.dims.size() != 3) {
        throw DimensionMismatchError("heatmap tensor must be rank 3 [K, H, W]");
    }
    KeypointHeatmap hm(static_cast<int>(t.dims[2]), static_cast<int>(t.dims[1]),
                       static_cast<int>(t.dims[0]), stride);
    hm.scores = t.values;
    hm.validate();
    return hm;
}

Tensor features_to_tensor(const FeatureMap& fm) {
    Tensor t;
    t.dims = {static_cast<uint32_t>(fm.channels), static_cast<uint32_t>(fm.height),
              static_cast<uint32_t>(fm.width)};
    t.values = fm.values;
    return t;
}

FeatureMap tensor_to_features(const Tensor& t) {
    t.validate();
    if (t.dims.size() != 3) {
        throw DimensionMismatchError("feature tensor must be rank 3 [C, H, W]");
    }
    FeatureMap fm(static_cast<int>(t.dims[2]), static_cast<int>(t.dims[1]),
                  static_cast<int>(t.dims[0]));
    fm.values = t.values;
    return fm;
}

Tensor depth_to_tensor(const DenseDepthMap& dd) {
    Tensor t;
    t.dims = {2, static_cast<uint32_t>(dd.height), static_cast<uint32_t>(dd.width)};
    t.values.reserve(2 * dd.depth.size());
    for (double d : dd.depth) t.values.push_back(static_cast<float>(d));
    for (uint8_t m : dd.in_range) t.values.push_back(m ? 1.0f : 0.0f);
    return t;
}

DenseDepthMap tensor_to_depth(const Tensor& t) {
    t.validate();
    if (t.dims.size() != 3 || t.dims[0] != 2) {
        throw DimensionMismatchError("depth tensor must be rank 3 [2, H, W]");
    }
    DenseDepthMap dd(static_cast<int>(t.dims[2]), static_cast<int>(t.dims[1]));
    const size_t plane = dd.depth.size();
    for (size_t i = 0; i < plane; ++i) {
        dd.depth[i] = t.values[i];
        dd.in_range[i] = t.values[plane + i] != 0.0f ? 1 : 0;
    }
    return dd;
}

Tensor pseudo_points_to_tensor(const std::vector<FeaturePseudoPoint>& points) {
    const size_t feat = points.empty() ? 0 : points.front().feature.size();
    for (const FeaturePseudoPoint& p : points) {
        if (p.feature.size() != feat) {
            throw DimensionMismatchError("pseudo-points disagree on feature width");
        }
    }
    Tensor t;
    t.dims = {static_cast<uint32_t>(points.size()), static_cast<uint32_t>(5 + feat)};
    t.values.reserve(points.size() * (5 + feat));
    for (const FeaturePseudoPoint& p : points) {
        t.values.push_back(static_cast<float>(p.x));
        t.values.push_back(static_cast<float>(p.y));
        t.values.push_back(static_cast<float>(p.z));
        t.values.push_back(static_cast<float>(p.class_id));
        t.values.push_back(p.score);
        t.values.insert(t.values.end(), p.feature.begin(), p.feature.end());
    }
    return t;
}

std::vector<FeaturePseudoPoint> tensor_to_pseudo_points(const Tensor& t) {
    t.validate();
    if (t.dims.size() != 2 || t.dims[1] < 5) {
        throw DimensionMismatchError("pseudo-point tensor must be rank 2 [N, 5 + C]");
    }
    const size_t n = t.dims[0];
    const size_t width = t.dims[1];
    std::vector<FeaturePseudoPoint> points(n);
    for (size_t i = 0; i < n; ++i) {
        const float* row = t.values.data() + i * width;
        points[i].x = row[0];
        points[i].y = row[1];
        points[i].z = row[2];
        points[i].class_id = static_cast<int>(row[3]);
        points[i].score = row[4];
        points[i].feature.assign(row + 5, row + width);
    }
    return points;
}

void write_bev(const std::filesystem::path& path, const BevFeatureGrid& grid,
               const BevGridConfig& config) {
    config.validate();
    std::string out = "CFFB";
    append_f64(out, config.x_min);
    append_f64(out, config.x_max);
    append_f64(out, config.y_min);
    append_f64(out, config.y_max);
    append_f64(out, config.z_min);
    append_f64(out, config.z_max);
    append_f64(out, config.cell_size);
    append_u32(out, static_cast<uint32_t>(grid.channels));

    Tensor values;
    values.dims = {static_cast<uint32_t>(grid.channels), static_cast<uint32_t>(grid.ny),
                   static_cast<uint32_t>(grid.nx)};
    values.values = grid.values;
    out += encode_tensor(values);

    Tensor occupancy;
    occupancy.dims = {static_cast<uint32_t>(grid.ny), static_cast<uint32_t>(grid.nx)};
    occupancy.values.reserve(grid.occupancy.size());
    for (int32_t n : grid.occupancy) occupancy.values.push_back(static_cast<float>(n));
    out += encode_tensor(occupancy);

    store_file(path, out);
}

BevFile read_bev(const std::filesystem::path& path) {
    const std::string data = load_file(path);
    ByteReader r{data, path.string()};
    r.magic("CFFB");
    BevFile out;
    out.config.x_min = r.f64();
    out.config.x_max = r.f64();
    out.config.y_min = r.f64();
    out.config.y_max = r.f64();
    out.config.z_min = r.f64();
    out.config.z_max = r.f64();
    out.config.cell_size = r.f64();
    out.config.validate();
    const uint32_t channels = r.u32();

    const Tensor values = decode_tensor(r);
    const Tensor occupancy = decode_tensor(r);
    r.done();
    if (values.dims.size() != 3 || occupancy.dims.size() != 2 ||
        values.dims[0] != channels || values.dims[1] != occupancy.dims[0] ||
        values.dims[2] != occupancy.dims[1]) {
        throw DimensionMismatchError(path.string() + ": inconsistent grid tensors");
    }
    out.grid = BevFeatureGrid(static_cast<int>(values.dims[2]),
                              static_cast<int>(values.dims[1]),
                              static_cast<int>(channels));
    out.grid.values = values.values;
    for (size_t i = 0; i < occupancy.values.size(); ++i) {
        out.grid.occupancy[i] = static_cast<int32_t>(occupancy.values[i]);
    }
    if (out.grid.nx != out.config.nx() || out.grid.ny != out.config.ny()) {
        throw DimensionMismatchError(path.string() + ": grid shape disagrees with config");
    }
    return out;
}

std::string format_calibration(const CameraCalibration& calib) {
    std::string out;
    out += "fx " + format_g17(calib.fx) + "\n";
    out += "fy " + format_g17(calib.fy) + "\n";
    out += "cx " + format_g17(calib.cx) + "\n";
    out += "cy " + format_g17(calib.cy) + "\n";
    out += "width " + std::to_string(calib.width) + "\n";
    out += "height " + std::to_string(calib.height) + "\n";
    out += "cam_from_world";
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            out += " " + format_g17(calib.cam_from_world(row, col));
        }
    }
    out += "\n";
    return out;
}

CameraCalibration parse_calibration(const std::string& text) {
    CameraCalibration calib;
    uint32_t seen = 0;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        const std::string context = "calibration line " + std::to_string(line_no);
        auto next = [&]() {
            std::string token;
            if (!(ls >> token)) throw ParseError(context + ": missing value for " + key);
            return token;
        };
        if (key == "fx") {
            calib.fx = parse_double(next(), context);
            seen |= 1u;
        } else if (key == "fy") {
            calib.fy = parse_double(next(), context);
            seen |= 2u;
        } else if (key == "cx") {
            calib.cx = parse_double(next(), context);
            seen |= 4u;
        } else if (key == "cy") {
            calib.cy = parse_double(next(), context);
            seen |= 8u;
        } else if (key == "width") {
            calib.width = static_cast<int>(parse_double(next(), context));
            seen |= 16u;
        } else if (key == "height") {
            calib.height = static_cast<int>(parse_double(next(), context));
            seen |= 32u;
        } else if (key == "cam_from_world") {
            for (int row = 0; row < 4; ++row) {
                for (int col = 0; col < 4; ++col) {
                    calib.cam_from_world(row, col) = parse_double(next(), context);
                }
            }
            seen |= 64u;
        } else {
            throw ParseError(context + ": unknown key \"" + key + "\"");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(context + ": trailing content \"" + extra + "\"");
    }
    if (seen != 127u) throw ParseError("calibration: missing required keys");
    calib.validate();
    return calib;
}

CameraCalibration read_calibration(const std::filesystem::path& path) {
    try {
        return parse_calibration(load_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_calibration(const std::filesystem::path& path, const CameraCalibration& calib) {
    store_file(path, format_calibration(calib));
}

SceneSpec parse_scene(const std::string& text) {
    SceneSpec scene;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        const std::string context = "scene line " + std::to_string(line_no);
        auto next = [&]() {
            std::string token;
            if (!(ls >> token)) throw ParseError(context + ": missing field after " + key);
            return token;
        };
        if (key == "box") {
            BoxSpec box;
            box.center.x() = parse_double(next(), context);
            box.center.y() = parse_double(next(), context);
            box.center.z() = parse_double(next(), context);
            box.size.x() = parse_double(next(), context);
            box.size.y() = parse_double(next(), context);
            box.size.z() = parse_double(next(), context);
            box.yaw = parse_double(next(), context);
            box.class_id = static_cast<int>(parse_double(next(), context));
            scene.boxes.push_back(box);
        } else if (key == "ground") {
            scene.ground_z = parse_double(next(), context);
            scene.has_ground = true;
        } else if (key == "extent") {
            scene.extent = parse_double(next(), context);
        } else {
            throw ParseError(context + ": unknown directive \"" + key + "\"");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(context + ": trailing content \"" + extra + "\"");
    }
    scene.validate();
    return scene;
}

std::string format_scene(const SceneSpec& scene) {
    std::string out = "extent " + format_g17(scene.extent) + "\n";
    if (scene.has_ground) out += "ground " + format_g17(scene.ground_z) + "\n";
    for (const BoxSpec& box : scene.boxes) {
        out += "box " + format_g17(box.center.x()) + " " + format_g17(box.center.y()) +
               " " + format_g17(box.center.z()) + " " + format_g17(box.size.x()) + " " +
               format_g17(box.size.y()) + " " + format_g17(box.size.z()) + " " +
               format_g17(box.yaw) + " " + std::to_string(box.class_id) + "\n";
    }
    return out;
}

SceneSpec read_scene(const std::filesystem::path& path) {
    try {
        return parse_scene(load_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_scene(const std::filesystem::path& path, const SceneSpec& scene) {
    store_file(path, format_scene(scene));
}

AugmentationParams read_params(const std::filesystem::path& path) {
    const std::string data = load_file(path);
    try {
        return parse_params(data);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_params(const std::filesystem::path& path, const AugmentationParams& params) {
    store_file(path, format_params(params) + "\n");
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::filesystem::path>& files) {
    std::string out;
    for (const std::filesystem::path& file : files) {
        const std::string data = load_file(file);
        const uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                                static_cast<uInt>(data.size()));
        char line[64];
        std::snprintf(line, sizeof(line), "%08lx  ", static_cast<unsigned long>(crc));
        out += line;
        out += file.filename().string() + "\n";
    }
    store_file(path, out);
}

void write_occupancy_pgm(const std::filesystem::path& path, const BevFeatureGrid& grid) {
    int32_t max_n = 0;
    for (int32_t n : grid.occupancy) max_n = std::max(max_n, n);
    std::string out = "P5\n" + std::to_string(grid.nx) + " " + std::to_string(grid.ny) +
                      "\n255\n";
    out.reserve(out.size() + grid.occupancy.size());
    for (int32_t n : grid.occupancy) {
        const int pixel = n == 0 ? 0 : 55 + static_cast<int>(200LL * n / max_n);
        out.push_back(static_cast<char>(pixel));
    }
    store_file(path, out);
}

}  // namespace cff

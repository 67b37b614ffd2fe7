#include "cff/augment.hpp"

#include <cmath>
#include <cstdio>

#include "cff/random.hpp"

namespace cff {

AugmentationParams AugmentationParams::invert() const {
    AugmentationParams inv;
    inv.flip_x = flip_x;
    inv.flip_y = flip_y;
    inv.scale = 1.0 / scale;
    // Flips commute with z-rotation up to a sign: mirroring one axis
    // reverses orientation, so the inverse rotation keeps the original
    // angle; mirroring zero or both axes negates it.
    inv.rotation_z = (flip_x != flip_y) ? rotation_z : -rotation_z;
    AugmentationParams linear = inv;
    linear.tx = linear.ty = linear.tz = 0.0;
    const Eigen::Vector3d t = transform_point({tx, ty, tz}, linear);
    inv.tx = -t.x();
    inv.ty = -t.y();
    inv.tz = -t.z();
    return inv;
}

void AugmentationRanges::validate() const {
    if (flip_prob < 0.0 || flip_prob > 1.0) {
        throw InvalidRangeError("augment ranges: flip_prob must be in [0, 1]");
    }
    if (!(scale_min > 0.0) || scale_max < scale_min) {
        throw InvalidRangeError("augment ranges: need 0 < scale_min <= scale_max");
    }
    if (rotation_bound < 0.0) {
        throw InvalidRangeError("augment ranges: rotation_bound must be >= 0");
    }
    if (translation_std < 0.0) {
        throw InvalidRangeError("augment ranges: translation_std must be >= 0");
    }
}

AugmentationParams sample_params(uint64_t seed, const AugmentationRanges& ranges) {
    ranges.validate();
    SplitMix64 rng(seed);
    AugmentationParams p;
    p.flip_x = rng.bernoulli(ranges.flip_prob);
    p.flip_y = rng.bernoulli(ranges.flip_prob);
    p.scale = rng.uniform(ranges.scale_min, ranges.scale_max);
    p.rotation_z = rng.uniform(-ranges.rotation_bound, ranges.rotation_bound);
    p.tx = rng.gaussian(0.0, ranges.translation_std);
    p.ty = rng.gaussian(0.0, ranges.translation_std);
    p.tz = rng.gaussian(0.0, ranges.translation_std);
    return p;
}

Eigen::Vector3d transform_point(const Eigen::Vector3d& p, const AugmentationParams& params) {
    if (params.is_identity()) return p;
    double x = p.x();
    double y = p.y();
    double z = p.z();
    if (params.flip_x) y = -y;
    if (params.flip_y) x = -x;
    x *= params.scale;
    y *= params.scale;
    z *= params.scale;
    const double c = std::cos(params.rotation_z);
    const double s = std::sin(params.rotation_z);
    const double rx = c * x - s * y;
    const double ry = s * x + c * y;
    return {rx + params.tx, ry + params.ty, z + params.tz};
}

PointCloud apply_to_points(const PointCloud& cloud, const AugmentationParams& params) {
    PointCloud out;
    out.points.reserve(cloud.points.size());
    for (const LidarPoint& p : cloud.points) {
        const Eigen::Vector3d q = transform_point({p.x, p.y, p.z}, params);
        out.points.push_back({q.x(), q.y(), q.z(), p.intensity});
    }
    return out;
}

std::vector<FeaturePseudoPoint> replay_on_pseudo_points(
    std::vector<FeaturePseudoPoint> points, const AugmentationParams& params) {
    for (FeaturePseudoPoint& p : points) {
        const Eigen::Vector3d q = transform_point({p.x, p.y, p.z}, params);
        p.x = q.x();
        p.y = q.y();
        p.z = q.z();
    }
    return points;
}

std::string format_params(const AugmentationParams& params) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g %.17g %.17g %.17g",
                  params.flip_x ? 1 : 0, params.flip_y ? 1 : 0, params.scale,
                  params.rotation_z, params.tx, params.ty, params.tz);
    return buf;
}

AugmentationParams parse_params(const std::string& line) {
    int fx = 0;
    int fy = 0;
    AugmentationParams p;
    int consumed = 0;
    const int n = std::sscanf(line.c_str(), "%d %d %lg %lg %lg %lg %lg %n", &fx, &fy,
                              &p.scale, &p.rotation_z, &p.tx, &p.ty, &p.tz, &consumed);
    if (n != 7 || (fx != 0 && fx != 1) || (fy != 0 && fy != 1)) {
        throw ParseError("augment params: expected 'flip_x flip_y scale rotation_z tx ty tz', got \"" +
                         line + "\"");
    }
    for (size_t i = consumed; i < line.size(); ++i) {
        if (!std::isspace(static_cast<unsigned char>(line[i]))) {
            throw ParseError("augment params: trailing content in \"" + line + "\"");
        }
    }
    if (!(p.scale > 0.0)) {
        throw InvalidRangeError("augment params: scale must be positive");
    }
    if (!std::isfinite(p.rotation_z)) {
        throw InvalidRangeError("augment params: rotation must be finite");
    }
    p.flip_x = fx == 1;
    p.flip_y = fy == 1;
    return p;
}

}  // namespace cff

#pragma once

#include <string>
#include <vector>

#include "cff/bev.hpp"
#include "cff/errors.hpp"
#include "cff/geometry.hpp"

namespace cff {

/// A sampled global transform, saved once per frame and replayed on every
/// modality. Applied in fixed order: flip_x (negate y), flip_y (negate x),
/// uniform scale about the origin, rotation about the world z-axis,
/// translation.
struct AugmentationParams {
    bool flip_x = false;
    bool flip_y = false;
    double scale = 1.0;
    double rotation_z = 0.0;
    double tx = 0.0;
    double ty = 0.0;
    double tz = 0.0;

    bool is_identity() const {
        return !flip_x && !flip_y && scale == 1.0 && rotation_z == 0.0 &&
               tx == 0.0 && ty == 0.0 && tz == 0.0;
    }

    /// Analytic inverse in the same parameterization. Applying the result
    /// after the original recovers inputs up to rounding.
    AugmentationParams invert() const;
};

/// Sampling ranges for sample_params. Defaults follow common detection
/// practice: coin-flip mirroring, 5% scale, 45-degree yaw, 0.5 m translation
/// jitter.
struct AugmentationRanges {
    double flip_prob = 0.5;
    double scale_min = 0.95;
    double scale_max = 1.05;
    double rotation_bound = 0.78539816339744831;  // pi/4
    double translation_std = 0.5;

    void validate() const;
};

/// Draws one parameter set from the ranges. Fixed draw order (flip_x,
/// flip_y, scale, rotation, tx, ty, tz) over the counter-based generator
/// keeps results identical across platforms for a given seed.
AugmentationParams sample_params(uint64_t seed, const AugmentationRanges& ranges = {});

/// The single shared coordinate transform. Both the raw cloud and the
/// pseudo-point replay route through this one function so equal inputs
/// produce bit-identical outputs.
Eigen::Vector3d transform_point(const Eigen::Vector3d& p, const AugmentationParams& params);

/// Transforms cloud coordinates; intensities are untouched.
PointCloud apply_to_points(const PointCloud& cloud, const AugmentationParams& params);

/// Transforms pseudo-point coordinates via the shared path; class, score,
/// and feature vectors are untouched.
std::vector<FeaturePseudoPoint> replay_on_pseudo_points(
    std::vector<FeaturePseudoPoint> points, const AugmentationParams& params);

/// Single-line text record "flip_x flip_y scale rotation_z tx ty tz" with
/// doubles printed to round-trip exactly.
std::string format_params(const AugmentationParams& params);

/// Parses the format_params record. Throws ParseError on malformed input.
AugmentationParams parse_params(const std::string& line);

}  // namespace cff

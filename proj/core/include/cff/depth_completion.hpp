#pragma once

#include <cstdint>
#include <vector>

#include "cff/errors.hpp"
#include "cff/geometry.hpp"

namespace cff {

/// Sentinel written to pixels outside the interpolation range. Far beyond
/// the BEV detection-range diagonal, so lifted sentinel pixels can never
/// land inside the grid.
inline constexpr double kSentinelDepth = 300.0;

enum class KernelShape : uint8_t {
    kDiamond,  ///< L1 ball: |du| + |dv| <= radius
    kFull,     ///< square: max(|du|, |dv|) <= radius
};

struct DepthFillConfig {
    KernelShape dilation_shape = KernelShape::kDiamond;
    int dilation_kernel = 5;  ///< odd, >= 3
    int closure_kernel = 5;   ///< odd, >= 3
    bool fill_large_holes = false;
    int blur_kernel = 5;  ///< odd, >= 3
    /// Chebyshev distance (pixels) to the nearest sparse sample beyond
    /// which completed depth is not trusted.
    int max_gap = 10;
    double inversion_max = 100.0;  ///< exceeds any expected depth sample
    double sentinel_depth = kSentinelDepth;

    void validate() const;
};

/// Dense per-pixel depth with the interpolation-range mask. Pixels with
/// in_range=false always carry sentinel_depth; masked-in depths are
/// positive and finite.
struct DenseDepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> depth;
    std::vector<uint8_t> in_range;

    DenseDepthMap() = default;
    DenseDepthMap(int w, int h)
        : width(w), height(h), depth(size_t(w) * h, 0.0), in_range(size_t(w) * h, 0) {}

    double at(int u, int v) const { return depth[size_t(v) * width + u]; }
    double& at(int u, int v) { return depth[size_t(v) * width + u]; }
    bool mask_at(int u, int v) const { return in_range[size_t(v) * width + u] != 0; }
};

/// Per-pixel flag: Chebyshev distance to the nearest valid sparse sample is
/// <= max_gap. All-invalid input yields an all-false mask.
std::vector<uint8_t> interpolation_mask(const SparseDepthMap& sd, int max_gap);

/// Nearest-neighbor completion baseline: every in-range pixel receives the
/// depth of the Euclidean-nearest valid sample (ties: smaller v, then
/// smaller u). Throws EmptyDepthError when the map has no valid pixels.
DenseDepthMap nn_complete(const SparseDepthMap& sd, const DepthFillConfig& cfg = {});

/// Morphological completion: invert depths (so dilation prefers near
/// surfaces), dilate, close small holes, optionally extend columns upward
/// across large holes, blur valid pixels, invert back. Pixels beyond
/// max_gap of any sample are masked out at sentinel depth.
DenseDepthMap ipbasic_complete(const SparseDepthMap& sd, const DepthFillConfig& cfg = {});

}  // namespace cff

#pragma once

#include <vector>

#include "cff/errors.hpp"

namespace cff {

/// Per-camera, per-class score grid at feature stride. Scores live in
/// [0, 1]; storage is class-major, then row-major ([k][v][u]).
struct KeypointHeatmap {
    int width = 0;  ///< grid size: image size / stride
    int height = 0;
    int num_classes = 0;
    int stride = 1;
    std::vector<float> scores;

    KeypointHeatmap() = default;
    KeypointHeatmap(int w, int h, int k, int s)
        : width(w), height(h), num_classes(k), stride(s),
          scores(size_t(w) * h * k, 0.0f) {}

    float at(int k, int v, int u) const {
        return scores[(size_t(k) * height + v) * width + u];
    }
    float& at(int k, int v, int u) {
        return scores[(size_t(k) * height + v) * width + u];
    }

    /// Throws InvalidRangeError if any score is outside [0, 1] or the
    /// buffer size disagrees with the declared dimensions.
    void validate() const;
};

/// Deep-feature grid aligned with a KeypointHeatmap. Channel-major,
/// then row-major ([c][v][u]).
struct FeatureMap {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> values;

    FeatureMap() = default;
    FeatureMap(int w, int h, int c)
        : width(w), height(h), channels(c), values(size_t(w) * h * c, 0.0f) {}

    float at(int c, int v, int u) const {
        return values[(size_t(c) * height + v) * width + u];
    }
    float& at(int c, int v, int u) {
        return values[(size_t(c) * height + v) * width + u];
    }
};

/// A grid location whose class-max score cleared the selection threshold,
/// together with the feature vector gathered at that location.
struct SelectedPixel {
    int u = 0;  ///< grid coordinates at heatmap stride
    int v = 0;
    int class_id = 0;
    float score = 0.0f;
    std::vector<float> feature;
};

struct Peak {
    int u = 0;
    int v = 0;
    int class_id = 0;
    float score = 0.0f;
};

/// Returns exactly the pixels whose maximum-over-classes score is >= the
/// threshold, row-major (v outer, u inner). Argmax ties go to the lowest
/// class index. Throws DimensionMismatchError if the grids differ and
/// InvalidRangeError unless 0 <= threshold <= 1.
std::vector<SelectedPixel> select_pixels(const KeypointHeatmap& hm, const FeatureMap& fm,
                                         double threshold);

/// Per class channel, the pixels strictly greater than all in-bounds
/// 8-neighbors. Plateaus (any equal neighbor) produce no peak.
std::vector<Peak> extract_peaks(const KeypointHeatmap& hm);

}  // namespace cff

#include "cff/heatmap.hpp"

#include <string>

namespace cff {

void KeypointHeatmap::validate() const {
    if (width <= 0 || height <= 0 || num_classes <= 0 || stride < 1) {
        throw InvalidRangeError("heatmap: non-positive dimensions");
    }
    if (scores.size() != size_t(width) * height * num_classes) {
        throw DimensionMismatchError("heatmap: buffer size does not match dimensions");
    }
    for (float s : scores) {
        if (!(s >= 0.0f && s <= 1.0f)) {
            throw InvalidRangeError("heatmap: score outside [0, 1]");
        }
    }
}

std::vector<SelectedPixel> select_pixels(const KeypointHeatmap& hm, const FeatureMap& fm,
                                         double threshold) {
    if (hm.width != fm.width || hm.height != fm.height) {
        throw DimensionMismatchError(
            "select_pixels: heatmap " + std::to_string(hm.width) + "x" +
            std::to_string(hm.height) + " vs feature map " + std::to_string(fm.width) +
            "x" + std::to_string(fm.height));
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidRangeError("select_pixels: threshold must be in [0, 1]");
    }
    const size_t plane = size_t(hm.width) * hm.height;
    std::vector<SelectedPixel> out;
    for (int v = 0; v < hm.height; ++v) {
        for (int u = 0; u < hm.width; ++u) {
            const size_t idx = size_t(v) * hm.width + u;
            int best_class = 0;
            float best = hm.scores[idx];
            for (int k = 1; k < hm.num_classes; ++k) {
                const float s = hm.scores[size_t(k) * plane + idx];
                if (s > best) {
                    best = s;
                    best_class = k;
                }
            }
            if (best >= threshold) {
                SelectedPixel px;
                px.u = u;
                px.v = v;
                px.class_id = best_class;
                px.score = best;
                px.feature.resize(fm.channels);
                for (int c = 0; c < fm.channels; ++c) {
                    px.feature[c] = fm.values[size_t(c) * plane + idx];
                }
                out.push_back(std::move(px));
            }
        }
    }
    return out;
}

std::vector<Peak> extract_peaks(const KeypointHeatmap& hm) {
    std::vector<Peak> out;
    for (int k = 0; k < hm.num_classes; ++k) {
        for (int v = 0; v < hm.height; ++v) {
            for (int u = 0; u < hm.width; ++u) {
                const float s = hm.at(k, v, u);
                bool is_peak = true;
                for (int dv = -1; dv <= 1 && is_peak; ++dv) {
                    for (int du = -1; du <= 1; ++du) {
                        if (du == 0 && dv == 0) continue;
                        const int nu = u + du;
                        const int nv = v + dv;
                        if (nu < 0 || nu >= hm.width || nv < 0 || nv >= hm.height) continue;
                        if (hm.at(k, nv, nu) >= s) {
                            is_peak = false;
                            break;
                        }
                    }
                }
                if (is_peak) out.push_back(Peak{u, v, k, s});
            }
        }
    }
    return out;
}

}  // namespace cff

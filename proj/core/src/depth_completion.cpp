#include "cff/depth_completion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cff {

namespace {

constexpr int kFarAway = std::numeric_limits<int>::max() / 2;

// Exact chessboard (Chebyshev) distance transform: two chamfer passes with
// unit weights over the 8-neighborhood.
std::vector<int> chebyshev_distance(const SparseDepthMap& sd) {
    const int w = sd.width;
    const int h = sd.height;
    std::vector<int> dist(size_t(w) * h, kFarAway);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            if (sd.valid(u, v)) dist[size_t(v) * w + u] = 0;
        }
    }
    auto relax = [&](size_t idx, int candidate) {
        if (candidate < dist[idx]) dist[idx] = candidate;
    };
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const size_t idx = size_t(v) * w + u;
            if (u > 0) relax(idx, dist[idx - 1] + 1);
            if (v > 0) {
                relax(idx, dist[idx - w] + 1);
                if (u > 0) relax(idx, dist[idx - w - 1] + 1);
                if (u + 1 < w) relax(idx, dist[idx - w + 1] + 1);
            }
        }
    }
    for (int v = h - 1; v >= 0; --v) {
        for (int u = w - 1; u >= 0; --u) {
            const size_t idx = size_t(v) * w + u;
            if (u + 1 < w) relax(idx, dist[idx + 1] + 1);
            if (v + 1 < h) {
                relax(idx, dist[idx + w] + 1);
                if (u + 1 < w) relax(idx, dist[idx + w + 1] + 1);
                if (u > 0) relax(idx, dist[idx + w - 1] + 1);
            }
        }
    }
    return dist;
}

struct KernelOffsets {
    std::vector<std::pair<int, int>> taps;  // (du, dv)
};

KernelOffsets make_kernel(KernelShape shape, int size) {
    const int r = size / 2;
    KernelOffsets k;
    for (int dv = -r; dv <= r; ++dv) {
        for (int du = -r; du <= r; ++du) {
            if (shape == KernelShape::kDiamond && std::abs(du) + std::abs(dv) > r) continue;
            k.taps.emplace_back(du, dv);
        }
    }
    return k;
}

// Grayscale dilation treating 0 as "empty": a pixel takes the maximum
// valid value inside the kernel footprint, or stays empty.
std::vector<double> dilate(const std::vector<double>& in, int w, int h,
                           const KernelOffsets& k) {
    std::vector<double> out(in.size(), 0.0);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            double best = 0.0;
            for (auto [du, dv] : k.taps) {
                const int nu = u + du;
                const int nv = v + dv;
                if (nu < 0 || nu >= w || nv < 0 || nv >= h) continue;
                best = std::max(best, in[size_t(nv) * w + nu]);
            }
            out[size_t(v) * w + u] = best;
        }
    }
    return out;
}

// Erosion counterpart: minimum over the footprint with empty pixels
// counting as 0, matching plain grayscale morphology.
std::vector<double> erode(const std::vector<double>& in, int w, int h,
                          const KernelOffsets& k) {
    std::vector<double> out(in.size(), 0.0);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            double worst = std::numeric_limits<double>::infinity();
            for (auto [du, dv] : k.taps) {
                const int nu = u + du;
                const int nv = v + dv;
                if (nu < 0 || nu >= w || nv < 0 || nv >= h) continue;
                worst = std::min(worst, in[size_t(nv) * w + nu]);
            }
            out[size_t(v) * w + u] = worst;
        }
    }
    return out;
}

// Closure fills holes no wider than the kernel but only where the dilated
// support is solid; eroding against empty borders keeps the overall
// footprint from growing.
std::vector<double> close_holes(const std::vector<double>& in, int w, int h,
                                const KernelOffsets& k) {
    return erode(dilate(in, w, h, k), w, h, k);
}

// Gaussian-weighted blur over valid pixels only, evaluated at valid pixels.
std::vector<double> masked_blur(const std::vector<double>& in, int w, int h, int size) {
    const int r = size / 2;
    const double sigma = 0.3 * ((size - 1) * 0.5 - 1.0) + 0.8;
    std::vector<double> weights(size_t(size) * size);
    for (int dv = -r; dv <= r; ++dv) {
        for (int du = -r; du <= r; ++du) {
            weights[size_t(dv + r) * size + (du + r)] =
                std::exp(-(du * du + dv * dv) / (2.0 * sigma * sigma));
        }
    }
    std::vector<double> out(in.size(), 0.0);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            if (in[size_t(v) * w + u] <= 0.0) continue;
            double acc = 0.0;
            double wsum = 0.0;
            for (int dv = -r; dv <= r; ++dv) {
                for (int du = -r; du <= r; ++du) {
                    const int nu = u + du;
                    const int nv = v + dv;
                    if (nu < 0 || nu >= w || nv < 0 || nv >= h) continue;
                    const double val = in[size_t(nv) * w + nu];
                    if (val <= 0.0) continue;
                    const double wt = weights[size_t(dv + r) * size + (du + r)];
                    acc += wt * val;
                    wsum += wt;
                }
            }
            out[size_t(v) * w + u] = acc / wsum;
        }
    }
    return out;
}

void check_odd(int size, const char* name) {
    if (size < 3 || size % 2 == 0) {
        throw InvalidRangeError(std::string("depth fill config: ") + name +
                                " kernel must be odd and >= 3");
    }
}

DenseDepthMap finalize(std::vector<double> filled, const SparseDepthMap& sd,
                       const DepthFillConfig& cfg) {
    DenseDepthMap out(sd.width, sd.height);
    const std::vector<int> cheb = chebyshev_distance(sd);
    for (size_t i = 0; i < filled.size(); ++i) {
        if (cheb[i] <= cfg.max_gap && filled[i] > 0.0) {
            out.depth[i] = filled[i];
            out.in_range[i] = 1;
        } else {
            out.depth[i] = cfg.sentinel_depth;
            out.in_range[i] = 0;
        }
    }
    return out;
}

}  // namespace

void DepthFillConfig::validate() const {
    check_odd(dilation_kernel, "dilation");
    check_odd(closure_kernel, "closure");
    check_odd(blur_kernel, "blur");
    if (max_gap < 1) throw InvalidRangeError("depth fill config: max_gap must be >= 1");
    if (!(inversion_max > 0.0)) {
        throw InvalidRangeError("depth fill config: inversion_max must be positive");
    }
    if (!(sentinel_depth > 0.0)) {
        throw InvalidRangeError("depth fill config: sentinel_depth must be positive");
    }
}

std::vector<uint8_t> interpolation_mask(const SparseDepthMap& sd, int max_gap) {
    const std::vector<int> dist = chebyshev_distance(sd);
    std::vector<uint8_t> mask(dist.size(), 0);
    for (size_t i = 0; i < dist.size(); ++i) {
        mask[i] = dist[i] <= max_gap ? 1 : 0;
    }
    return mask;
}

DenseDepthMap nn_complete(const SparseDepthMap& sd, const DepthFillConfig& cfg) {
    cfg.validate();
    const int w = sd.width;
    const int h = sd.height;
    std::vector<std::pair<int, int>> sources;  // (v, u), scan order = tie order
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            if (sd.valid(u, v)) sources.emplace_back(v, u);
        }
    }
    if (sources.empty()) {
        throw EmptyDepthError("nn_complete: no valid depth samples");
    }

    const std::vector<int> cheb = chebyshev_distance(sd);
    std::vector<double> filled(size_t(w) * h, 0.0);

    // Bucket sources by row so each ring of the search scans only the rows
    // it touches. The nearest Euclidean source lies within Chebyshev radius
    // [cheb, sqrt(2)*cheb], so rings outside that band are never visited.
    std::vector<std::vector<int>> by_row(h);
    for (auto [sv, su] : sources) by_row[sv].push_back(su);

    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const size_t idx = size_t(v) * w + u;
            if (sd.depth[idx] > 0.0) {
                filled[idx] = sd.depth[idx];
                continue;
            }
            long best_sq = std::numeric_limits<long>::max();
            int best_v = -1;
            int best_u = -1;
            const int start = cheb[idx];
            for (int ring = start; static_cast<long>(ring) * ring <= best_sq; ++ring) {
                const int v_lo = std::max(0, v - ring);
                const int v_hi = std::min(h - 1, v + ring);
                for (int sv = v_lo; sv <= v_hi; ++sv) {
                    const bool edge_row = (sv == v - ring || sv == v + ring);
                    for (int su : by_row[sv]) {
                        const int adu = std::abs(su - u);
                        if (edge_row ? adu > ring : adu != ring) continue;
                        const long dsq = static_cast<long>(adu) * adu +
                                         static_cast<long>(sv - v) * (sv - v);
                        if (dsq < best_sq ||
                            (dsq == best_sq &&
                             (sv < best_v || (sv == best_v && su < best_u)))) {
                            best_sq = dsq;
                            best_v = sv;
                            best_u = su;
                        }
                    }
                }
                if (ring >= w + h) break;  // unreachable guard
            }
            filled[idx] = sd.at(best_u, best_v);
        }
    }
    return finalize(std::move(filled), sd, cfg);
}

DenseDepthMap ipbasic_complete(const SparseDepthMap& sd, const DepthFillConfig& cfg) {
    cfg.validate();
    const int w = sd.width;
    const int h = sd.height;
    bool any_valid = false;
    for (double d : sd.depth) {
        if (d > 0.0) {
            any_valid = true;
            break;
        }
    }
    if (!any_valid) {
        throw EmptyDepthError("ipbasic_complete: no valid depth samples");
    }

    // (1) invert so morphological max prefers near surfaces
    std::vector<double> inv(size_t(w) * h, 0.0);
    for (size_t i = 0; i < inv.size(); ++i) {
        if (sd.depth[i] > 0.0) inv[i] = cfg.inversion_max - sd.depth[i];
    }

    // (2) dilation
    inv = dilate(inv, w, h, make_kernel(cfg.dilation_shape, cfg.dilation_kernel));

    // (3) small-hole closure
    inv = close_holes(inv, w, h, make_kernel(KernelShape::kFull, cfg.closure_kernel));

    // (4) optional large-hole fill: extend each column's topmost value upward
    if (cfg.fill_large_holes) {
        for (int u = 0; u < w; ++u) {
            int top = -1;
            for (int v = 0; v < h; ++v) {
                if (inv[size_t(v) * w + u] > 0.0) {
                    top = v;
                    break;
                }
            }
            if (top <= 0) continue;
            const double val = inv[size_t(top) * w + u];
            for (int v = 0; v < top; ++v) inv[size_t(v) * w + u] = val;
        }
    }

    // (5) blur valid pixels
    inv = masked_blur(inv, w, h, cfg.blur_kernel);

    // (6) invert back
    std::vector<double> filled(size_t(w) * h, 0.0);
    for (size_t i = 0; i < filled.size(); ++i) {
        if (inv[i] > 0.0) filled[i] = cfg.inversion_max - inv[i];
    }
    return finalize(std::move(filled), sd, cfg);
}

}  // namespace cff

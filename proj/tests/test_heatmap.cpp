#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "cff/heatmap.hpp"
#include "cff/random.hpp"
#include "test_support.hpp"

using namespace cff;

namespace {

// Exhaustive-scan re-derivation of select_pixels: per pixel, max over
// classes with the lowest class winning ties, kept when >= threshold.
std::vector<SelectedPixel> select_oracle(const KeypointHeatmap& hm, const FeatureMap& fm,
                                         double threshold) {
    std::vector<SelectedPixel> out;
    for (int v = 0; v < hm.height; ++v) {
        for (int u = 0; u < hm.width; ++u) {
            int best_k = 0;
            float best = hm.at(0, v, u);
            for (int k = 1; k < hm.num_classes; ++k) {
                if (hm.at(k, v, u) > best) {
                    best = hm.at(k, v, u);
                    best_k = k;
                }
            }
            if (best >= threshold) {
                SelectedPixel px;
                px.u = u;
                px.v = v;
                px.class_id = best_k;
                px.score = best;
                px.feature.resize(fm.channels);
                for (int c = 0; c < fm.channels; ++c) px.feature[c] = fm.at(c, v, u);
                out.push_back(std::move(px));
            }
        }
    }
    return out;
}

// Exhaustive-scan re-derivation of extract_peaks: strictly greater than
// all in-bounds 8-neighbors.
std::vector<Peak> peaks_oracle(const KeypointHeatmap& hm) {
    std::vector<Peak> out;
    for (int k = 0; k < hm.num_classes; ++k) {
        for (int v = 0; v < hm.height; ++v) {
            for (int u = 0; u < hm.width; ++u) {
                const float s = hm.at(k, v, u);
                bool peak = true;
                for (int dv = -1; dv <= 1 && peak; ++dv) {
                    for (int du = -1; du <= 1 && peak; ++du) {
                        if (du == 0 && dv == 0) continue;
                        const int nu = u + du;
                        const int nv = v + dv;
                        if (nu < 0 || nu >= hm.width || nv < 0 || nv >= hm.height) continue;
                        if (hm.at(k, nv, nu) >= s) peak = false;
                    }
                }
                if (peak) out.push_back({u, v, k, s});
            }
        }
    }
    return out;
}

bool same_selection(const std::vector<SelectedPixel>& a,
                    const std::vector<SelectedPixel>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].u != b[i].u || a[i].v != b[i].v || a[i].class_id != b[i].class_id ||
            a[i].score != b[i].score || a[i].feature != b[i].feature) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("heatmap validation rejects out-of-range scores and bad buffers") {
    KeypointHeatmap hm(4, 3, 2, 4);
    CHECK_NOTHROW(hm.validate());
    hm.at(0, 0, 0) = 1.5f;
    CHECK_THROWS_AS(hm.validate(), InvalidRangeError);
    hm.at(0, 0, 0) = -0.1f;
    CHECK_THROWS_AS(hm.validate(), InvalidRangeError);
    hm.at(0, 0, 0) = 0.5f;
    hm.scores.pop_back();
    CHECK_THROWS_AS(hm.validate(), DimensionMismatchError);
}

TEST_CASE("select_pixels rejects thresholds outside the unit interval") {
    KeypointHeatmap hm(4, 3, 2, 4);
    FeatureMap fm(4, 3, 5);
    CHECK_THROWS_AS(select_pixels(hm, fm, -0.01), InvalidRangeError);
    CHECK_THROWS_AS(select_pixels(hm, fm, 1.01), InvalidRangeError);
    CHECK_NOTHROW(select_pixels(hm, fm, 0.0));
    CHECK_NOTHROW(select_pixels(hm, fm, 1.0));
}

TEST_CASE("select_pixels rejects a feature map of different spatial size") {
    KeypointHeatmap hm(4, 3, 2, 4);
    FeatureMap fm(5, 3, 2);
    CHECK_THROWS_AS(select_pixels(hm, fm, 0.5), DimensionMismatchError);
}

TEST_CASE("select_pixels keeps a pixel whose score equals the threshold exactly") {
    KeypointHeatmap hm(3, 2, 1, 4);
    FeatureMap fm(3, 2, 1);
    hm.at(0, 1, 2) = 0.25f;
    hm.at(0, 0, 0) = 0.2f;
    const auto selected = select_pixels(hm, fm, 0.25);
    REQUIRE(selected.size() == 1);
    CHECK(selected[0].u == 2);
    CHECK(selected[0].v == 1);
    CHECK(selected[0].score == 0.25f);
}

TEST_CASE("select_pixels resolves class ties toward the lowest class index") {
    KeypointHeatmap hm(2, 1, 3, 4);
    FeatureMap fm(2, 1, 2);
    hm.at(1, 0, 0) = 0.7f;
    hm.at(2, 0, 0) = 0.7f;  // tie with class 1
    const auto selected = select_pixels(hm, fm, 0.5);
    REQUIRE(selected.size() == 1);
    CHECK(selected[0].class_id == 1);
}

TEST_CASE("select_pixels carries the feature vector of the source pixel") {
    KeypointHeatmap hm(3, 2, 1, 4);
    FeatureMap fm(3, 2, 4);
    hm.at(0, 1, 1) = 0.9f;
    for (int c = 0; c < 4; ++c) fm.at(c, 1, 1) = static_cast<float>(10 + c);
    const auto selected = select_pixels(hm, fm, 0.5);
    REQUIRE(selected.size() == 1);
    CHECK(selected[0].feature == std::vector<float>{10.0f, 11.0f, 12.0f, 13.0f});
}

TEST_CASE("select_pixels matches the exhaustive oracle on random heatmaps") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 60; ++trial) {
        const KeypointHeatmap hm = cfftest::random_heatmap(rng, 24, 16, 4);
        const FeatureMap fm = cfftest::random_features(rng, 24, 16, 3);
        const double threshold = trial % 10 == 0 ? 0.0 : rng.uniform01();
        const auto got = select_pixels(hm, fm, threshold);
        const auto want = select_oracle(hm, fm, threshold);
        REQUIRE(same_selection(got, want));
    }
}

TEST_CASE("selection is monotone: raising the threshold never adds pixels") {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const KeypointHeatmap hm = cfftest::random_heatmap(rng, 24, 16, 3);
        const FeatureMap fm = cfftest::random_features(rng, 24, 16, 2);
        double lo = rng.uniform01();
        double hi = rng.uniform01();
        if (lo > hi) std::swap(lo, hi);
        const auto at_lo = select_pixels(hm, fm, lo);
        const auto at_hi = select_pixels(hm, fm, hi);
        CHECK(at_hi.size() <= at_lo.size());
        std::set<std::pair<int, int>> lo_set;
        for (const auto& px : at_lo) lo_set.emplace(px.u, px.v);
        for (const auto& px : at_hi) CHECK(lo_set.count({px.u, px.v}) == 1);
    }
}

TEST_CASE("threshold zero selects every pixel") {
    SplitMix64 rng(505);
    const KeypointHeatmap hm = cfftest::random_heatmap(rng, 20, 12, 3);
    const FeatureMap fm = cfftest::random_features(rng, 20, 12, 2);
    CHECK(select_pixels(hm, fm, 0.0).size() == size_t(20 * 12));
}

TEST_CASE("extract_peaks finds a single isolated maximum") {
    KeypointHeatmap hm(8, 6, 2, 4);
    hm.at(1, 3, 4) = 0.8f;
    const auto peaks = extract_peaks(hm);
    // every zero pixel has an equal neighbor, so only the splat survives
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].u == 4);
    CHECK(peaks[0].v == 3);
    CHECK(peaks[0].class_id == 1);
    CHECK(peaks[0].score == 0.8f);
}

TEST_CASE("plateaus are not peaks: equal neighbors suppress each other") {
    KeypointHeatmap hm(6, 4, 1, 4);
    hm.at(0, 1, 2) = 0.9f;
    hm.at(0, 1, 3) = 0.9f;  // two-pixel plateau
    CHECK(extract_peaks(hm).empty());
}

TEST_CASE("a corner pixel can be a peak against its three neighbors") {
    KeypointHeatmap hm(4, 3, 1, 4);
    hm.at(0, 0, 0) = 0.6f;
    hm.at(0, 0, 1) = 0.2f;
    hm.at(0, 1, 0) = 0.2f;
    hm.at(0, 1, 1) = 0.2f;
    const auto peaks = extract_peaks(hm);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].u == 0);
    CHECK(peaks[0].v == 0);
}

TEST_CASE("extract_peaks matches the exhaustive oracle on random heatmaps") {
    SplitMix64 rng(606);
    for (int trial = 0; trial < 60; ++trial) {
        const KeypointHeatmap hm = cfftest::random_heatmap(rng, 20, 14, 3);
        const auto got = extract_peaks(hm);
        const auto want = peaks_oracle(hm);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].u == want[i].u);
            CHECK(got[i].v == want[i].v);
            CHECK(got[i].class_id == want[i].class_id);
            CHECK(got[i].score == want[i].score);
        }
    }
}

// SPDX-License-Identifier: Apache-2.0
#include "houghface/matcher.hpp"

#include <cmath>
#include <limits>

#include "houghface/errors.hpp"

namespace houghface {

double chiSquare(const std::array<double, 4>& f1, const std::array<double, 4>& f2) {
    double sum = 0.0;
    for (int m = 0; m < 4; ++m) {
        if (f1[m] < 0.0 || f2[m] < 0.0)
            throw ConfigError("chi_square: components must be non-negative");
        const double denom = f1[m] + f2[m];
        if (denom == 0.0) continue;  // both zero: no evidence of difference
        const double diff = f1[m] - f2[m];
        sum += (diff * diff) / (denom * denom);
    }
    return sum;
}

bool blockGate(int ax, int ay, int bx, int by, double th1) {
    const double dx = ax - bx;
    const double dy = ay - by;
    return dx * dx + dy * dy < th1 * th1;
}

std::array<double, 4> encodeBlockFeature(const FaceDescriptor::Entry& e,
                                         const PipelineConfig& cfg) {
    // Shift into non-negative coordinates: rho by the accumulator bound,
    // theta from [-90, 90) into [0, 180).
    const double rho_shift =
        std::ceil(rhoBound(cfg.block_size) / cfg.hough.rho_step) * cfg.hough.rho_step;
    return {e.peak1.rho + rho_shift, e.peak1.theta + 90.0,
            e.peak2.rho + rho_shift, e.peak2.theta + 90.0};
}

double dissimilarity(const FaceDescriptor& probe, const FaceDescriptor& train,
                     const PipelineConfig& cfg, bool allow_fingerprint_mismatch) {
    if (probe.entries.empty())
        throw ConfigError("dissimilarity: probe descriptor has no blocks");
    if (!allow_fingerprint_mismatch && probe.config_fingerprint != train.config_fingerprint)
        throw ConfigError(
            "dissimilarity: descriptors were extracted under different configs; "
            "peaks from different quantizations are incomparable");

    const double th1 = cfg.effectiveGate();
    const bool use_min = cfg.aggregation == Aggregation::Min;

    std::vector<std::array<double, 4>> train_features;
    train_features.reserve(train.entries.size());
    for (const auto& l : train.entries) train_features.push_back(encodeBlockFeature(l, cfg));

    double sum = 0.0;
    for (const auto& k : probe.entries) {
        const auto fk = encodeBlockFeature(k, cfg);
        double agg = use_min ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
        bool gated = false;
        for (std::size_t l = 0; l < train.entries.size(); ++l) {
            if (!blockGate(k.x, k.y, train.entries[l].x, train.entries[l].y, th1)) continue;
            gated = true;
            const double c = chiSquare(fk, train_features[l]);
            agg = use_min ? std::min(agg, c) : std::max(agg, c);
        }
        sum += gated ? agg : cfg.empty_gate_penalty;
    }
    return sum / static_cast<double>(probe.entries.size());
}

MatchResult classify(const FaceDescriptor& probe, const Gallery& gallery,
                     const PipelineConfig& cfg, bool allow_fingerprint_mismatch) {
    if (gallery.entries.empty()) throw ConfigError("classify: empty gallery");

    MatchResult result;
    result.per_gallery_distances.reserve(gallery.entries.size());
    for (std::size_t i = 0; i < gallery.entries.size(); ++i) {
        const double d = dissimilarity(probe, gallery.entries[i].descriptor, cfg,
                                       allow_fingerprint_mismatch);
        result.per_gallery_distances.emplace_back(i, d);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.per_gallery_distances.size(); ++i)
        if (result.per_gallery_distances[i].second < result.per_gallery_distances[best].second)
            best = i;

    result.best_training_index = best;
    result.distance = result.per_gallery_distances[best].second;
    result.class_id = gallery.entries[best].class_id;
    return result;
}

}  // namespace houghface

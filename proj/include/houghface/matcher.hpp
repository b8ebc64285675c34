// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "houghface/descriptor.hpp"

namespace houghface {

/// Enrolled descriptors with their class labels.
struct Gallery {
    struct Entry {
        FaceDescriptor descriptor;
        std::string class_id;
    };
    std::vector<Entry> entries;
};

struct MatchResult {
    std::string class_id;
    std::size_t best_training_index = 0;
    double distance = 0.0;
    std::vector<std::pair<std::size_t, double>> per_gallery_distances;
};

/// Chi-square dissimilarity with squared denominator:
/// sum over components of (a - b)^2 / (a + b)^2, terms with a zero
/// denominator contributing 0. Components must be non-negative.
double chiSquare(const std::array<double, 4>& f1, const std::array<double, 4>& f2);

/// Spatial gate: true iff the Euclidean distance between the two block
/// origins is strictly below th1.
bool blockGate(int ax, int ay, int bx, int by, double th1);

/// A block's two peaks flattened to four non-negative scalars:
/// (rho1 + shift, theta1 + 90, rho2 + shift, theta2 + 90) where shift is the
/// accumulator's rho bound, so every component is >= 0.
std::array<double, 4> encodeBlockFeature(const FaceDescriptor::Entry& e,
                                         const PipelineConfig& cfg);

/// Gated dissimilarity D between a probe and a training descriptor: the mean
/// over probe blocks of the aggregated chi-square score against the training
/// blocks within gate range; probe blocks with no gated partner contribute
/// cfg.empty_gate_penalty. Descriptors with different config fingerprints
/// are refused unless allow_fingerprint_mismatch is set.
double dissimilarity(const FaceDescriptor& probe, const FaceDescriptor& train,
                     const PipelineConfig& cfg, bool allow_fingerprint_mismatch = false);

/// Nearest-neighbour classification: D against every gallery entry, argmin
/// wins, distance ties go to the earlier index.
MatchResult classify(const FaceDescriptor& probe, const Gallery& gallery,
                     const PipelineConfig& cfg, bool allow_fingerprint_mismatch = false);

}  // namespace houghface

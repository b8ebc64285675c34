// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "houghface/hough.hpp"
#include "houghface/raster.hpp"

namespace houghface {

/// How the per-block chi-square scores over the gated candidates are folded.
/// Min restores the self-match-is-zero property; Max is the literal formula.
enum class Aggregation { Min, Max };

/// Everything the pipeline needs to turn an image into a descriptor and to
/// compare two descriptors. peak_pool and gate_threshold default to the
/// block size when left at 0.
struct PipelineConfig {
    int target_width = 92;
    int target_height = 112;
    int se_length = 3;
    int block_size = 16;
    long num_candidates = 500000;
    double target_fraction = 0.25;
    int peak_pool = 0;            ///< 0 = use block_size
    HoughConfig hough;
    std::uint64_t rng_seed = 0;
    double gate_threshold = 0.0;  ///< th1 in pixels; 0 = use block_size
    Aggregation aggregation = Aggregation::Min;
    double empty_gate_penalty = 1000.0;

    int effectivePeakPool() const { return peak_pool > 0 ? peak_pool : block_size; }
    double effectiveGate() const { return gate_threshold > 0.0 ? gate_threshold : block_size; }

    void validate() const;

    /// Stable 64-bit FNV-1a hash over the effective field values. Two
    /// configs that extract or match differently hash differently.
    std::uint64_t fingerprint() const;

    /// Flat `key = value` text, '#' comments allowed, unknown keys rejected
    /// with their line number.
    static PipelineConfig fromFile(const std::string& path);
    static PipelineConfig fromStream(std::istream& in, const std::string& source_name);
};

const char* aggregationName(Aggregation agg);
Aggregation aggregationFromName(const std::string& name);

/// Per-image feature: for each surviving block its origin and the two
/// centroid-nearest Hough peaks.
struct FaceDescriptor {
    struct Entry {
        int x = 0;
        int y = 0;
        Peak peak1;
        Peak peak2;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    std::string image_id;
    std::uint64_t config_fingerprint = 0;
    std::vector<Entry> entries;

    friend bool operator==(const FaceDescriptor&, const FaceDescriptor&) = default;
};

/// Full extraction pipeline on one grayscale image: rescale, 8-direction
/// gradient, mean/median threshold, two-pass line dilation, random
/// significant-block selection, then per block the Hough transform, top-m
/// peak pool, centroid, and nearest-two selection. Entries come out in
/// block (y, x) order and the result is fully determined by (img, cfg).
FaceDescriptor extractDescriptor(const GrayImage& img, const PipelineConfig& cfg,
                                 const std::string& image_id);

/// Line-oriented text format:
///   line 1: HFD1 <16-hex fingerprint> <entry count>
///   line 2: <image id>
///   then one line per entry: x y rho1 theta1 v1 rho2 theta2 v2
/// Floating-point fields use the shortest round-tripping decimal form, so
/// read(write(d)) == d field-for-field.
void writeDescriptor(const FaceDescriptor& d, std::ostream& out);
void writeDescriptorFile(const FaceDescriptor& d, const std::string& path);
FaceDescriptor readDescriptor(std::istream& in, const std::string& source_name);
FaceDescriptor readDescriptorFile(const std::string& path);

}  // namespace houghface

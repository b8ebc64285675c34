// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "houghface/errors.hpp"
#include "houghface/raster.hpp"

namespace houghface {

/// Quantization of the (rho, theta) parameter space. The default covers
/// theta in [-90, 90) with 1-degree bins and 1-pixel rho bins; -90 and +90
/// describe the same line family with rho negated, so the half-open range
/// avoids double counting.
struct HoughConfig {
    double theta_min_deg = -90.0;
    double theta_step_deg = 1.0;
    int theta_bins = 180;
    double rho_step = 1.0;

    void validate() const;
};

/// Rounds half away from zero, the rho binning rule.
inline long roundAwayFromZero(double v) {
    return static_cast<long>(v >= 0.0 ? std::floor(v + 0.5) : std::ceil(v - 0.5));
}

/// Vote matrix of the standard Hough transform of one square block.
/// Rows are rho bins, columns theta bins. rho = 0 maps to row rho_offset.
struct HoughAccumulator {
    Raster<int> votes;
    int rho_offset = 0;
    HoughConfig config;

    int rhoBins() const { return static_cast<int>(votes.rows()); }
    int thetaBins() const { return static_cast<int>(votes.cols()); }

    double rhoOfBin(int r) const { return (r - rho_offset) * config.rho_step; }
    double thetaOfBin(int t) const { return config.theta_min_deg + t * config.theta_step_deg; }
};

/// One accumulator maximum, reported at its bin center.
struct Peak {
    double rho = 0.0;    ///< signed pixels
    double theta = 0.0;  ///< degrees
    int votes = 0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

/// Largest absolute rho a block of the given size can produce, ceil(sqrt(2) * size).
inline int rhoBound(int block_size) {
    return static_cast<int>(std::ceil(std::sqrt(2.0) * block_size));
}

namespace detail {
Raster<int> houghVotes(const std::vector<std::pair<int, int>>& points,
                       int block_size, const HoughConfig& cfg, int rho_offset);
}

/// Standard Hough transform of a square block of a binary image. Every set
/// pixel at block-local (x, y) adds one vote per theta column at the bin
/// nearest to rho = x*cos(theta) + y*sin(theta). Accepts any 0/1 Eigen
/// array expression, e.g. `bin.block(y, x, s, s)`.
template <typename Derived>
HoughAccumulator houghTransform(const Eigen::ArrayBase<Derived>& block_pixels,
                                const HoughConfig& cfg = {}) {
    cfg.validate();
    const int size = static_cast<int>(block_pixels.rows());
    if (block_pixels.cols() != size)
        throw ConfigError("hough_transform: block must be square, got " +
                          std::to_string(block_pixels.rows()) + "x" +
                          std::to_string(block_pixels.cols()));

    std::vector<std::pair<int, int>> points;  // (x, y), block-local
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if (block_pixels(y, x) != 0) points.emplace_back(x, y);

    HoughAccumulator acc;
    acc.config = cfg;
    acc.rho_offset = static_cast<int>(std::ceil(rhoBound(size) / cfg.rho_step));
    acc.votes = detail::houghVotes(points, size, cfg, acc.rho_offset);
    return acc;
}

/// The up-to-m nonzero cells with the largest votes, ordered by votes
/// descending, ties by (rho ascending, theta ascending). Fewer than m are
/// returned when fewer nonzero cells exist.
std::vector<Peak> topPeaks(const HoughAccumulator& acc, int m);

/// Arithmetic mean of (rho, theta) over the peaks. K-means with one cluster
/// converges to the mean in a single step, so the mean is computed directly.
std::pair<double, double> peakCentroid(const std::vector<Peak>& peaks);

/// The two peaks nearest to the centroid under Euclidean distance in raw
/// (pixel, degree) units, ordered nearest first. Distance ties fall back to
/// (votes descending, rho ascending, theta ascending). A single peak is
/// duplicated.
std::array<Peak, 2> selectNearestTwo(const std::vector<Peak>& peaks,
                                     std::pair<double, double> centroid);

}  // namespace houghface

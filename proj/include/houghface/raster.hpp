// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace houghface {

/// Dense row-major raster, indexed (row, col) = (y, x).
template <typename Scalar>
using Raster = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit single-channel image, intensities in [0, 255].
using GrayImage = Raster<std::uint8_t>;

/// Per-pixel sum of absolute differences to the 8 compass neighbours.
/// Values lie in [0, 8*255].
using GradientImage = Raster<int>;

/// Image with values restricted to {0, 1}.
using BinaryImage = Raster<std::uint8_t>;

/// Decoded raster before grayscale conversion: 1 (gray) or 3 (RGB)
/// interleaved channels, row-major.
struct RawImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;
};

inline int width(const GrayImage& img) { return static_cast<int>(img.cols()); }
inline int height(const GrayImage& img) { return static_cast<int>(img.rows()); }

}  // namespace houghface

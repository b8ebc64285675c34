// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "houghface/raster.hpp"

namespace houghface {

/// Grayscale conversion (Rec.601 luma for RGB input) followed by a bilinear
/// rescale to target_width x target_height. Inputs already at the target
/// size pass through untouched.
GrayImage normalizeInput(const RawImage& raw, int target_width, int target_height);

/// Bilinear resample with pixel-center alignment. Identity when the size
/// already matches.
GrayImage resizeBilinear(const GrayImage& img, int out_width, int out_height);

/// Sum of abs(neighbour - center) over the 8 compass neighbours.
/// Out-of-bounds neighbours contribute 0.
GradientImage gradient8dir(const GrayImage& img);

/// Threshold at T = (mean + median) / 2 of the gradient values; a pixel is
/// set iff its value is strictly greater than T. The median of an
/// even-length sequence is the mean of the two middle order statistics.
BinaryImage binaryThreshold(const GradientImage& grad);

/// Two-pass dilation with line structuring elements: a horizontal
/// 1 x se_length line, then a vertical se_length x 1 line, origin at the
/// center. se_length must be odd and >= 1.
BinaryImage dilateLinear(const BinaryImage& bin, int se_length);

}  // namespace houghface

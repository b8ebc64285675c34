// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "houghface/raster.hpp"

namespace houghface {

/// Decodes a PGM (P2/P5) or PNG file. PNG color images come back with
/// 3 channels; everything else is single-channel 8-bit. The container is
/// picked by magic bytes, not by file extension.
RawImage loadRaw(const std::string& path);

RawImage decodePgm(const std::string& path);
RawImage decodePng(const std::string& path);

/// Binary 8-bit PGM (P5). Used for all stage dumps except accumulators.
void writePgm(const std::string& path, const GrayImage& img);

/// ASCII PGM (P2) with an explicit maxval.
void writePgmAscii(const std::string& path, const Raster<int>& img, int maxval);

}  // namespace houghface

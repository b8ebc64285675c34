// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "houghface/raster.hpp"

namespace houghface {

/// Square region located by its top-left corner, carrying the count of set
/// pixels inside it.
struct Block {
    int x = 0;        ///< column of the top-left corner
    int y = 0;        ///< row of the top-left corner
    int size = 0;     ///< side length in pixels
    int white_count = 0;

    bool overlaps(const Block& other) const {
        return x < other.x + other.size && other.x < x + size &&
               y < other.y + other.size && other.y < y + size;
    }
};

/// Pairwise disjoint blocks over one image, sorted by (y, x).
struct BlockSet {
    std::vector<Block> blocks;
    int image_width = 0;
    int image_height = 0;
};

/// Cumulative-sum table over a binary image. Entry (r, c) holds the number
/// of set pixels in the rectangle of rows [0, r) and columns [0, c), so any
/// rectangle count is four lookups.
class SummedAreaTable {
public:
    explicit SummedAreaTable(const BinaryImage& bin);

    int imageWidth() const { return width_; }
    int imageHeight() const { return height_; }

    /// Set-pixel count of the w x h rectangle with top-left corner (x, y).
    int rectSum(int x, int y, int w, int h) const {
        return table_(y + h, x + w) - table_(y, x + w) - table_(y + h, x) + table_(y, x);
    }

    int total() const { return table_(height_, width_); }

private:
    Raster<int> table_;
    int width_;
    int height_;
};

SummedAreaTable buildSat(const BinaryImage& bin);

/// white_count / size^2 for a block, throws ConfigError if the block falls
/// outside the table.
double whiteFraction(const SummedAreaTable& sat, const Block& block);

/// Draws num_candidates random square blocks (top-left corner uniform over
/// the valid positions, mt19937_64 seeded with rng_seed, modulo mapping so
/// the sequence is identical on every platform) and keeps the significant,
/// mutually disjoint ones:
///
///  - a candidate passes iff its white fraction strictly exceeds the global
///    white fraction M of the image;
///  - a candidate that overlaps already selected blocks must strictly beat
///    the white count of every one of them, in which case it replaces them
///    all; otherwise it is rejected;
///  - if more than round(target_fraction * floor(W/size) * floor(H/size))
///    blocks survive, the top ones by white count are kept, ties resolved
///    toward smaller (y, x).
///
/// The result is sorted by (y, x) and fully determined by the arguments.
BlockSet selectSignificantBlocks(const BinaryImage& bin,
                                 int block_size,
                                 long num_candidates,
                                 double target_fraction,
                                 std::uint64_t rng_seed);

}  // namespace houghface

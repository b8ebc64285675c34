// SPDX-License-Identifier: Apache-2.0
#include "houghface/blocks.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "houghface/errors.hpp"

namespace houghface {

SummedAreaTable::SummedAreaTable(const BinaryImage& bin)
    : width_(static_cast<int>(bin.cols())), height_(static_cast<int>(bin.rows())) {
    table_ = Raster<int>::Zero(height_ + 1, width_ + 1);
    for (int y = 0; y < height_; ++y) {
        int row_sum = 0;
        for (int x = 0; x < width_; ++x) {
            row_sum += bin(y, x);
            table_(y + 1, x + 1) = table_(y, x + 1) + row_sum;
        }
    }
}

SummedAreaTable buildSat(const BinaryImage& bin) { return SummedAreaTable(bin); }

double whiteFraction(const SummedAreaTable& sat, const Block& block) {
    if (block.size <= 0 || block.x < 0 || block.y < 0 ||
        block.x + block.size > sat.imageWidth() || block.y + block.size > sat.imageHeight())
        throw ConfigError("white_fraction: block out of bounds");
    const int count = sat.rectSum(block.x, block.y, block.size, block.size);
    return static_cast<double>(count) / (static_cast<double>(block.size) * block.size);
}

BlockSet selectSignificantBlocks(const BinaryImage& bin,
                                 int block_size,
                                 long num_candidates,
                                 double target_fraction,
                                 std::uint64_t rng_seed) {
    const int w = static_cast<int>(bin.cols());
    const int h = static_cast<int>(bin.rows());
    if (block_size < 1 || block_size > std::min(w, h))
        throw ConfigError("select_significant_blocks: block size " + std::to_string(block_size) +
                          " does not fit a " + std::to_string(w) + "x" + std::to_string(h) +
                          " image");
    if (num_candidates < 1)
        throw ConfigError("select_significant_blocks: need at least one candidate");
    if (!(target_fraction > 0.0) || target_fraction > 1.0)
        throw ConfigError("select_significant_blocks: target fraction must be in (0, 1]");

    const SummedAreaTable sat(bin);
    const long long total_white = sat.total();
    const long long image_area = static_cast<long long>(w) * h;
    const long long block_area = static_cast<long long>(block_size) * block_size;

    const std::uint64_t x_range = static_cast<std::uint64_t>(w - block_size + 1);
    const std::uint64_t y_range = static_cast<std::uint64_t>(h - block_size + 1);

    // Modulo mapping instead of uniform_int_distribution keeps the candidate
    // sequence identical across standard library implementations.
    std::mt19937_64 rng(rng_seed);

    std::vector<Block> selected;
    std::vector<std::size_t> overlapped;
    for (long i = 0; i < num_candidates; ++i) {
        Block cand;
        cand.x = static_cast<int>(rng() % x_range);
        cand.y = static_cast<int>(rng() % y_range);
        cand.size = block_size;
        cand.white_count = sat.rectSum(cand.x, cand.y, block_size, block_size);

        // criterion (a): white fraction strictly above the global mean M,
        // compared exactly by cross-multiplication
        if (static_cast<long long>(cand.white_count) * image_area <= total_white * block_area)
            continue;

        // criterion (b): must strictly beat every selected block it overlaps
        overlapped.clear();
        bool beaten = false;
        for (std::size_t s = 0; s < selected.size(); ++s) {
            if (!cand.overlaps(selected[s])) continue;
            if (selected[s].white_count >= cand.white_count) {
                beaten = true;
                break;
            }
            overlapped.push_back(s);
        }
        if (beaten) continue;
        for (auto it = overlapped.rbegin(); it != overlapped.rend(); ++it)
            selected.erase(selected.begin() + static_cast<std::ptrdiff_t>(*it));
        selected.push_back(cand);
    }

    const long tiles = static_cast<long>(w / block_size) * (h / block_size);
    const long n_target = std::lround(target_fraction * static_cast<double>(tiles));
    if (static_cast<long>(selected.size()) > n_target) {
        std::sort(selected.begin(), selected.end(), [](const Block& a, const Block& b) {
            if (a.white_count != b.white_count) return a.white_count > b.white_count;
            if (a.y != b.y) return a.y < b.y;
            return a.x < b.x;
        });
        selected.resize(static_cast<std::size_t>(std::max(n_target, 0L)));
    }

    std::sort(selected.begin(), selected.end(), [](const Block& a, const Block& b) {
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });

    BlockSet result;
    result.blocks = std::move(selected);
    result.image_width = w;
    result.image_height = h;
    return result;
}

}  // namespace houghface

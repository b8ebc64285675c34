// SPDX-License-Identifier: Apache-2.0
#include "houghface/imageops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "houghface/errors.hpp"

namespace houghface {

namespace {

inline std::uint8_t roundToByte(double v) {
    long r = std::lround(v);
    return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

}  // namespace

GrayImage normalizeInput(const RawImage& raw, int target_width, int target_height) {
    if (raw.width <= 0 || raw.height <= 0)
        throw ConfigError("normalize_input: zero-dimension image");
    if (raw.channels != 1 && raw.channels != 3)
        throw ConfigError("normalize_input: unsupported channel count " +
                          std::to_string(raw.channels));
    if (raw.data.size() != static_cast<std::size_t>(raw.width) * raw.height * raw.channels)
        throw ConfigError("normalize_input: pixel buffer size mismatch");

    GrayImage gray(raw.height, raw.width);
    if (raw.channels == 1) {
        std::copy(raw.data.begin(), raw.data.end(), gray.data());
    } else {
        const std::uint8_t* p = raw.data.data();
        for (int y = 0; y < raw.height; ++y) {
            for (int x = 0; x < raw.width; ++x, p += 3) {
                // Rec.601 luma
                gray(y, x) = roundToByte(0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]);
            }
        }
    }
    return resizeBilinear(gray, target_width, target_height);
}

GrayImage resizeBilinear(const GrayImage& img, int out_width, int out_height) {
    const int in_w = static_cast<int>(img.cols());
    const int in_h = static_cast<int>(img.rows());
    if (in_w <= 0 || in_h <= 0) throw ConfigError("resize: empty input image");
    if (out_width <= 0 || out_height <= 0) throw ConfigError("resize: empty output size");
    if (in_w == out_width && in_h == out_height) return img;

    const double sx = static_cast<double>(in_w) / out_width;
    const double sy = static_cast<double>(in_h) / out_height;

    GrayImage out(out_height, out_width);
    for (int oy = 0; oy < out_height; ++oy) {
        const double fy = std::clamp((oy + 0.5) * sy - 0.5, 0.0, in_h - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, in_h - 1);
        const double wy = fy - y0;
        for (int ox = 0; ox < out_width; ++ox) {
            const double fx = std::clamp((ox + 0.5) * sx - 0.5, 0.0, in_w - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, in_w - 1);
            const double wx = fx - x0;
            const double top = (1.0 - wx) * img(y0, x0) + wx * img(y0, x1);
            const double bot = (1.0 - wx) * img(y1, x0) + wx * img(y1, x1);
            out(oy, ox) = roundToByte((1.0 - wy) * top + wy * bot);
        }
    }
    return out;
}

GradientImage gradient8dir(const GrayImage& img) {
    const int h = static_cast<int>(img.rows());
    const int w = static_cast<int>(img.cols());
    if (h <= 0 || w <= 0) throw ConfigError("gradient_8dir: empty image");

    const Raster<int> c = img.cast<int>();
    GradientImage grad = GradientImage::Zero(h, w);

    static constexpr int kDirs[8][2] = {{-1, 0}, {1, 0},  {0, -1}, {0, 1},
                                        {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    for (const auto& d : kDirs) {
        const int dy = d[0], dx = d[1];
        // Region of center pixels whose (dy, dx) neighbour is in bounds.
        const int r0 = std::max(0, -dy);
        const int c0 = std::max(0, -dx);
        const int rows = h - std::abs(dy);
        const int cols = w - std::abs(dx);
        if (rows <= 0 || cols <= 0) continue;
        grad.block(r0, c0, rows, cols) +=
            (c.block(r0 + dy, c0 + dx, rows, cols) - c.block(r0, c0, rows, cols)).abs();
    }
    return grad;
}

BinaryImage binaryThreshold(const GradientImage& grad) {
    const Eigen::Index n = grad.size();
    if (n <= 0) throw ConfigError("binary_threshold: empty image");

    long long sum = 0;
    for (const int* p = grad.data(); p != grad.data() + n; ++p) sum += *p;
    const double mean = static_cast<double>(sum) / static_cast<double>(n);

    std::vector<int> sorted(grad.data(), grad.data() + n);
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    double median = sorted[mid];
    if (sorted.size() % 2 == 0) {
        const int lower = *std::max_element(sorted.begin(), sorted.begin() + mid);
        median = (median + lower) / 2.0;
    }

    const double threshold = (mean + median) / 2.0;
    return (grad.cast<double>() > threshold).cast<std::uint8_t>();
}

BinaryImage dilateLinear(const BinaryImage& bin, int se_length) {
    if (se_length < 1 || se_length % 2 == 0)
        throw ConfigError("dilate_linear: structuring element length must be odd and >= 1, got " +
                          std::to_string(se_length));
    const int h = static_cast<int>(bin.rows());
    const int w = static_cast<int>(bin.cols());
    const int r = se_length / 2;

    // Horizontal 1 x L pass, then vertical L x 1 on its result.
    BinaryImage horiz = bin;
    for (int d = 1; d <= r; ++d) {
        const int cols = w - d;
        if (cols <= 0) break;
        horiz.block(0, 0, h, cols) = horiz.block(0, 0, h, cols).max(bin.block(0, d, h, cols));
        horiz.block(0, d, h, cols) = horiz.block(0, d, h, cols).max(bin.block(0, 0, h, cols));
    }
    BinaryImage out = horiz;
    for (int d = 1; d <= r; ++d) {
        const int rows = h - d;
        if (rows <= 0) break;
        out.block(0, 0, rows, w) = out.block(0, 0, rows, w).max(horiz.block(d, 0, rows, w));
        out.block(d, 0, rows, w) = out.block(d, 0, rows, w).max(horiz.block(0, 0, rows, w));
    }
    return out;
}

}  // namespace houghface

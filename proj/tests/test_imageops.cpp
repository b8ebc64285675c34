// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "houghface/errors.hpp"
#include "houghface/imageops.hpp"
#include "synthetic.hpp"

using namespace houghface;

namespace {

// Independent reference: per-pixel double loop over the 8 neighbours,
// skipping the out-of-bounds ones.
GradientImage gradientBruteForce(const GrayImage& img) {
    const int h = static_cast<int>(img.rows());
    const int w = static_cast<int>(img.cols());
    GradientImage out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int sum = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int ny = y + dy, nx = x + dx;
                    if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
                    sum += std::abs(static_cast<int>(img(ny, nx)) - static_cast<int>(img(y, x)));
                }
            out(y, x) = sum;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("normalize: matching dimensions pass through unchanged") {
    RawImage raw;
    raw.width = 92;
    raw.height = 112;
    raw.channels = 1;
    raw.data.resize(92 * 112);
    std::mt19937 rng(7);
    for (auto& v : raw.data) v = static_cast<std::uint8_t>(rng() % 256);

    const GrayImage out = normalizeInput(raw, 92, 112);
    REQUIRE(out.rows() == 112);
    REQUIRE(out.cols() == 92);
    for (int y = 0; y < 112; ++y)
        for (int x = 0; x < 92; ++x) CHECK(out(y, x) == raw.data[y * 92 + x]);
}

TEST_CASE("normalize: constant field survives downscale") {
    RawImage raw;
    raw.width = 184;
    raw.height = 224;
    raw.channels = 1;
    raw.data.assign(184 * 224, 100);
    const GrayImage out = normalizeInput(raw, 92, 112);
    REQUIRE(out.rows() == 112);
    REQUIRE(out.cols() == 92);
    CHECK((out == 100).all());
}

TEST_CASE("normalize: 4x4 checkerboard to 2x2 averages the four corners") {
    GrayImage img(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img(y, x) = ((x + y) % 2 == 0) ? 0 : 255;
    const GrayImage out = resizeBilinear(img, 2, 2);
    // each output center sits between two 0s and two 255s: 127.5
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
            const int v = out(y, x);
            CHECK((v == 127 || v == 128));
        }
}

TEST_CASE("normalize: luma conversion of a pure color image") {
    RawImage raw;
    raw.width = 2;
    raw.height = 1;
    raw.channels = 3;
    raw.data = {255, 0, 0, 0, 255, 0};  // red, green
    const GrayImage out = normalizeInput(raw, 2, 1);
    CHECK(out(0, 0) == 76);   // round(0.299 * 255)
    CHECK(out(0, 1) == 150);  // round(0.587 * 255)
}

TEST_CASE("normalize: zero-dimension input rejected") {
    RawImage raw;
    raw.width = 0;
    raw.height = 4;
    raw.channels = 1;
    CHECK_THROWS_AS(normalizeInput(raw, 92, 112), ConfigError);
}

TEST_CASE("gradient: constant image is all zero") {
    const GrayImage img = GrayImage::Constant(6, 9, 42);
    const GradientImage g = gradient8dir(img);
    CHECK((g == 0).all());
}

TEST_CASE("gradient: single bright center pixel") {
    GrayImage img = GrayImage::Zero(3, 3);
    img(1, 1) = 10;
    const GradientImage g = gradient8dir(img);
    CHECK(g(1, 1) == 80);  // 8 neighbours each differ by 10
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            if (x != 1 || y != 1) CHECK(g(y, x) == 10);
}

TEST_CASE("gradient: vertical step edge") {
    GrayImage img(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img(y, x) = x < 2 ? 0 : 100;
    const GradientImage g = gradient8dir(img);
    // interior pixels of column 1 see NE, E, SE across the step
    CHECK(g(1, 1) == 300);
    CHECK(g(2, 1) == 300);
}

TEST_CASE("gradient: matches brute force on random images") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 40);
        const int h = 1 + static_cast<int>(rng() % 40);
        const GrayImage img = synth::randomGray(w, h, rng());
        const GradientImage expected = gradientBruteForce(img);
        const GradientImage got = gradient8dir(img);
        REQUIRE((got == expected).all());
    }
}

TEST_CASE("gradient: invariant under global intensity shift") {
    const GrayImage img = synth::randomGray(30, 24, 991, 200);
    GrayImage shifted = img;
    shifted += 55;
    CHECK((gradient8dir(img) == gradient8dir(shifted)).all());
}

TEST_CASE("threshold: all-zero gradient stays empty") {
    const GradientImage g = GradientImage::Zero(5, 5);
    CHECK((binaryThreshold(g) == 0).all());
}

TEST_CASE("threshold: uniform gradient never exceeds itself") {
    const GradientImage g = GradientImage::Constant(4, 6, 50);
    CHECK((binaryThreshold(g) == 0).all());
}

TEST_CASE("threshold: one outlier among zeros") {
    GradientImage g = GradientImage::Zero(3, 3);
    g(2, 0) = 100;
    // mean = 100/9, median = 0, T ~ 5.56
    const BinaryImage b = binaryThreshold(g);
    CHECK(b.cast<int>().sum() == 1);
    CHECK(b(2, 0) == 1);
}

TEST_CASE("threshold: even-length median uses the two middle order statistics") {
    GradientImage g(1, 4);
    g(0, 0) = 0;
    g(0, 1) = 10;
    g(0, 2) = 20;
    g(0, 3) = 90;
    // mean 30, median 15, T 22.5: only 90 exceeds
    const BinaryImage b = binaryThreshold(g);
    CHECK(b.cast<int>().sum() == 1);
    CHECK(b(0, 3) == 1);
}

TEST_CASE("threshold: set pixels never outnumber nonzero gradient pixels") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        GradientImage g(10, 12);
        for (Eigen::Index i = 0; i < g.size(); ++i) *(g.data() + i) = static_cast<int>(rng() % 60);
        const BinaryImage b = binaryThreshold(g);
        CHECK(b.cast<int>().sum() <= (g > 0).count());
    }
}

TEST_CASE("dilate: empty image stays empty") {
    const BinaryImage b = BinaryImage::Zero(8, 8);
    CHECK((dilateLinear(b, 3) == 0).all());
}

TEST_CASE("dilate: single pixel grows into a 3x3 square") {
    BinaryImage b = BinaryImage::Zero(11, 11);
    b(5, 5) = 1;
    const BinaryImage d = dilateLinear(b, 3);
    CHECK(d.cast<int>().sum() == 9);
    for (int y = 4; y <= 6; ++y)
        for (int x = 4; x <= 6; ++x) CHECK(d(y, x) == 1);
}

TEST_CASE("dilate: closes a one-pixel horizontal gap") {
    BinaryImage b = BinaryImage::Zero(10, 10);
    b(5, 3) = 1;  // (x=3, y=5)
    b(5, 5) = 1;  // (x=5, y=5)
    const BinaryImage d = dilateLinear(b, 3);
    CHECK(d(5, 4) == 1);
}

TEST_CASE("dilate: even structuring element rejected") {
    const BinaryImage b = BinaryImage::Zero(4, 4);
    CHECK_THROWS_AS(dilateLinear(b, 4), ConfigError);
    CHECK_THROWS_AS(dilateLinear(b, 0), ConfigError);
}

TEST_CASE("dilate: extensive and monotone") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const BinaryImage sub = synth::randomBinary(20, 16, rng(), 0.2);
        BinaryImage sup = sub;
        // grow a superset by setting extra pixels
        for (int extra = 0; extra < 30; ++extra)
            sup(rng() % 16, rng() % 20) = 1;
        sup = sup.max(sub);

        const BinaryImage dsub = dilateLinear(sub, 3);
        const BinaryImage dsup = dilateLinear(sup, 3);
        CHECK((dsub >= sub).all());   // extensive
        CHECK((dsup >= dsub).all());  // monotone
    }
}

TEST_CASE("dilate: se_length 1 is the identity") {
    const BinaryImage b = synth::randomBinary(12, 9, 31);
    CHECK((dilateLinear(b, 1) == b).all());
}

TEST_CASE("dilate: longer elements reach further") {
    BinaryImage b = BinaryImage::Zero(15, 15);
    b(7, 7) = 1;
    const BinaryImage d = dilateLinear(b, 5);
    CHECK(d.cast<int>().sum() == 25);
    CHECK(d(5, 5) == 1);
    CHECK(d(9, 9) == 1);
    CHECK(d(4, 7) == 0);
}

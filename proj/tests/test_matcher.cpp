// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "houghface/errors.hpp"
#include "houghface/matcher.hpp"
#include "synthetic.hpp"

using namespace houghface;

namespace {

FaceDescriptor::Entry entry(int x, int y, Peak p1, Peak p2) {
    FaceDescriptor::Entry e;
    e.x = x;
    e.y = y;
    e.peak1 = p1;
    e.peak2 = p2;
    return e;
}

FaceDescriptor descriptorOf(std::vector<FaceDescriptor::Entry> entries,
                            std::uint64_t fingerprint) {
    FaceDescriptor d;
    d.image_id = "synthetic";
    d.config_fingerprint = fingerprint;
    d.entries = std::move(entries);
    return d;
}

}  // namespace

TEST_CASE("chi-square: identical vectors score zero") {
    const std::array<double, 4> f = {1.0, 2.5, 0.0, 9.0};
    CHECK(chiSquare(f, f) == 0.0);
}

TEST_CASE("chi-square: single unit difference against zeros") {
    CHECK(chiSquare({1, 0, 0, 0}, {0, 0, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("chi-square: uniform vectors with the printed squared denominator") {
    // 4 terms of (2-6)^2 / (2+6)^2 = 16/64
    CHECK(chiSquare({2, 2, 2, 2}, {6, 6, 6, 6}) == doctest::Approx(1.0));
}

TEST_CASE("chi-square: negative components rejected") {
    CHECK_THROWS_AS(chiSquare({-1, 0, 0, 0}, {0, 0, 0, 0}), ConfigError);
}

TEST_CASE("chi-square: symmetric and zero only for equal vectors") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uv(0.0, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::array<double, 4> a, b;
        for (int i = 0; i < 4; ++i) {
            a[i] = uv(rng);
            b[i] = rng() % 3 == 0 ? a[i] : uv(rng);
        }
        CHECK(chiSquare(a, b) == doctest::Approx(chiSquare(b, a)));
        if (a == b) {
            CHECK(chiSquare(a, b) == 0.0);
        } else {
            CHECK(chiSquare(a, b) > 0.0);
        }
    }
}

TEST_CASE("gate: identical origins pass") { CHECK(blockGate(4, 9, 4, 9, 16.0)); }

TEST_CASE("gate: boundary distance fails (strict less-than)") {
    CHECK(!blockGate(0, 0, 16, 0, 16.0));
    CHECK(blockGate(0, 0, 15, 0, 16.0));
}

TEST_CASE("gate: 3-4-5 triangle inside a gate of 6") {
    CHECK(blockGate(3, 4, 0, 0, 6.0));
    CHECK(!blockGate(3, 4, 0, 0, 5.0));
}

TEST_CASE("gate: symmetric") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int ax = static_cast<int>(rng() % 90), ay = static_cast<int>(rng() % 110);
        const int bx = static_cast<int>(rng() % 90), by = static_cast<int>(rng() % 110);
        const double th = 1.0 + rng() % 30;
        CHECK(blockGate(ax, ay, bx, by, th) == blockGate(bx, by, ax, ay, th));
    }
}

TEST_CASE("feature encoding: shifted components are non-negative") {
    PipelineConfig cfg;
    const auto e = entry(0, 0, {-23.0, -90.0, 1}, {23.0, 89.0, 1});
    const auto f = encodeBlockFeature(e, cfg);
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(0.0));
    CHECK(f[2] == doctest::Approx(46.0));
    CHECK(f[3] == doctest::Approx(179.0));
}

TEST_CASE("dissimilarity: self distance is zero under min aggregation") {
    PipelineConfig cfg;
    const FaceDescriptor d = descriptorOf(
        {
            entry(10, 10, {5, 0, 16}, {5, 1, 16}),
            entry(40, 60, {0, -45, 12}, {1, -44, 9}),
            entry(12, 90, {-3, 30, 7}, {2, 10, 5}),
        },
        cfg.fingerprint());
    CHECK(dissimilarity(d, d, cfg) == 0.0);
}

TEST_CASE("dissimilarity: all blocks out of gate range pay the penalty") {
    PipelineConfig cfg;
    const FaceDescriptor probe =
        descriptorOf({entry(0, 0, {5, 0, 16}, {5, 1, 16})}, cfg.fingerprint());
    const FaceDescriptor train =
        descriptorOf({entry(70, 90, {5, 0, 16}, {5, 1, 16})}, cfg.fingerprint());
    CHECK(dissimilarity(probe, train, cfg) == doctest::Approx(cfg.empty_gate_penalty));
}

TEST_CASE("dissimilarity: matches a hand-computed gated table") {
    PipelineConfig cfg;  // th1 = 16, min aggregation
    const Peak pa{5, 0, 16}, pb{5, 1, 16}, pc{0, -45, 12}, pd{1, -44, 9};

    const FaceDescriptor probe = descriptorOf(
        {
            entry(10, 10, pa, pb),   // gates train blocks at (10,10) and (20,18)
            entry(50, 60, pc, pd),   // gates train block at (55, 64)
        },
        cfg.fingerprint());
    const FaceDescriptor train = descriptorOf(
        {
            entry(10, 10, pc, pd),
            entry(20, 18, pa, pb),
            entry(55, 64, pa, pd),
        },
        cfg.fingerprint());

    // brute-force evaluation of the same formula in the test
    auto chi = [&](const FaceDescriptor::Entry& a, const FaceDescriptor::Entry& b) {
        return chiSquare(encodeBlockFeature(a, cfg), encodeBlockFeature(b, cfg));
    };
    double expected = 0.0;
    {
        // probe block 0: train 0 at distance 0, train 1 at sqrt(100+64) < 16
        const double c0 = chi(probe.entries[0], train.entries[0]);
        const double c1 = chi(probe.entries[0], train.entries[1]);
        expected += std::min(c0, c1);
        // probe block 1: only train 2 at distance sqrt(25+16) < 16
        expected += chi(probe.entries[1], train.entries[2]);
    }
    expected /= 2.0;

    CHECK(dissimilarity(probe, train, cfg) == doctest::Approx(expected));
    CHECK(expected > 0.0);
}

TEST_CASE("dissimilarity: max aggregation picks the worst gated score") {
    PipelineConfig cfg;
    cfg.aggregation = Aggregation::Max;
    const Peak pa{5, 0, 16}, pb{5, 1, 16}, pc{0, -45, 12}, pd{1, -44, 9};
    const FaceDescriptor probe = descriptorOf({entry(10, 10, pa, pb)}, cfg.fingerprint());
    const FaceDescriptor train = descriptorOf(
        {entry(10, 10, pa, pb), entry(20, 18, pc, pd)}, cfg.fingerprint());

    auto chi = [&](const FaceDescriptor::Entry& a, const FaceDescriptor::Entry& b) {
        return chiSquare(encodeBlockFeature(a, cfg), encodeBlockFeature(b, cfg));
    };
    const double expected =
        std::max(chi(probe.entries[0], train.entries[0]), chi(probe.entries[0], train.entries[1]));
    CHECK(dissimilarity(probe, train, cfg) == doctest::Approx(expected));
    // under max, even the self-identical block pair does not score zero here
    CHECK(expected > 0.0);
}

TEST_CASE("dissimilarity: empty probe rejected, fingerprint mismatch rejected") {
    PipelineConfig cfg;
    const FaceDescriptor empty = descriptorOf({}, cfg.fingerprint());
    const FaceDescriptor one =
        descriptorOf({entry(0, 0, {1, 2, 3}, {4, 5, 6})}, cfg.fingerprint());
    CHECK_THROWS_AS(dissimilarity(empty, one, cfg), ConfigError);

    FaceDescriptor other = one;
    other.config_fingerprint ^= 1;
    CHECK_THROWS_AS(dissimilarity(one, other, cfg), ConfigError);
    CHECK_NOTHROW(dissimilarity(one, other, cfg, /*allow_fingerprint_mismatch=*/true));
}

TEST_CASE("classify: single-entry gallery always wins") {
    PipelineConfig cfg;
    const FaceDescriptor probe =
        descriptorOf({entry(0, 0, {5, 0, 16}, {5, 1, 16})}, cfg.fingerprint());
    const FaceDescriptor train =
        descriptorOf({entry(70, 90, {0, 10, 4}, {2, 12, 3})}, cfg.fingerprint());
    Gallery gallery;
    gallery.entries.push_back({train, "only"});
    const MatchResult r = classify(probe, gallery, cfg);
    CHECK(r.class_id == "only");
    CHECK(r.best_training_index == 0);
}

TEST_CASE("classify: gallery containing the probe itself wins with distance zero") {
    PipelineConfig cfg;
    const FaceDescriptor probe = descriptorOf(
        {entry(10, 10, {5, 0, 16}, {5, 1, 16}), entry(40, 60, {0, -45, 12}, {1, -44, 9})},
        cfg.fingerprint());
    FaceDescriptor other = probe;
    other.entries[0].peak1.rho = 9;
    other.entries[1].x = 44;

    Gallery gallery;
    gallery.entries.push_back({other, "other"});
    gallery.entries.push_back({probe, "self"});
    const MatchResult r = classify(probe, gallery, cfg);
    CHECK(r.class_id == "self");
    CHECK(r.distance == 0.0);
    CHECK(r.per_gallery_distances.size() == 2);
}

TEST_CASE("classify: argmin matches exhaustive hand computation") {
    PipelineConfig cfg;
    std::mt19937 rng(271828);
    std::uniform_real_distribution<double> ur(-20.0, 20.0), ut(-89.0, 89.0);
    auto random_descriptor = [&](int blocks) {
        std::vector<FaceDescriptor::Entry> entries;
        for (int i = 0; i < blocks; ++i)
            entries.push_back(entry(static_cast<int>(rng() % 76), static_cast<int>(rng() % 96),
                                    {ur(rng), ut(rng), 1 + static_cast<int>(rng() % 16)},
                                    {ur(rng), ut(rng), 1 + static_cast<int>(rng() % 16)}));
        return descriptorOf(std::move(entries), cfg.fingerprint());
    };

    for (int trial = 0; trial < 20; ++trial) {
        const FaceDescriptor probe = random_descriptor(3);
        Gallery gallery;
        gallery.entries.push_back({random_descriptor(4), "a"});
        gallery.entries.push_back({random_descriptor(2), "b"});
        gallery.entries.push_back({random_descriptor(5), "c"});

        const MatchResult r = classify(probe, gallery, cfg);

        double best = dissimilarity(probe, gallery.entries[0].descriptor, cfg);
        std::size_t best_idx = 0;
        for (std::size_t i = 1; i < gallery.entries.size(); ++i) {
            const double d = dissimilarity(probe, gallery.entries[i].descriptor, cfg);
            if (d < best) {
                best = d;
                best_idx = i;
            }
        }
        CHECK(r.best_training_index == best_idx);
        CHECK(r.distance == doctest::Approx(best));
        CHECK(r.class_id == gallery.entries[best_idx].class_id);
        CHECK(r.distance == r.per_gallery_distances[r.best_training_index].second);
    }
}

TEST_CASE("classify: distance ties go to the earlier gallery entry") {
    PipelineConfig cfg;
    const FaceDescriptor probe =
        descriptorOf({entry(10, 10, {5, 0, 16}, {5, 1, 16})}, cfg.fingerprint());
    Gallery gallery;  // two identical training descriptors: tie at the same distance
    gallery.entries.push_back({probe, "first"});
    gallery.entries.push_back({probe, "second"});
    CHECK(classify(probe, gallery, cfg).class_id == "first");
}

TEST_CASE("classify: empty gallery rejected") {
    PipelineConfig cfg;
    const FaceDescriptor probe =
        descriptorOf({entry(0, 0, {1, 2, 3}, {4, 5, 6})}, cfg.fingerprint());
    CHECK_THROWS_AS(classify(probe, Gallery{}, cfg), ConfigError);
}

TEST_CASE("classify: uniform scaling of distances keeps the argmin") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> scale(0.001, 1000.0);
    std::vector<std::pair<std::size_t, double>> distances = {
        {0, 3.25}, {1, 0.75}, {2, 19.0}, {3, 0.9}};
    const auto argmin = [](const std::vector<std::pair<std::size_t, double>>& d) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < d.size(); ++i)
            if (d[i].second < d[best].second) best = i;
        return best;
    };
    const std::size_t before = argmin(distances);
    for (int trial = 0; trial < 20; ++trial) {
        const double c = scale(rng);
        auto scaled = distances;
        for (auto& [idx, v] : scaled) v *= c;
        CHECK(argmin(scaled) == before);
    }
}

// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: extract, enroll, identify, evaluate, inspect.
// Exit codes: 0 success, 1 validation/parse/config error, 2 I/O error.

#include <CLI11.hpp>

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "houghface/blocks.hpp"
#include "houghface/descriptor.hpp"
#include "houghface/errors.hpp"
#include "houghface/harness.hpp"
#include "houghface/image_io.hpp"
#include "houghface/imageops.hpp"
#include "houghface/matcher.hpp"

namespace fs = std::filesystem;
using namespace houghface;

namespace {

struct SharedOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> agg;
    int jobs = 1;
};

PipelineConfig resolveConfig(const SharedOptions& shared) {
    PipelineConfig cfg;
    if (!shared.config_path.empty()) cfg = PipelineConfig::fromFile(shared.config_path);
    if (shared.seed) cfg.rng_seed = *shared.seed;
    if (shared.agg) cfg.aggregation = aggregationFromName(*shared.agg);
    cfg.validate();
    return cfg;
}

std::string imageIdFromPath(const std::string& path) {
    return fs::path(path).stem().string();
}

FaceDescriptor extractFile(const std::string& image_path, const PipelineConfig& cfg) {
    const RawImage raw = loadRaw(image_path);
    const GrayImage gray = normalizeInput(raw, cfg.target_width, cfg.target_height);
    return extractDescriptor(gray, cfg, imageIdFromPath(image_path));
}

std::string sanitizeLabel(const std::string& label) {
    std::string out = label;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return out;
}

int runExtract(const std::string& image_path, const std::string& out_path,
               const SharedOptions& shared) {
    const PipelineConfig cfg = resolveConfig(shared);
    const FaceDescriptor d = extractFile(image_path, cfg);
    writeDescriptorFile(d, out_path);
    std::cout << out_path << ": " << d.entries.size() << " blocks\n";
    return 0;
}

int runEnroll(const std::string& manifest_path, const std::string& gallery_dir,
              const SharedOptions& shared) {
    const PipelineConfig cfg = resolveConfig(shared);
    const DatasetManifest manifest = loadManifest(manifest_path);

    EvalOptions opts;
    opts.jobs = shared.jobs;
    opts.log = [](const std::string& msg) { std::cerr << msg << "\n"; };
    const Gallery gallery = enrollGallery(manifest, cfg, opts);
    if (gallery.entries.empty())
        throw ConfigError(manifest_path + ": manifest contains no train records");

    std::error_code ec;
    fs::create_directories(gallery_dir, ec);
    if (ec) throw IoError(gallery_dir + ": cannot create gallery directory");

    std::ofstream index(fs::path(gallery_dir) / "gallery.txt", std::ios::binary);
    if (!index) throw IoError(gallery_dir + ": cannot write gallery index");

    std::map<std::string, int> per_class;
    for (const auto& entry : gallery.entries) {
        const int k = per_class[entry.class_id]++;
        const std::string name =
            sanitizeLabel(entry.class_id) + "_" + std::to_string(k) + ".hfd";
        writeDescriptorFile(entry.descriptor, (fs::path(gallery_dir) / name).string());
        index << entry.class_id << " " << name << "\n";
    }
    if (!index) throw IoError(gallery_dir + ": write failed");
    std::cout << "enrolled " << gallery.entries.size() << " descriptors into " << gallery_dir
              << "\n";
    return 0;
}

Gallery loadGallery(const std::string& gallery_dir) {
    const fs::path index_path = fs::path(gallery_dir) / "gallery.txt";
    std::ifstream index(index_path);
    if (!index) throw IoError(index_path.string() + ": cannot open gallery index");

    Gallery gallery;
    std::string line;
    int lineno = 0;
    while (std::getline(index, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string class_id, file;
        if (!(ls >> class_id >> file))
            throw ParseError(index_path.string() + ":" + std::to_string(lineno) +
                             ": expected <class_id> <file>");
        Gallery::Entry entry;
        entry.class_id = class_id;
        entry.descriptor = readDescriptorFile((fs::path(gallery_dir) / file).string());
        gallery.entries.push_back(std::move(entry));
    }
    if (gallery.entries.empty())
        throw ConfigError(index_path.string() + ": gallery is empty");
    return gallery;
}

int runIdentify(const std::string& image_path, const std::string& gallery_dir,
                bool allow_mismatch, const SharedOptions& shared) {
    const PipelineConfig cfg = resolveConfig(shared);
    const Gallery gallery = loadGallery(gallery_dir);
    const FaceDescriptor probe = extractFile(image_path, cfg);
    if (probe.entries.empty())
        throw ConfigError(image_path + ": no blocks survive extraction, cannot identify");
    const MatchResult match = classify(probe, gallery, cfg, allow_mismatch);
    std::cout << "class: " << match.class_id << "\n";
    std::cout << "distance: " << match.distance << "\n";
    return 0;
}

int runEvaluate(const std::string& manifest_path, const std::string& report_path,
                bool counts_mode, const SharedOptions& shared) {
    ConfusionCounts counts;
    if (counts_mode) {
        counts = readCountsFile(manifest_path);
    } else {
        const PipelineConfig cfg = resolveConfig(shared);
        const DatasetManifest manifest = loadManifest(manifest_path);
        EvalOptions opts;
        opts.jobs = shared.jobs;
        opts.log = [](const std::string& msg) { std::cerr << msg << "\n"; };
        counts = evaluate(manifest, cfg, opts);
    }
    const MetricsReport m = metrics(counts);
    printMetricsTable(std::cout, counts, m);
    if (!report_path.empty()) writeReportFile(report_path, counts, m);
    return 0;
}

GrayImage scaleToBytes(const GradientImage& values) {
    GrayImage out(values.rows(), values.cols());
    const int maxv = values.maxCoeff();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const int v = *(values.data() + i);
        *(out.data() + i) =
            maxv > 0 ? static_cast<std::uint8_t>((v * 255 + maxv / 2) / maxv) : 0;
    }
    return out;
}

void drawRect(GrayImage& img, int x, int y, int size, std::uint8_t value) {
    for (int i = 0; i < size; ++i) {
        img(y, x + i) = value;
        img(y + size - 1, x + i) = value;
        img(y + i, x) = value;
        img(y + i, x + size - 1) = value;
    }
}

int runInspect(const std::string& image_path, const std::string& stage,
               const std::string& out_path, int block_index, const SharedOptions& shared) {
    const PipelineConfig cfg = resolveConfig(shared);
    const RawImage raw = loadRaw(image_path);
    const GrayImage gray = normalizeInput(raw, cfg.target_width, cfg.target_height);
    const GradientImage grad = gradient8dir(gray);

    if (stage == "gradient") {
        writePgm(out_path, scaleToBytes(grad));
        return 0;
    }
    const BinaryImage binary = dilateLinear(binaryThreshold(grad), cfg.se_length);
    if (stage == "binary") {
        writePgm(out_path, (binary.cast<int>() * 255).cast<std::uint8_t>());
        return 0;
    }
    const BlockSet blocks = selectSignificantBlocks(binary, cfg.block_size, cfg.num_candidates,
                                                    cfg.target_fraction, cfg.rng_seed);
    if (stage == "blocks") {
        GrayImage overlay = gray;
        for (const Block& b : blocks.blocks) drawRect(overlay, b.x, b.y, b.size, 255);
        writePgm(out_path, overlay);
        std::cout << "blocks: " << blocks.blocks.size() << "\n";
        return 0;
    }
    // stage == "hough": one block's accumulator, scaled P2 plus exact sidecar
    if (blocks.blocks.empty())
        throw ConfigError(image_path + ": no blocks selected, nothing to transform");
    if (block_index < 0 || block_index >= static_cast<int>(blocks.blocks.size()))
        throw ConfigError("inspect: block index " + std::to_string(block_index) +
                          " out of range, image has " + std::to_string(blocks.blocks.size()) +
                          " blocks");
    const Block& b = blocks.blocks[static_cast<std::size_t>(block_index)];
    const HoughAccumulator acc = houghTransform(binary.block(b.y, b.x, b.size, b.size), cfg.hough);

    const int maxv = acc.votes.maxCoeff();
    Raster<int> scaled(acc.votes.rows(), acc.votes.cols());
    for (Eigen::Index i = 0; i < acc.votes.size(); ++i) {
        const int v = *(acc.votes.data() + i);
        *(scaled.data() + i) = maxv > 0 ? (v * 255 + maxv / 2) / maxv : 0;
    }
    writePgmAscii(out_path, scaled, 255);

    // exact sidecar: the unscaled vote matrix, one rho bin per line
    std::ofstream sidecar(out_path + ".txt", std::ios::binary);
    if (!sidecar) throw IoError(out_path + ".txt: cannot open file for writing");
    for (Eigen::Index r = 0; r < acc.votes.rows(); ++r) {
        for (Eigen::Index t = 0; t < acc.votes.cols(); ++t)
            sidecar << acc.votes(r, t) << (t + 1 == acc.votes.cols() ? '\n' : ' ');
    }
    if (!sidecar) throw IoError(out_path + ".txt: write failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Face identification from Hough peaks of gradient-image blocks"};
    app.require_subcommand(1);

    SharedOptions shared;
    app.add_option("--config", shared.config_path, "Pipeline config file (key = value lines)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the extraction RNG seed");
    std::string agg_value;
    auto* agg_opt = app.add_option("--agg", agg_value, "Aggregation mode: min or max")
                        ->check(CLI::IsMember({"min", "max"}));
    app.add_option("--jobs", shared.jobs, "Worker threads for enroll/evaluate")
        ->check(CLI::PositiveNumber);

    std::string image_path, manifest_path, out_path, gallery_dir, report_path, stage;
    bool allow_mismatch = false, counts_mode = false;
    int block_index = 0;

    auto* extract = app.add_subcommand("extract", "Extract a descriptor from one image");
    extract->add_option("image", image_path, "Input image (PGM P2/P5 or PNG)")->required();
    extract->add_option("-o,--output", out_path, "Descriptor file to write")->required();

    auto* enroll = app.add_subcommand("enroll", "Extract descriptors for a manifest's train records");
    enroll->add_option("manifest", manifest_path, "Dataset manifest")->required();
    enroll->add_option("-o,--output", gallery_dir, "Gallery directory to write")->required();

    auto* identify = app.add_subcommand("identify", "Classify one image against a gallery");
    identify->add_option("image", image_path, "Probe image")->required();
    identify->add_option("--gallery", gallery_dir, "Gallery directory from enroll")->required();
    identify->add_flag("--allow-mismatch", allow_mismatch,
                       "Compare descriptors even when config fingerprints differ");

    auto* evaluate = app.add_subcommand("evaluate", "Run the identification protocol on a manifest");
    evaluate->add_option("manifest", manifest_path, "Dataset manifest (or counts file with --counts)")
        ->required();
    evaluate->add_option("--report", report_path, "Write a machine-readable report here");
    evaluate->add_flag("--counts", counts_mode,
                       "Treat the positional argument as a precomputed tp/fp/tn/fn counts file");

    auto* inspect = app.add_subcommand("inspect", "Dump an intermediate pipeline stage");
    inspect->add_option("image", image_path, "Input image")->required();
    inspect->add_option("--stage", stage, "One of gradient|binary|blocks|hough")
        ->required()
        ->check(CLI::IsMember({"gradient", "binary", "blocks", "hough"}));
    inspect->add_option("--out", out_path, "Output file (PGM)")->required();
    inspect->add_option("--block", block_index, "Block index for --stage hough");

    for (auto* sub : {extract, enroll, identify, evaluate, inspect}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    if (*seed_opt) shared.seed = seed_value;
    if (*agg_opt) shared.agg = agg_value;

    try {
        if (*extract) return runExtract(image_path, out_path, shared);
        if (*enroll) return runEnroll(manifest_path, gallery_dir, shared);
        if (*identify) return runIdentify(image_path, gallery_dir, allow_mismatch, shared);
        if (*evaluate) return runEvaluate(manifest_path, report_path, counts_mode, shared);
        if (*inspect) return runInspect(image_path, stage, out_path, block_index, shared);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

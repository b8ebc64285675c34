// SPDX-License-Identifier: Apache-2.0
#include "houghface/descriptor.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "houghface/blocks.hpp"
#include "houghface/errors.hpp"
#include "houghface/imageops.hpp"

namespace houghface {

namespace {

// Shortest decimal form that round-trips the exact double.
std::string formatDouble(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parseDouble(const std::string& tok, const std::string& where) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError(where + ": bad number '" + tok + "'");
    return v;
}

long long parseInt(const std::string& tok, const std::string& where) {
    long long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError(where + ": bad integer '" + tok + "'");
    return v;
}

std::uint64_t parseU64(const std::string& tok, const std::string& where) {
    std::uint64_t v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError(where + ": bad unsigned integer '" + tok + "'");
    return v;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Fnv1a {
    std::uint64_t state = 0xcbf29ce484222325ull;

    void feed(const std::string& s) {
        for (unsigned char c : s) {
            state ^= c;
            state *= 0x100000001b3ull;
        }
        state ^= 0xff;  // field separator
        state *= 0x100000001b3ull;
    }
};

std::string fingerprintHex(std::uint64_t fp) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

}  // namespace

void PipelineConfig::validate() const {
    if (target_width < 1 || target_height < 1)
        throw ConfigError("config: target dimensions must be positive");
    if (se_length < 1 || se_length % 2 == 0)
        throw ConfigError("config: se_length must be odd and >= 1");
    if (block_size < 1) throw ConfigError("config: block_size must be >= 1");
    if (block_size > std::min(target_width, target_height))
        throw ConfigError("config: block_size " + std::to_string(block_size) +
                          " exceeds target image dimensions");
    if (num_candidates < 1) throw ConfigError("config: num_candidates must be >= 1");
    if (!(target_fraction > 0.0) || target_fraction > 1.0)
        throw ConfigError("config: target_fraction must be in (0, 1]");
    if (peak_pool < 0) throw ConfigError("config: peak_pool must be >= 0");
    if (gate_threshold < 0.0) throw ConfigError("config: th1 must be >= 0");
    if (empty_gate_penalty < 0.0) throw ConfigError("config: empty_gate_penalty must be >= 0");
    hough.validate();
}

std::uint64_t PipelineConfig::fingerprint() const {
    Fnv1a h;
    h.feed(std::to_string(target_width));
    h.feed(std::to_string(target_height));
    h.feed(std::to_string(se_length));
    h.feed(std::to_string(block_size));
    h.feed(std::to_string(num_candidates));
    h.feed(formatDouble(target_fraction));
    h.feed(std::to_string(effectivePeakPool()));
    h.feed(formatDouble(hough.theta_min_deg));
    h.feed(formatDouble(hough.theta_step_deg));
    h.feed(std::to_string(hough.theta_bins));
    h.feed(formatDouble(hough.rho_step));
    h.feed(std::to_string(rng_seed));
    h.feed(formatDouble(effectiveGate()));
    h.feed(aggregationName(aggregation));
    h.feed(formatDouble(empty_gate_penalty));
    return h.state;
}

const char* aggregationName(Aggregation agg) {
    return agg == Aggregation::Min ? "min" : "max";
}

Aggregation aggregationFromName(const std::string& name) {
    if (name == "min") return Aggregation::Min;
    if (name == "max") return Aggregation::Max;
    throw ConfigError("unknown aggregation mode '" + name + "' (expected min or max)");
}

PipelineConfig PipelineConfig::fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open config file");
    return fromStream(in, path);
}

PipelineConfig PipelineConfig::fromStream(std::istream& in, const std::string& source_name) {
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source_name + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(where + ": expected key = value");

        if (key == "target_width") cfg.target_width = static_cast<int>(parseInt(value, where));
        else if (key == "target_height") cfg.target_height = static_cast<int>(parseInt(value, where));
        else if (key == "se_length") cfg.se_length = static_cast<int>(parseInt(value, where));
        else if (key == "block_size") cfg.block_size = static_cast<int>(parseInt(value, where));
        else if (key == "num_candidates") cfg.num_candidates = static_cast<long>(parseInt(value, where));
        else if (key == "target_fraction") cfg.target_fraction = parseDouble(value, where);
        else if (key == "peak_pool") cfg.peak_pool = static_cast<int>(parseInt(value, where));
        else if (key == "theta_min") cfg.hough.theta_min_deg = parseDouble(value, where);
        else if (key == "theta_step") cfg.hough.theta_step_deg = parseDouble(value, where);
        else if (key == "theta_bins") cfg.hough.theta_bins = static_cast<int>(parseInt(value, where));
        else if (key == "rho_step") cfg.hough.rho_step = parseDouble(value, where);
        else if (key == "rng_seed") cfg.rng_seed = parseU64(value, where);
        else if (key == "th1") cfg.gate_threshold = parseDouble(value, where);
        else if (key == "agg") cfg.aggregation = aggregationFromName(value);
        else if (key == "empty_gate_penalty") cfg.empty_gate_penalty = parseDouble(value, where);
        else throw ParseError(where + ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

FaceDescriptor extractDescriptor(const GrayImage& img, const PipelineConfig& cfg,
                                 const std::string& image_id) {
    cfg.validate();
    if (img.size() == 0) throw ConfigError("extract: empty image");

    const GrayImage gray = resizeBilinear(img, cfg.target_width, cfg.target_height);
    const GradientImage grad = gradient8dir(gray);
    const BinaryImage binary = binaryThreshold(grad);
    const BinaryImage dilated = dilateLinear(binary, cfg.se_length);
    const BlockSet blocks = selectSignificantBlocks(dilated, cfg.block_size, cfg.num_candidates,
                                                    cfg.target_fraction, cfg.rng_seed);

    FaceDescriptor d;
    d.image_id = image_id;
    d.config_fingerprint = cfg.fingerprint();
    d.entries.reserve(blocks.blocks.size());
    for (const Block& b : blocks.blocks) {
        const HoughAccumulator acc =
            houghTransform(dilated.block(b.y, b.x, b.size, b.size), cfg.hough);
        const std::vector<Peak> peaks = topPeaks(acc, cfg.effectivePeakPool());
        if (peaks.empty()) continue;  // no feature can be formed from an empty block
        const auto centroid = peakCentroid(peaks);
        const auto two = selectNearestTwo(peaks, centroid);
        d.entries.push_back({b.x, b.y, two[0], two[1]});
    }
    return d;
}

void writeDescriptor(const FaceDescriptor& d, std::ostream& out) {
    out << "HFD1 " << fingerprintHex(d.config_fingerprint) << " " << d.entries.size() << "\n";
    out << d.image_id << "\n";
    for (const auto& e : d.entries) {
        out << e.x << " " << e.y << " " << formatDouble(e.peak1.rho) << " "
            << formatDouble(e.peak1.theta) << " " << e.peak1.votes << " "
            << formatDouble(e.peak2.rho) << " " << formatDouble(e.peak2.theta) << " "
            << e.peak2.votes << "\n";
    }
}

void writeDescriptorFile(const FaceDescriptor& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep bytes identical across platforms
    if (!out) throw IoError(path + ": cannot open file for writing");
    writeDescriptor(d, out);
    if (!out) throw IoError(path + ": write failed");
}

FaceDescriptor readDescriptor(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source_name + ":1: empty descriptor file");

    std::istringstream header(line);
    std::string magic, fp_hex;
    long long count = -1;
    if (!(header >> magic)) throw ParseError(source_name + ":1: malformed header");
    if (magic != "HFD1") {
        if (magic.rfind("HFD", 0) == 0)
            throw ParseError(source_name + ":1: unsupported descriptor version '" + magic + "'");
        throw ParseError(source_name + ":1: not a descriptor file (bad magic '" + magic + "')");
    }
    std::string extra;
    if (!(header >> fp_hex >> count) || count < 0 || (header >> extra))
        throw ParseError(source_name + ":1: malformed header");
    if (fp_hex.size() != 16 ||
        fp_hex.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw ParseError(source_name + ":1: malformed config fingerprint");

    FaceDescriptor d;
    d.config_fingerprint = std::stoull(fp_hex, nullptr, 16);

    if (!std::getline(in, d.image_id))
        throw ParseError(source_name + ":2: missing image identifier line");

    // the declared count is untrusted; truncation is caught line by line
    d.entries.reserve(static_cast<std::size_t>(std::min(count, 1LL << 16)));
    for (long long i = 0; i < count; ++i) {
        const int lineno = static_cast<int>(i) + 3;
        const std::string where = source_name + ":" + std::to_string(lineno);
        if (!std::getline(in, line))
            throw ParseError(where + ": truncated descriptor, expected " + std::to_string(count) +
                             " entries but found " + std::to_string(i));
        std::istringstream ls(line);
        std::string tok[8];
        for (auto& t : tok)
            if (!(ls >> t)) throw ParseError(where + ": entry needs 8 fields");
        if (ls >> extra) throw ParseError(where + ": trailing data after entry");

        FaceDescriptor::Entry e;
        e.x = static_cast<int>(parseInt(tok[0], where));
        e.y = static_cast<int>(parseInt(tok[1], where));
        e.peak1.rho = parseDouble(tok[2], where);
        e.peak1.theta = parseDouble(tok[3], where);
        e.peak1.votes = static_cast<int>(parseInt(tok[4], where));
        e.peak2.rho = parseDouble(tok[5], where);
        e.peak2.theta = parseDouble(tok[6], where);
        e.peak2.votes = static_cast<int>(parseInt(tok[7], where));
        d.entries.push_back(e);
    }
    return d;
}

FaceDescriptor readDescriptorFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open descriptor file");
    return readDescriptor(in, path);
}

}  // namespace houghface

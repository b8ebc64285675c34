// SPDX-License-Identifier: Apache-2.0
#include "houghface/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "houghface/errors.hpp"
#include "houghface/image_io.hpp"
#include "houghface/imageops.hpp"

namespace houghface {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Role roleFromName(const std::string& name, const std::string& where) {
    if (name == "train") return Role::Train;
    if (name == "genuine") return Role::Genuine;
    if (name == "impostor") return Role::Impostor;
    throw ParseError(where + ": unknown role '" + name +
                     "' (expected train, genuine or impostor)");
}

// Runs fn(i) for i in [0, n) on `jobs` threads; rethrows the first failure.
void parallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const int count = std::min<int>(jobs, static_cast<int>(n));
    threads.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

FaceDescriptor extractFromPath(const std::string& path, const PipelineConfig& cfg) {
    RawImage raw;
    try {
        raw = loadRaw(path);
    } catch (const IoError& e) {
        throw IoError(std::string("cannot ingest image: ") + e.what());
    }
    const GrayImage gray = normalizeInput(raw, cfg.target_width, cfg.target_height);
    std::string id = path;
    const auto slash = id.find_last_of("/\\");
    if (slash != std::string::npos) id.erase(0, slash + 1);
    const auto dot = id.find_last_of('.');
    if (dot != std::string::npos && dot > 0) id.erase(dot);
    return extractDescriptor(gray, cfg, id);
}

std::string formatPercent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", roundPercent(v));
    return buf;
}

}  // namespace

const char* roleName(Role role) {
    switch (role) {
        case Role::Train: return "train";
        case Role::Genuine: return "genuine";
        case Role::Impostor: return "impostor";
    }
    return "?";
}

std::vector<const ManifestRecord*> DatasetManifest::withRole(Role role) const {
    std::vector<const ManifestRecord*> out;
    for (const auto& r : records)
        if (r.role == role) out.push_back(&r);
    return out;
}

DatasetManifest loadManifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open manifest");
    return parseManifest(in, path);
}

DatasetManifest parseManifest(std::istream& in, const std::string& source_name) {
    DatasetManifest manifest;
    std::set<std::tuple<std::string, Role, std::string>> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source_name + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        std::istringstream ls(line);
        std::string class_id, role_name;
        if (!(ls >> class_id >> role_name))
            throw ParseError(where + ": expected <class_id> <role> <path>");
        std::string path;
        std::getline(ls, path);
        path = trim(path);
        if (path.empty()) throw ParseError(where + ": expected <class_id> <role> <path>");

        ManifestRecord rec{class_id, roleFromName(role_name, where), path};
        if (!seen.insert({rec.class_id, rec.role, rec.path}).second)
            throw ParseError(where + ": duplicate record for class '" + rec.class_id + "'");
        manifest.records.push_back(std::move(rec));
    }

    std::set<std::string> trained;
    for (const auto& r : manifest.records)
        if (r.role == Role::Train) trained.insert(r.class_id);
    for (const auto& r : manifest.records) {
        if (r.role != Role::Train && !trained.count(r.class_id))
            throw ParseError(source_name + ": class '" + r.class_id + "' has " +
                             roleName(r.role) + " records but no train record");
    }
    return manifest;
}

Gallery enrollGallery(const DatasetManifest& manifest, const PipelineConfig& cfg,
                      const EvalOptions& opts) {
    const auto train = manifest.withRole(Role::Train);
    Gallery gallery;
    gallery.entries.resize(train.size());
    parallelFor(train.size(), opts.jobs, [&](std::size_t i) {
        gallery.entries[i].class_id = train[i]->class_id;
        gallery.entries[i].descriptor = extractFromPath(train[i]->path, cfg);
    });
    if (opts.log) {
        for (const auto& e : gallery.entries)
            if (e.descriptor.entries.empty())
                opts.log("warning: training image for class '" + e.class_id +
                         "' produced a descriptor with no blocks");
    }
    return gallery;
}

ConfusionCounts evaluateAgainst(const Gallery& gallery, const DatasetManifest& manifest,
                                const PipelineConfig& cfg, const EvalOptions& opts) {
    if (gallery.entries.empty()) throw ConfigError("evaluate: empty gallery");

    std::vector<const ManifestRecord*> tests;
    for (const auto& r : manifest.records)
        if (r.role != Role::Train) tests.push_back(&r);

    std::atomic<long> tp{0}, fp{0}, tn{0}, fn{0};
    std::mutex log_mutex;
    parallelFor(tests.size(), opts.jobs, [&](std::size_t i) {
        const ManifestRecord& rec = *tests[i];
        const FaceDescriptor probe = extractFromPath(rec.path, cfg);
        if (probe.entries.empty()) {
            // degenerate probe: counts as a miss rather than aborting the run
            if (rec.role == Role::Genuine) ++fn; else ++tn;
            if (opts.log) {
                std::lock_guard<std::mutex> lock(log_mutex);
                opts.log("warning: " + rec.path + " produced no blocks; counted as " +
                         (rec.role == Role::Genuine ? "FN" : "TN"));
            }
            return;
        }
        const MatchResult match = classify(probe, gallery, cfg, opts.allow_fingerprint_mismatch);
        const bool predicted_own = match.class_id == rec.class_id;
        if (rec.role == Role::Genuine) {
            if (predicted_own) ++tp; else ++fn;
        } else {
            if (predicted_own) ++fp; else ++tn;
        }
    });

    return ConfusionCounts{tp.load(), fp.load(), tn.load(), fn.load()};
}

ConfusionCounts evaluate(const DatasetManifest& manifest, const PipelineConfig& cfg,
                         const EvalOptions& opts) {
    const Gallery gallery = enrollGallery(manifest, cfg, opts);
    return evaluateAgainst(gallery, manifest, cfg, opts);
}

MetricsReport metrics(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0)
        throw ConfigError("metrics: negative counts");
    if (c.tp + c.fp + c.tn + c.fn == 0)
        throw ConfigError("metrics: all counts are zero, nothing to report");

    MetricsReport m;
    if (c.tp + c.fn > 0) {
        m.sensitivity = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
        m.false_negative_rate = 100.0 - *m.sensitivity;
    }
    if (c.fp + c.tn > 0) {
        m.specificity = 100.0 * static_cast<double>(c.tn) / static_cast<double>(c.fp + c.tn);
        m.false_positive_rate = 100.0 - *m.specificity;
    }
    m.accuracy = 100.0 * static_cast<double>(c.tp + c.tn) /
                 static_cast<double>(c.tp + c.tn + c.fp + c.fn);
    return m;
}

double roundPercent(double v) { return std::floor(v * 100.0 + 0.5) / 100.0; }

void writeReport(std::ostream& out, const ConfusionCounts& c, const MetricsReport& m) {
    out << "tp: " << c.tp << "\n";
    out << "fp: " << c.fp << "\n";
    out << "tn: " << c.tn << "\n";
    out << "fn: " << c.fn << "\n";
    if (m.sensitivity) out << "sensitivity: " << formatPercent(*m.sensitivity) << "\n";
    if (m.specificity) out << "specificity: " << formatPercent(*m.specificity) << "\n";
    if (m.accuracy) out << "accuracy: " << formatPercent(*m.accuracy) << "\n";
    if (m.false_positive_rate) out << "fpr: " << formatPercent(*m.false_positive_rate) << "\n";
    if (m.false_negative_rate) out << "fnr: " << formatPercent(*m.false_negative_rate) << "\n";
}

void writeReportFile(const std::string& path, const ConfusionCounts& c, const MetricsReport& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open report file for writing");
    writeReport(out, c, m);
    if (!out) throw IoError(path + ": write failed");
}

ConfusionCounts readCountsFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open counts file");

    std::map<std::string, long> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto sep = line.find(':');
        if (sep == std::string::npos) sep = line.find('=');
        if (sep == std::string::npos) throw ParseError(where + ": expected key: value");
        const std::string key = trim(line.substr(0, sep));
        const std::string value = trim(line.substr(sep + 1));
        if (key == "tp" || key == "fp" || key == "tn" || key == "fn") {
            try {
                values[key] = std::stol(value);
            } catch (const std::exception&) {
                throw ParseError(where + ": bad count '" + value + "'");
            }
        }
        // other keys (metrics lines) are ignored so reports round-trip
    }
    for (const char* key : {"tp", "fp", "tn", "fn"})
        if (!values.count(key))
            throw ParseError(path + ": missing count '" + std::string(key) + "'");
    return ConfusionCounts{values["tp"], values["fp"], values["tn"], values["fn"]};
}

void printMetricsTable(std::ostream& out, const ConfusionCounts& c, const MetricsReport& m) {
    out << "confusion counts\n";
    out << "  tp " << c.tp << "  fp " << c.fp << "  tn " << c.tn << "  fn " << c.fn << "\n";
    auto row = [&](const char* name, const std::optional<double>& v) {
        out << "  " << name;
        for (std::size_t i = std::string(name).size(); i < 20; ++i) out << ' ';
        if (v) out << formatPercent(*v) << " %\n";
        else out << "n/a\n";
    };
    row("sensitivity", m.sensitivity);
    row("specificity", m.specificity);
    row("accuracy", m.accuracy);
    row("false positive rate", m.false_positive_rate);
    row("false negative rate", m.false_negative_rate);
}

}  // namespace houghface

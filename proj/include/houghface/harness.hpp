// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "houghface/descriptor.hpp"
#include "houghface/matcher.hpp"

namespace houghface {

enum class Role { Train, Genuine, Impostor };

const char* roleName(Role role);

struct ManifestRecord {
    std::string class_id;
    Role role = Role::Train;
    std::string path;
};

/// Evaluation dataset: one record per line, `<class_id> <role> <path>`.
/// Every class that has genuine or impostor records must also have at least
/// one train record.
struct DatasetManifest {
    std::vector<ManifestRecord> records;

    std::vector<const ManifestRecord*> withRole(Role role) const;
};

DatasetManifest loadManifest(const std::string& path);
DatasetManifest parseManifest(std::istream& in, const std::string& source_name);

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
};

/// Percentages; a ratio whose denominator is zero is absent.
struct MetricsReport {
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> accuracy;
    std::optional<double> false_positive_rate;
    std::optional<double> false_negative_rate;
};

struct EvalOptions {
    int jobs = 1;
    bool allow_fingerprint_mismatch = false;
    /// Receives warnings (degenerate descriptors etc.); may be null.
    std::function<void(const std::string&)> log;
};

/// Builds a labeled gallery from the manifest's train records.
Gallery enrollGallery(const DatasetManifest& manifest, const PipelineConfig& cfg,
                      const EvalOptions& opts = {});

/// Closed-set identification protocol: every genuine record counts TP when
/// classified into its own class, FN otherwise; every impostor record counts
/// FP when classified into the class it was assigned to, TN otherwise.
/// Degenerate probes (no blocks survive extraction) count as FN / TN.
ConfusionCounts evaluate(const DatasetManifest& manifest, const PipelineConfig& cfg,
                         const EvalOptions& opts = {});

/// Same protocol against an already-built gallery.
ConfusionCounts evaluateAgainst(const Gallery& gallery, const DatasetManifest& manifest,
                                const PipelineConfig& cfg, const EvalOptions& opts = {});

/// Table I style ratios as percentages. All-zero counts are an error;
/// individually undefined ratios come back absent.
MetricsReport metrics(const ConfusionCounts& c);

/// Rounds a percentage to two decimals, half up.
double roundPercent(double v);

/// Machine-readable `key: value` lines (tp, fp, tn, fn, sensitivity,
/// specificity, accuracy, fpr, fnr); absent metrics are omitted.
void writeReport(std::ostream& out, const ConfusionCounts& c, const MetricsReport& m);
void writeReportFile(const std::string& path, const ConfusionCounts& c, const MetricsReport& m);

/// Reads counts back from a report-style file (`key: value` or `key = value`)
/// holding tp, fp, tn, fn.
ConfusionCounts readCountsFile(const std::string& path);

/// Human-oriented metrics table for the console.
void printMetricsTable(std::ostream& out, const ConfusionCounts& c, const MetricsReport& m);

}  // namespace houghface

#pragma once

#include "ikt/config.hpp"
#include "ikt/dataset.hpp"
#include "ikt/pipeline.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ikt::report {

inline constexpr const char* kToolVersion = "0.1.0";

// Aligned plain-text table: one row per fold plus mean and pooled rows.
std::string format_table(const eval::MetricReport& r);
// "fold=<n> metric=<auc|rmse> value=<x>" lines, plus mean/pooled lines.
std::string format_key_values(const eval::MetricReport& r);
// Side-by-side summary of several feature sets over the same folds.
std::string format_comparison(std::span<const eval::MetricReport> reports);
// Tab-separated per-prediction dump.
std::string format_predictions(const eval::MetricReport& r, const Dataset& data);

// Everything needed to reproduce a run. Contains no timestamps so that a
// repeated run writes an identical manifest.
struct RunManifest {
    std::string command;
    ExperimentConfig config;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> artifacts;

    std::string to_text() const;
};

}  // namespace ikt::report

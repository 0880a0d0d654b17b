#pragma once

#include "ikt/bkt.hpp"
#include "ikt/errors.hpp"
#include "ikt/table_io.hpp"
#include "ikt/tan.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ikt {

// Feature sets of the ablation: skill + mastery, then + ability profile,
// then + problem difficulty.
enum class FeatureSet { ikt1, ikt2, ikt3 };

std::string_view feature_set_name(FeatureSet f);  // "IKT-1" etc.
std::optional<FeatureSet> parse_feature_set(std::string_view s);  // accepts "ikt1", "IKT-1", ...
std::vector<tan::Feature> features_of(FeatureSet f);

// All settings of an experiment. Every default reproduces the reference
// protocol, so an empty config file is a complete configuration.
struct ExperimentConfig {
    FeatureSet feature_set = FeatureSet::ikt3;
    bool ablation = false;
    std::size_t interval_len = 20;
    std::size_t clusters = 7;
    std::size_t kmeans_restarts = 10;
    std::size_t kmeans_max_iterations = 300;
    bkt::FitGrid grid{};
    double alpha = 1.0;
    int folds = 5;
    std::uint64_t seed = 1;
    bool skip_first_interval = false;
    std::size_t workers = 1;

    // Every problem, one message each; empty when valid.
    std::vector<std::string> validate() const;

    std::string to_key_values() const;
};

// Raised with the complete list of validation problems.
class ConfigError : public InputError {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

// Unknown keys and unparseable values are collected alongside range errors
// and reported together.
ExperimentConfig parse_config(const io::KeyValues& kv);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ikt

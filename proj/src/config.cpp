#include "ikt/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ikt {

std::string_view feature_set_name(FeatureSet f) {
    switch (f) {
        case FeatureSet::ikt1: return "IKT-1";
        case FeatureSet::ikt2: return "IKT-2";
        case FeatureSet::ikt3: return "IKT-3";
    }
    return "?";
}

std::optional<FeatureSet> parse_feature_set(std::string_view s) {
    std::string norm;
    for (const char c : s) {
        if (c != '-' && c != '_') norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (norm == "ikt1") return FeatureSet::ikt1;
    if (norm == "ikt2") return FeatureSet::ikt2;
    if (norm == "ikt3") return FeatureSet::ikt3;
    return std::nullopt;
}

std::vector<tan::Feature> features_of(FeatureSet f) {
    using tan::Feature;
    switch (f) {
        case FeatureSet::ikt1: return {Feature::skill, Feature::mastery};
        case FeatureSet::ikt2: return {Feature::skill, Feature::mastery, Feature::profile};
        case FeatureSet::ikt3: return {Feature::skill, Feature::mastery, Feature::profile, Feature::difficulty};
    }
    return {};
}

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += "\n  - " + s;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : InputError("invalid configuration:" + join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> ExperimentConfig::validate() const {
    std::vector<std::string> p;
    if (interval_len < 1) p.push_back("interval_len: must be at least 1");
    if (clusters < 1) p.push_back("K: must be at least 1");
    if (kmeans_restarts < 1) p.push_back("kmeans_restarts: must be at least 1");
    if (kmeans_max_iterations < 1) p.push_back("kmeans_max_iterations: must be at least 1");
    if (!(grid.step > 0.0 && grid.step < 1.0)) p.push_back("grid_step: must lie in (0, 1)");
    const auto cap_ok = [&](double cap) { return cap >= grid.step && cap < 1.0; };
    if (!cap_ok(grid.l0_cap)) p.push_back("l0_cap: must lie in [grid_step, 1)");
    if (!cap_ok(grid.t_cap)) p.push_back("t_cap: must lie in [grid_step, 1)");
    if (!cap_ok(grid.g_cap)) p.push_back("guess_cap: must lie in [grid_step, 1)");
    if (!cap_ok(grid.s_cap)) p.push_back("slip_cap: must lie in [grid_step, 1)");
    if (!(alpha >= 0.0)) p.push_back("alpha: must be non-negative");
    if (folds < 2) p.push_back("folds: must be at least 2");
    if (workers < 1) p.push_back("workers: must be at least 1");
    return p;
}

std::string ExperimentConfig::to_key_values() const {
    std::ostringstream os;
    os << "feature_set = " << feature_set_name(feature_set) << '\n';
    os << "ablation = " << (ablation ? "true" : "false") << '\n';
    os << "interval_len = " << interval_len << '\n';
    os << "K = " << clusters << '\n';
    os << "kmeans_restarts = " << kmeans_restarts << '\n';
    os << "kmeans_max_iterations = " << kmeans_max_iterations << '\n';
    os << "grid_step = " << io::format_exact(grid.step) << '\n';
    os << "l0_cap = " << io::format_exact(grid.l0_cap) << '\n';
    os << "t_cap = " << io::format_exact(grid.t_cap) << '\n';
    os << "guess_cap = " << io::format_exact(grid.g_cap) << '\n';
    os << "slip_cap = " << io::format_exact(grid.s_cap) << '\n';
    os << "alpha = " << io::format_exact(alpha) << '\n';
    os << "folds = " << folds << '\n';
    os << "seed = " << seed << '\n';
    os << "skip_first_interval = " << (skip_first_interval ? "true" : "false") << '\n';
    os << "workers = " << workers << '\n';
    return os.str();
}

ExperimentConfig parse_config(const io::KeyValues& kv) {
    ExperimentConfig c;
    std::vector<std::string> problems;
    const auto as_count = [&](const std::string& key, const std::string& v, std::size_t& out) {
        long long x = 0;
        if (!io::parse_int(v, x)) {
            problems.push_back(key + ": expected an integer, got '" + v + "'");
        } else if (x < 0) {
            // Zero passes through so validate() can name the field's actual bound.
            problems.push_back(key + ": must not be negative");
        } else {
            out = static_cast<std::size_t>(x);
        }
    };
    const auto as_real = [&](const std::string& key, const std::string& v, double& out) {
        if (!io::parse_double(v, out)) problems.push_back(key + ": expected a number, got '" + v + "'");
    };
    const auto as_bool = [&](const std::string& key, const std::string& v, bool& out) {
        if (v == "true" || v == "1" || v == "yes") out = true;
        else if (v == "false" || v == "0" || v == "no") out = false;
        else problems.push_back(key + ": expected true/false, got '" + v + "'");
    };
    for (const auto& [key, v] : kv) {
        if (key == "feature_set") {
            if (const auto f = parse_feature_set(v)) c.feature_set = *f;
            else problems.push_back("feature_set: expected ikt1, ikt2 or ikt3, got '" + v + "'");
        } else if (key == "ablation") as_bool(key, v, c.ablation);
        else if (key == "interval_len") as_count(key, v, c.interval_len);
        else if (key == "K" || key == "clusters") as_count("K", v, c.clusters);
        else if (key == "kmeans_restarts") as_count(key, v, c.kmeans_restarts);
        else if (key == "kmeans_max_iterations") as_count(key, v, c.kmeans_max_iterations);
        else if (key == "grid_step") as_real(key, v, c.grid.step);
        else if (key == "l0_cap") as_real(key, v, c.grid.l0_cap);
        else if (key == "t_cap") as_real(key, v, c.grid.t_cap);
        else if (key == "guess_cap") as_real(key, v, c.grid.g_cap);
        else if (key == "slip_cap") as_real(key, v, c.grid.s_cap);
        else if (key == "alpha") as_real(key, v, c.alpha);
        else if (key == "folds") {
            std::size_t f = 0;
            as_count(key, v, f);
            c.folds = static_cast<int>(std::min<std::size_t>(f, 1000000));
        } else if (key == "seed") {
            long long s = 0;
            if (io::parse_int(v, s) && s >= 0) c.seed = static_cast<std::uint64_t>(s);
            else problems.push_back("seed: expected a non-negative integer, got '" + v + "'");
        } else if (key == "skip_first_interval") as_bool(key, v, c.skip_first_interval);
        else if (key == "workers") as_count(key, v, c.workers);
        else problems.push_back(key + ": unknown setting");
    }
    for (auto& p : c.validate()) {
        const auto field = p.substr(0, p.find(':'));
        const bool already = std::any_of(problems.begin(), problems.end(),
                                         [&](const std::string& q) { return q.rfind(field + ":", 0) == 0; });
        if (!already) problems.push_back(std::move(p));
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(io::read_key_values(path));
}

}  // namespace ikt

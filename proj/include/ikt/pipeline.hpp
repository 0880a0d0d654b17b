#pragma once

#include "ikt/ability.hpp"
#include "ikt/bkt.hpp"
#include "ikt/config.hpp"
#include "ikt/dataset.hpp"
#include "ikt/difficulty.hpp"
#include "ikt/metrics.hpp"
#include "ikt/tan.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ikt::eval {

// Latent-feature extractors fitted on one set of training students.
// Skill indices here are "model" indices; see SkillMap.
struct FeatureArtifacts {
    std::vector<std::optional<bkt::BktParams>> skill_params;  // nullopt: no training data
    bkt::BktParams fallback;                                  // mean of the fitted rows
    std::optional<ability::ClusterModel> clusters;            // absent when profiles are not needed
    difficulty::DifficultyTable difficulty;

    std::size_t skill_count() const { return skill_params.size(); }
    const bkt::BktParams& params_for(std::int64_t model_skill) const;
};

// Data skill index -> model skill index, -1 when the model never saw the skill.
using SkillMap = std::vector<std::int64_t>;
SkillMap identity_skill_map(std::size_t skills);

std::uint64_t cluster_seed(std::uint64_t seed, int fold);

// Fits BKT per skill, the k-means profiles (if `with_profiles`) and the
// difficulty table using only `train_students`.
FeatureArtifacts fit_artifacts(const Dataset& data, std::span<const std::uint32_t> train_students,
                               const ExperimentConfig& config, bool with_profiles, std::uint64_t kmeans_seed);

// Performance vectors d_{1:z} for every completed interval z of each student.
std::vector<ability::PerformanceVector> training_vectors(const Dataset& data,
                                                         std::span<const std::uint32_t> students,
                                                         std::size_t interval_len, std::size_t skill_count);

// A prediction instance and where it came from.
struct Instance {
    tan::FeatureRow row;          // row.skill == skill_count for skills unknown to the model
    std::uint32_t student = 0;
    std::size_t position = 0;     // index within the student's ordered history
    std::size_t interval = 1;     // 1-based
    std::uint32_t problem = 0;
    double order_key = 0.0;
};

// One instance per interaction of `students`, features computed from the
// student's earlier attempts only.
std::vector<Instance> build_feature_rows(const Dataset& data, std::span<const std::uint32_t> students,
                                         const FeatureArtifacts& artifacts, const ExperimentConfig& config,
                                         const SkillMap& skill_map);

tan::FeatureDomains feature_domains(const FeatureArtifacts& artifacts, const ExperimentConfig& config);

struct FoldMetrics {
    int fold = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    double auc = 0.0;
    double rmse = 0.0;
};

struct Prediction {
    int fold = 0;
    Instance instance;
    double probability = 0.0;
};

struct MetricReport {
    FeatureSet feature_set = FeatureSet::ikt3;
    std::vector<FoldMetrics> folds;
    double mean_auc = 0.0;
    double mean_rmse = 0.0;
    double pooled_auc = 0.0;
    double pooled_rmse = 0.0;
    std::string fold_digest;  // fingerprint of the student split
    std::vector<Prediction> predictions;  // filled only when requested
};

struct RunOptions {
    bool keep_predictions = false;
};

MetricReport run_cv(const Dataset& data, const ExperimentConfig& config, const RunOptions& options = {});

// IKT-1/2/3 over the same folds and shared per-fold artifacts.
std::array<MetricReport, 3> run_ablation(const Dataset& data, const ExperimentConfig& config,
                                         const RunOptions& options = {});

std::string fold_digest(std::span<const FoldSplit> folds);

}  // namespace ikt::eval

#include "ikt/pipeline.hpp"

#include "ikt/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

namespace ikt::eval {

const bkt::BktParams& FeatureArtifacts::params_for(std::int64_t model_skill) const {
    if (model_skill < 0 || static_cast<std::size_t>(model_skill) >= skill_params.size()) return fallback;
    const auto& p = skill_params[static_cast<std::size_t>(model_skill)];
    return p ? *p : fallback;
}

SkillMap identity_skill_map(std::size_t skills) {
    SkillMap m(skills);
    std::iota(m.begin(), m.end(), std::int64_t{0});
    return m;
}

std::uint64_t cluster_seed(std::uint64_t seed, int fold) {
    return seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(fold) + 1;
}

std::vector<ability::PerformanceVector> training_vectors(const Dataset& data,
                                                         std::span<const std::uint32_t> students,
                                                         std::size_t interval_len, std::size_t skill_count) {
    std::vector<ability::PerformanceVector> out;
    for (const auto s : students) {
        const auto recs = data.student_records(s);
        ability::PerformanceAccumulator acc(skill_count);
        for (std::size_t t = 0; t < recs.size(); ++t) {
            acc.add({recs[t].skill, recs[t].correct});
            if ((t + 1) % interval_len == 0) out.push_back(acc.vector());
        }
    }
    return out;
}

FeatureArtifacts fit_artifacts(const Dataset& data, std::span<const std::uint32_t> train_students,
                               const ExperimentConfig& config, bool with_profiles, std::uint64_t kmeans_seed) {
    const std::size_t skills = data.skill_count();
    std::vector<std::vector<std::vector<std::uint8_t>>> sequences(skills);
    for (const auto s : train_students) {
        std::map<std::uint32_t, std::vector<std::uint8_t>> per_skill;
        for (const auto& r : data.student_records(s)) per_skill[r.skill].push_back(r.correct);
        for (auto& [skill, seq] : per_skill) sequences[skill].push_back(std::move(seq));
    }

    FeatureArtifacts a;
    a.skill_params.resize(skills);
    parallel_for(skills, config.workers,
                 [&](std::size_t k) { a.skill_params[k] = bkt::fit_skill(sequences[k], config.grid); });
    std::vector<bkt::BktParams> fitted;
    for (const auto& p : a.skill_params) {
        if (p) fitted.push_back(*p);
    }
    a.fallback = bkt::mean_params(fitted);

    if (with_profiles) {
        const auto vectors = training_vectors(data, train_students, config.interval_len, skills);
        ability::KMeansOptions opt;
        opt.k = config.clusters;
        opt.seed = kmeans_seed;
        opt.restarts = config.kmeans_restarts;
        opt.max_iterations = config.kmeans_max_iterations;
        a.clusters = ability::train_clusters(vectors, opt);
    }
    a.difficulty = difficulty::build_difficulty_table(data, train_students);
    return a;
}

std::vector<Instance> build_feature_rows(const Dataset& data, std::span<const std::uint32_t> students,
                                         const FeatureArtifacts& artifacts, const ExperimentConfig& config,
                                         const SkillMap& skill_map) {
    const std::size_t model_skills = artifacts.skill_count();
    std::vector<Instance> out;
    for (const auto s : students) {
        const auto recs = data.student_records(s);
        std::unordered_map<std::uint32_t, bkt::MasteryState> mastery;
        ability::PerformanceAccumulator acc(model_skills);
        ability::AbilityProfile profile = ability::kInitialProfile;
        for (std::size_t t = 0; t < recs.size(); ++t) {
            const auto& r = recs[t];
            const std::int64_t skill = skill_map.at(r.skill);
            const auto& params = artifacts.params_for(skill);
            const std::size_t z = ability::interval_of(t, config.interval_len);
            if (t > 0 && t % config.interval_len == 0 && artifacts.clusters) {
                const auto v = acc.vector();
                profile = ability::assign_profile(v, *artifacts.clusters, false);
            }

            auto it = mastery.find(r.skill);
            if (it == mastery.end()) it = mastery.emplace(r.skill, bkt::MasteryState(params)).first;

            Instance inst;
            inst.row.skill = skill < 0 ? static_cast<std::uint32_t>(model_skills) : static_cast<std::uint32_t>(skill);
            inst.row.mastery = it->second.prior();
            inst.row.profile = profile;
            inst.row.difficulty = difficulty::lookup(artifacts.difficulty, r.problem);
            inst.row.label = r.correct;
            inst.student = s;
            inst.position = t;
            inst.interval = z;
            inst.problem = r.problem;
            inst.order_key = r.order_key;
            out.push_back(inst);

            it->second.observe(params, r.correct);
            if (skill >= 0) acc.add({static_cast<std::uint32_t>(skill), r.correct});
        }
    }
    return out;
}

tan::FeatureDomains feature_domains(const FeatureArtifacts& artifacts, const ExperimentConfig& config) {
    tan::FeatureDomains d;
    d.skills = static_cast<std::uint32_t>(std::max<std::size_t>(artifacts.skill_count(), 1));
    d.profiles = static_cast<std::uint32_t>(config.clusters + 1);
    d.difficulties = difficulty::kMaxLevel + 1;
    return d;
}

std::string fold_digest(std::span<const FoldSplit> folds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& f : folds) {
        const std::string tag = "fold" + std::to_string(f.fold_id) + ":";
        h = io::fnv1a64(tag, h);
        for (const auto s : f.test_students) {
            const std::string id = std::to_string(s) + ",";
            h = io::fnv1a64(id, h);
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

struct FoldOutcome {
    std::vector<FoldMetrics> metrics;              // one per feature set
    std::vector<std::vector<metrics::Scored>> scored;
    std::vector<std::vector<Prediction>> predictions;
};

FoldOutcome run_fold(const Dataset& data, const FoldSplit& fold, const ExperimentConfig& config,
                     std::span<const FeatureSet> sets, const RunOptions& options) {
    const bool with_profiles = std::any_of(sets.begin(), sets.end(), [](FeatureSet f) { return f != FeatureSet::ikt1; });
    const auto artifacts = fit_artifacts(data, fold.train_students, config, with_profiles,
                                         cluster_seed(config.seed, fold.fold_id));
    const auto map = identity_skill_map(data.skill_count());
    const auto train = build_feature_rows(data, fold.train_students, artifacts, config, map);
    const auto test = build_feature_rows(data, fold.test_students, artifacts, config, map);
    std::vector<tan::FeatureRow> train_rows;
    train_rows.reserve(train.size());
    for (const auto& i : train) train_rows.push_back(i.row);
    const auto domains = feature_domains(artifacts, config);

    FoldOutcome out;
    for (const auto set : sets) {
        const auto features = features_of(set);
        const auto model = tan::fit_tan(train_rows, features, domains, config.alpha);
        std::vector<metrics::Scored> scored;
        std::vector<Prediction> preds;
        for (const auto& inst : test) {
            if (config.skip_first_interval && inst.interval == 1) continue;
            const double p = tan::predict_proba(model, tan::Evidence::from_row(inst.row));
            scored.push_back({p, inst.row.label});
            if (options.keep_predictions) preds.push_back({fold.fold_id, inst, p});
        }
        FoldMetrics fm;
        fm.fold = fold.fold_id;
        fm.train_rows = train_rows.size();
        fm.test_rows = scored.size();
        fm.auc = metrics::auc(scored);
        fm.rmse = metrics::rmse(scored);
        out.metrics.push_back(fm);
        out.scored.push_back(std::move(scored));
        out.predictions.push_back(std::move(preds));
    }
    return out;
}

std::vector<MetricReport> run_sets(const Dataset& data, const ExperimentConfig& config,
                                   std::span<const FeatureSet> sets, const RunOptions& options) {
    if (auto problems = config.validate(); !problems.empty()) throw ConfigError(std::move(problems));
    const auto folds = split_folds(data, config.folds, config.seed);
    const auto digest = fold_digest(folds);
    std::vector<MetricReport> reports(sets.size());
    std::vector<std::vector<metrics::Scored>> pooled(sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) {
        reports[k].feature_set = sets[k];
        reports[k].fold_digest = digest;
    }
    for (const auto& fold : folds) {
        auto outcome = run_fold(data, fold, config, sets, options);
        for (std::size_t k = 0; k < sets.size(); ++k) {
            reports[k].folds.push_back(outcome.metrics[k]);
            pooled[k].insert(pooled[k].end(), outcome.scored[k].begin(), outcome.scored[k].end());
            auto& preds = outcome.predictions[k];
            reports[k].predictions.insert(reports[k].predictions.end(), std::make_move_iterator(preds.begin()),
                                          std::make_move_iterator(preds.end()));
        }
    }
    for (std::size_t k = 0; k < sets.size(); ++k) {
        auto& r = reports[k];
        double auc_sum = 0.0, rmse_sum = 0.0;
        for (const auto& f : r.folds) {
            auc_sum += f.auc;
            rmse_sum += f.rmse;
        }
        r.mean_auc = auc_sum / static_cast<double>(r.folds.size());
        r.mean_rmse = rmse_sum / static_cast<double>(r.folds.size());
        r.pooled_auc = metrics::auc(pooled[k]);
        r.pooled_rmse = metrics::rmse(pooled[k]);
    }
    return reports;
}

}  // namespace

MetricReport run_cv(const Dataset& data, const ExperimentConfig& config, const RunOptions& options) {
    const std::array<FeatureSet, 1> sets{config.feature_set};
    return std::move(run_sets(data, config, sets, options).front());
}

std::array<MetricReport, 3> run_ablation(const Dataset& data, const ExperimentConfig& config,
                                         const RunOptions& options) {
    const std::array<FeatureSet, 3> sets{FeatureSet::ikt1, FeatureSet::ikt2, FeatureSet::ikt3};
    auto reports = run_sets(data, config, sets, options);
    return {std::move(reports[0]), std::move(reports[1]), std::move(reports[2])};
}

}  // namespace ikt::eval

// ikt: preprocess interaction logs, fit the feature extractors and TAN
// classifier, run cross-validated evaluation and ablation, and explain
// individual predictions.

#include "ikt/ability.hpp"
#include "ikt/bkt.hpp"
#include "ikt/config.hpp"
#include "ikt/dataset.hpp"
#include "ikt/difficulty.hpp"
#include "ikt/errors.hpp"
#include "ikt/pipeline.hpp"
#include "ikt/report.hpp"
#include "ikt/tan.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct CommonArgs {
    std::string data;
    std::string schema;
    std::string config;
    std::string out;
    std::optional<long long> seed;
    std::optional<long long> workers;
    std::string feature_set;
    bool ablation = false;
    bool predictions = false;
    std::string model;
};

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
    return s;
}

ikt::CsvSchema schema_from(const CommonArgs& a) {
    return a.schema.empty() ? ikt::CsvSchema{} : ikt::CsvSchema::load(a.schema);
}

ikt::ExperimentConfig config_from(const CommonArgs& a, bool force_ablation) {
    ikt::io::KeyValues kv;
    if (!a.config.empty()) {
        if (!fs::exists(a.config)) throw ikt::InputError("config file not found: " + a.config);
        kv = ikt::io::read_key_values(a.config);
    }
    if (a.seed) kv["seed"] = std::to_string(*a.seed);
    if (a.workers) kv["workers"] = std::to_string(*a.workers);
    if (!a.feature_set.empty()) kv["feature_set"] = a.feature_set;
    if (a.ablation || force_ablation) kv["ablation"] = "true";
    return ikt::parse_config(kv);
}

ikt::Dataset load_dataset(const CommonArgs& a, ikt::DropReport* report = nullptr) {
    auto loaded = ikt::load_csv(a.data, schema_from(a));
    if (report) *report = loaded.report;
    return std::move(loaded.data);
}

int cmd_preprocess(const CommonArgs& a) {
    auto loaded = ikt::load_csv(a.data, schema_from(a));
    auto result = ikt::preprocess(loaded.data);
    ikt::DropReport report = loaded.report;
    report.merge(result.report);

    const fs::path out = a.out;
    ikt::io::write_file(out, ikt::to_csv(result.data));
    std::string summary = report.to_text();
    summary += "students: " + std::to_string(result.data.student_count()) + '\n';
    summary += "skills: " + std::to_string(result.data.skill_count()) + '\n';
    summary += "problems: " + std::to_string(result.data.problem_count()) + '\n';
    std::string kv = report.to_key_values();
    kv += "students=" + std::to_string(result.data.student_count()) + '\n';
    kv += "skills=" + std::to_string(result.data.skill_count()) + '\n';
    kv += "problems=" + std::to_string(result.data.problem_count()) + '\n';
    ikt::io::write_file(fs::path(out.string() + ".report.txt"), summary + "\n" + kv);
    std::cout << summary;
    if (result.data.empty()) std::cerr << "warning: preprocessing produced an empty dataset\n";
    return 0;
}

void write_manifest(const fs::path& dir, const std::string& command, const ikt::ExperimentConfig& config,
                    const CommonArgs& a, std::vector<std::string> artifacts) {
    ikt::report::RunManifest m;
    m.command = command;
    m.config = config;
    m.inputs.emplace_back(a.data, ikt::io::file_digest(a.data));
    if (!a.schema.empty()) m.inputs.emplace_back(a.schema, ikt::io::file_digest(a.schema));
    if (!a.config.empty()) m.inputs.emplace_back(a.config, ikt::io::file_digest(a.config));
    m.artifacts = std::move(artifacts);
    ikt::io::write_file(dir / "manifest.txt", m.to_text());
}

int cmd_evaluate(const CommonArgs& a, bool force_ablation, const std::string& command) {
    const auto config = config_from(a, force_ablation);
    const auto data = load_dataset(a);
    const fs::path out = a.out;
    ikt::eval::RunOptions options;
    options.keep_predictions = a.predictions;
    const auto start = std::chrono::steady_clock::now();

    std::vector<ikt::eval::MetricReport> reports;
    if (config.ablation) {
        auto three = ikt::eval::run_ablation(data, config, options);
        reports.assign(std::make_move_iterator(three.begin()), std::make_move_iterator(three.end()));
    } else {
        reports.push_back(ikt::eval::run_cv(data, config, options));
    }

    std::vector<std::string> artifacts;
    for (const auto& r : reports) {
        std::string stem = std::string(ikt::feature_set_name(r.feature_set));
        stem.erase(std::remove(stem.begin(), stem.end(), '-'), stem.end());
        for (auto& ch : stem) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        ikt::io::write_file(out / ("report_" + stem + ".txt"), ikt::report::format_table(r));
        ikt::io::write_file(out / ("report_" + stem + ".kv"), ikt::report::format_key_values(r));
        artifacts.push_back("report_" + stem + ".txt");
        artifacts.push_back("report_" + stem + ".kv");
        if (a.predictions) {
            ikt::io::write_file(out / ("predictions_" + stem + ".tsv"), ikt::report::format_predictions(r, data));
            artifacts.push_back("predictions_" + stem + ".tsv");
        }
        std::cout << ikt::report::format_table(r) << '\n';
    }
    if (reports.size() > 1) {
        const auto cmp = ikt::report::format_comparison(reports);
        ikt::io::write_file(out / "ablation.txt", cmp);
        artifacts.push_back("ablation.txt");
        std::cout << cmp;
    }
    write_manifest(out, command, config, a, artifacts);
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "elapsed: " << secs << " s\n";
    return 0;
}

int cmd_fit(const CommonArgs& a, const std::string& command) {
    const auto config = config_from(a, false);
    const auto data = load_dataset(a);
    if (data.empty()) throw ikt::InputError("dataset is empty: " + a.data);
    std::vector<std::uint32_t> all(data.student_count());
    for (std::uint32_t s = 0; s < all.size(); ++s) all[s] = s;
    const bool profiles = config.feature_set != ikt::FeatureSet::ikt1;
    const auto artifacts = ikt::eval::fit_artifacts(data, all, config, profiles, ikt::eval::cluster_seed(config.seed, -1));
    const auto map = ikt::eval::identity_skill_map(data.skill_count());
    const auto instances = ikt::eval::build_feature_rows(data, all, artifacts, config, map);
    std::vector<ikt::tan::FeatureRow> rows;
    for (const auto& i : instances) rows.push_back(i.row);
    auto model = ikt::tan::fit_tan(rows, ikt::features_of(config.feature_set),
                                   ikt::eval::feature_domains(artifacts, config), config.alpha);
    model.skill_labels = data.skills().names();

    const fs::path out = a.out;
    std::vector<ikt::bkt::SkillParams> table;
    for (std::uint32_t k = 0; k < data.skill_count(); ++k) {
        table.push_back({data.skills().name(k), artifacts.params_for(k)});
    }
    ikt::io::write_file(out / "bkt_params.tsv", ikt::bkt::format_param_table(table));
    ikt::io::write_file(out / "difficulty.tsv", ikt::difficulty::format_table(artifacts.difficulty, data.problems()));
    ikt::io::write_file(out / "tan_model.txt", ikt::tan::serialize(model));
    ikt::io::write_file(out / "config.txt", config.to_key_values());
    std::vector<std::string> written{"bkt_params.tsv", "difficulty.tsv", "tan_model.txt", "config.txt"};
    if (artifacts.clusters) {
        ikt::io::write_file(out / "centroids.tsv", ikt::ability::format_centroids(*artifacts.clusters));
        written.push_back("centroids.tsv");
    }
    write_manifest(out, command, config, a, written);
    std::cout << "fitted " << data.skill_count() << " skills, " << rows.size() << " training rows; structure:";
    for (const auto& [p, c] : model.classifier.structure.edges()) {
        std::cout << ' ' << ikt::tan::feature_name(model.features[p]) << "->"
                  << ikt::tan::feature_name(model.features[c]);
    }
    std::cout << '\n';
    return 0;
}

int cmd_predict(const CommonArgs& a) {
    const fs::path dir = a.model;
    if (!fs::is_directory(dir)) throw ikt::InputError("model directory not found: " + a.model);
    const auto config = ikt::load_config(dir / "config.txt");
    const auto data = load_dataset(a);
    const auto model = ikt::tan::deserialize(ikt::io::read_file(dir / "tan_model.txt"));
    const auto params = ikt::bkt::parse_param_table(ikt::io::read_file(dir / "bkt_params.tsv"));

    // Model skill space is the order of the parameter table.
    ikt::IdIndex model_skills;
    ikt::eval::FeatureArtifacts artifacts;
    std::vector<ikt::bkt::BktParams> fitted;
    for (const auto& p : params) {
        model_skills.intern(p.skill_id);
        artifacts.skill_params.emplace_back(p.params);
        fitted.push_back(p.params);
    }
    artifacts.fallback = ikt::bkt::mean_params(fitted);
    if (fs::exists(dir / "centroids.tsv")) {
        artifacts.clusters = ikt::ability::parse_centroids(ikt::io::read_file(dir / "centroids.tsv"));
        if (artifacts.clusters->dimension() != model_skills.size()) {
            throw ikt::InputError("centroid dimension does not match the parameter table");
        }
    }
    artifacts.difficulty = ikt::difficulty::parse_table(ikt::io::read_file(dir / "difficulty.tsv"), data.problems());

    ikt::eval::SkillMap map(data.skill_count(), -1);
    for (std::uint32_t k = 0; k < data.skill_count(); ++k) {
        if (const auto m = model_skills.find(data.skills().name(k))) map[k] = *m;
    }
    std::vector<std::uint32_t> all(data.student_count());
    for (std::uint32_t s = 0; s < all.size(); ++s) all[s] = s;
    const auto instances = ikt::eval::build_feature_rows(data, all, artifacts, config, map);

    std::ostringstream os;
    os << "student_id\torder_key\tproblem_id\tskill_id\tmastery\tprofile\tdifficulty\tprobability\tlabel\tflagged\n";
    for (const auto& i : instances) {
        bool flagged = false;
        const auto values = model.encode(ikt::tan::Evidence::from_row(i.row));
        const double p = model.classifier.predict_proba(values, &flagged);
        const auto& rec = data.student_records(i.student)[i.position];
        os << data.students().name(i.student) << '\t' << ikt::io::format_exact(i.order_key) << '\t'
           << data.problems().name(i.problem) << '\t' << data.skills().name(rec.skill) << '\t'
           << ikt::io::format_fixed(i.row.mastery, 6) << '\t' << i.row.profile << '\t' << i.row.difficulty << '\t'
           << ikt::io::format_fixed(p, 6) << '\t' << int(i.row.label) << '\t' << (flagged ? 1 : 0) << '\n';
    }
    if (a.out.empty()) std::cout << os.str();
    else ikt::io::write_file(a.out, os.str());
    return 0;
}

struct ExplainArgs {
    std::string skill;
    double mastery = 0.0;
    long long profile = 1;
    long long difficulty = 5;
};

int cmd_explain(const CommonArgs& a, const ExplainArgs& e) {
    fs::path path = a.model;
    if (fs::is_directory(path)) path /= "tan_model.txt";
    if (!fs::exists(path)) throw ikt::InputError("model file not found: " + path.string());
    const auto model = ikt::tan::deserialize(ikt::io::read_file(path));

    ikt::tan::Evidence ev;
    ev.mastery = e.mastery;
    ev.profile = e.profile;
    ev.difficulty = e.difficulty;
    ev.skill = -1;
    for (std::size_t k = 0; k < model.skill_labels.size(); ++k) {
        if (model.skill_labels[k] == e.skill) ev.skill = static_cast<long long>(k);
    }
    if (ev.skill < 0 && model.skill_labels.empty()) {
        long long idx = 0;
        if (ikt::io::parse_int(e.skill, idx)) ev.skill = idx;
    }
    const auto ex = ikt::tan::explain(model, ev);
    std::cout << ikt::tan::format_explanation(ex);
    double sum = ex.prior_log_odds;
    for (const auto& n : ex.nodes) sum += n.log_ratio;
    const double p = ikt::tan::predict_proba(model, ev);
    const double logit = std::log(p) - std::log1p(-p);
    std::cout << "check: prior_log_odds + contributions = " << ikt::io::format_exact(sum)
              << "; posterior log-odds = " << ikt::io::format_exact(logit) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpretable knowledge tracing: latent features + TAN classifier"};
    app.require_subcommand(1);
    CommonArgs args;
    ExplainArgs explain_args;

    const auto add_data = [&](CLI::App* sub, bool schema) {
        sub->add_option("--data", args.data, "Interaction log (delimited text with header)")->required();
        if (schema) sub->add_option("--schema", args.schema, "Column mapping file (key = value)");
    };
    const auto add_experiment = [&](CLI::App* sub) {
        sub->add_option("--config", args.config, "Experiment config file (key = value)");
        sub->add_option("--seed", args.seed, "Seed for folds and clustering");
        sub->add_option("--workers", args.workers, "Worker thread cap");
        sub->add_option("--feature-set", args.feature_set, "ikt1, ikt2 or ikt3");
    };

    auto* pre = app.add_subcommand("preprocess", "Apply preprocessing rules and write a clean dataset");
    add_data(pre, true);
    pre->add_option("--out", args.out, "Output dataset path")->required();

    auto* fit = app.add_subcommand("fit", "Fit all artifacts on the full dataset");
    add_data(fit, true);
    add_experiment(fit);
    fit->add_option("--out", args.out, "Output directory")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Cross-validated AUC/RMSE");
    add_data(evaluate, true);
    add_experiment(evaluate);
    evaluate->add_flag("--ablation", args.ablation, "Run IKT-1/2/3 over shared folds");
    evaluate->add_flag("--predictions", args.predictions, "Also write per-prediction dumps");
    evaluate->add_option("--out", args.out, "Output directory")->required();

    auto* ablate = app.add_subcommand("ablate", "Cross-validated IKT-1/2/3 ablation");
    add_data(ablate, true);
    add_experiment(ablate);
    ablate->add_flag("--predictions", args.predictions, "Also write per-prediction dumps");
    ablate->add_option("--out", args.out, "Output directory")->required();

    auto* predict = app.add_subcommand("predict", "Score a dataset with fitted artifacts");
    add_data(predict, true);
    predict->add_option("--model", args.model, "Directory written by 'fit'")->required();
    predict->add_option("--out", args.out, "Output file (stdout if omitted)");

    auto* explain = app.add_subcommand("explain", "Posterior and per-node contributions for one evidence tuple");
    explain->add_option("--model", args.model, "TAN model file or 'fit' output directory")->required();
    explain->add_option("--skill", explain_args.skill, "Skill id")->required();
    explain->add_option("--mastery", explain_args.mastery, "Skill mastery in [0, 1]")->required();
    explain->add_option("--profile", explain_args.profile, "Ability profile label");
    explain->add_option("--difficulty", explain_args.difficulty, "Problem difficulty level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    const std::string command = join_args(argc, argv);
    try {
        if (*pre) return cmd_preprocess(args);
        if (*fit) return cmd_fit(args, command);
        if (*evaluate) return cmd_evaluate(args, false, command);
        if (*ablate) return cmd_evaluate(args, true, command);
        if (*predict) return cmd_predict(args);
        if (*explain) return cmd_explain(args, explain_args);
    } catch (const ikt::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

// Acceptance suite. One line per criterion:
//   AC<n> <PASS|FAIL|WAIVED|UNVERIFIED> <summary>
// Exit status is 1 if any criterion FAILs, otherwise 0.
//
// Criteria that need the public tutoring logs read them from
//   IKT_DATASET          path to a delimited interaction log
//   IKT_DATASET_SCHEMA   optional column mapping file
// Without them AC1 is waived and AC2 runs on a synthetic stand-in, reported
// as UNVERIFIED.

#include "ikt/bkt.hpp"
#include "ikt/dataset.hpp"
#include "ikt/metrics.hpp"
#include "ikt/pipeline.hpp"
#include "ikt/report.hpp"
#include "ikt/tan.hpp"

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace ikt;

namespace {

int failures = 0;

void report(int id, const std::string& status, const std::string& detail) {
    if (status == "FAIL") ++failures;
    std::cout << "AC" << id << ' ' << status << ' ' << detail << std::endl;
}

std::string fmt(double v, int digits = 4) { return io::format_fixed(v, digits); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

const char* env(const char* name) {
    const char* v = std::getenv(name);
    return v && *v ? v : nullptr;
}

std::optional<Dataset> real_dataset() {
    const char* path = env("IKT_DATASET");
    if (!path) return std::nullopt;
    CsvSchema schema;
    if (const char* s = env("IKT_DATASET_SCHEMA")) schema = CsvSchema::load(s);
    const auto loaded = load_csv(path, schema);
    return preprocess(loaded.data).data;
}

// ---------------------------------------------------------------------------

void ac1(const std::optional<Dataset>& data) {
    if (!data) {
        report(1, "WAIVED", "reference-number reproduction: no dataset supplied (set IKT_DATASET)");
        return;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto r = eval::run_cv(*data, ExperimentConfig{});
    const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
    const bool ok = std::abs(r.mean_auc - 0.797) <= 0.02 && std::abs(r.mean_rmse - 0.411) <= 0.02 && minutes < 30.0;
    report(1, ok ? "PASS" : "FAIL",
           "IKT-3 5-fold AUC=" + fmt(r.mean_auc) + " (target 0.797+-0.02) RMSE=" + fmt(r.mean_rmse) +
               " (target 0.411+-0.02) runtime=" + fmt(minutes, 1) + "min (limit 30)");
}

void ac2(const std::optional<Dataset>& data) {
    const bool proxy = !data;
    Dataset d;
    ExperimentConfig config;
    if (proxy) {
        d = Dataset::from_records(synth::tutor_world({}));
    } else {
        d = *data;
    }
    const auto r = eval::run_ablation(d, config);
    const double a1 = r[0].mean_auc, a2 = r[1].mean_auc, a3 = r[2].mean_auc;
    const bool ok = a1 < a2 && a2 < a3 && a3 - a2 >= 0.05;
    std::string detail = "ablation AUC IKT-1=" + fmt(a1) + " IKT-2=" + fmt(a2) + " IKT-3=" + fmt(a3) +
                         " (gap IKT-2->3 " + fmt(a3 - a2) + ", need >= 0.05)";
    if (proxy) {
        report(2, "UNVERIFIED", detail + "; synthetic stand-in, no public dataset supplied; stand-in ordering " +
                                    (ok ? "holds" : "does not hold"));
    } else {
        report(2, ok ? "PASS" : "FAIL", detail);
    }
}

void ac3() {
    std::mt19937_64 rng(20240301);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const bkt::BktParams p{u(rng), u(rng), u(rng), u(rng)};
        std::vector<std::uint8_t> seq(1 + rng() % 50);
        for (auto& x : seq) x = static_cast<std::uint8_t>(rng() & 1u);
        const auto ref = oracle::hmm_forward(p, seq);
        const auto trace = bkt::trace_mastery(p, seq);
        for (std::size_t t = 0; t < seq.size(); ++t) worst = std::max(worst, std::abs(trace[t] - ref.prior_mastered[t]));
        worst = std::max(worst, std::abs(bkt::sequence_log_likelihood(p, seq) - ref.log_likelihood));
    }
    report(3, worst <= 1e-12 ? "PASS" : "FAIL",
           "BKT vs HMM forward oracle, 1000 cases: max abs error " + sci(worst) + " (tolerance 1e-12)");
}

void ac4() {
    const bkt::FitGrid grid;
    const auto l0s = grid.values(grid.l0_cap), ts = grid.values(grid.t_cap);
    const auto gs = grid.values(grid.g_cap), ss = grid.values(grid.s_cap);
    std::mt19937_64 rng(4242);
    int recovered = 0, at_least_as_likely = 0;
    std::ostringstream misses;
    for (int draw = 0; draw < 20; ++draw) {
        const bkt::BktParams truth{l0s[rng() % l0s.size()], ts[rng() % ts.size()], gs[rng() % gs.size()],
                                   ss[rng() % ss.size()]};
        std::vector<std::vector<std::uint8_t>> seqs;
        for (int i = 0; i < 500; ++i) seqs.push_back(synth::simulate_bkt(truth, 50, rng));
        const auto fit = bkt::fit_skill(seqs, grid);
        if (fit && bkt::total_log_likelihood(*fit, seqs) >= bkt::total_log_likelihood(truth, seqs) - 1e-9)
            ++at_least_as_likely;
        const double tol = grid.step + 1e-9;
        const bool ok = fit && std::abs(fit->l0 - truth.l0) <= tol && std::abs(fit->t - truth.t) <= tol &&
                        std::abs(fit->g - truth.g) <= tol && std::abs(fit->s - truth.s) <= tol;
        if (ok) {
            ++recovered;
        } else {
            misses << " [truth " << fmt(truth.l0, 2) << ',' << fmt(truth.t, 2) << ',' << fmt(truth.g, 2) << ','
                   << fmt(truth.s, 2) << " fit " << fmt(fit->l0, 2) << ',' << fmt(fit->t, 2) << ','
                   << fmt(fit->g, 2) << ',' << fmt(fit->s, 2) << ']';
        }
    }
    report(4, recovered >= 19 ? "PASS" : "FAIL",
           "BKT recovery within one grid step: " + std::to_string(recovered) + "/20 draws (need >= 19); fit at " +
               "least as likely as the generating params in " + std::to_string(at_least_as_likely) + "/20" +
               (misses.str().empty() ? "" : "; misses (l0,t,g,s):" + misses.str()));
}

tan::TanClassifier random_classifier(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.02, 1.0);
    std::vector<std::uint32_t> domains(4);
    for (auto& d : domains) d = 2 + static_cast<std::uint32_t>(rng() % 5);
    std::vector<std::vector<double>> w(4, std::vector<double>(4, 0.0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) w[i][j] = w[j][i] = u(rng);
    auto c = tan::TanClassifier::uniform(domains, tan::maximum_spanning_tree(w));
    const double p1 = 0.02 + 0.96 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    c.prior = {1.0 - p1, p1};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::uint32_t pv = 0; pv < c.parent_domain(i); ++pv) {
            for (int y = 0; y < 2; ++y) {
                double total = 0.0;
                for (std::uint32_t v = 0; v < domains[i]; ++v) total += c.cpt_ref(i, v, pv, y) = u(rng);
                for (std::uint32_t v = 0; v < domains[i]; ++v) c.cpt_ref(i, v, pv, y) /= total;
            }
        }
    }
    return c;
}

void ac5() {
    std::mt19937_64 rng(55);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto c = random_classifier(rng);
        std::vector<std::int64_t> e(4);
        for (std::size_t k = 0; k < 4; ++k) e[k] = static_cast<std::int64_t>(rng() % c.domains[k]);
        worst = std::max(worst, std::abs(c.predict_proba(e) - oracle::joint_enumeration_posterior(c, e)));
    }

    // Structure: CMI weights from random 5-feature data with planted dependencies.
    int optimal = 0;
    const int cases = 100;
    for (int i = 0; i < cases; ++i) {
        tan::DiscreteData d;
        d.domains.resize(5);
        for (auto& dom : d.domains) dom = 2 + static_cast<std::uint32_t>(rng() % 3);
        d.columns.assign(5, {});
        for (int r = 0; r < 400; ++r) {
            const auto y = static_cast<std::uint8_t>(rng() & 1u);
            d.labels.push_back(y);
            for (std::size_t k = 0; k < 5; ++k) {
                std::uint32_t v = static_cast<std::uint32_t>(rng() % d.domains[k]);
                if (k > 0 && rng() % 3 == 0) v = (d.columns[rng() % k][r] + y) % d.domains[k];
                d.columns[k].push_back(v);
            }
        }
        std::vector<std::vector<double>> w(5, std::vector<double>(5, 0.0));
        for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = a + 1; b < 5; ++b) w[a][b] = w[b][a] = tan::conditional_mutual_information(d, a, b);
        std::size_t trees = 0;
        const double best = oracle::max_spanning_tree_weight(w, &trees);
        const auto s = tan::learn_structure(d);
        if (trees == 125 && s.is_tree() && std::abs(tan::tree_weight(s, w) - best) <= 1e-12) ++optimal;
    }
    const bool ok = worst <= 1e-9 && optimal == cases;
    report(5, ok ? "PASS" : "FAIL",
           "TAN vs joint enumeration, 1000 models: max abs error " + sci(worst) +
               " (tolerance 1e-9); learned tree optimal over all 125 spanning trees in " + std::to_string(optimal) +
               "/" + std::to_string(cases) + " five-node cases");
}

void ac6() {
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_auc = 0.0, worst_rmse = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + rng() % 199;
        std::vector<metrics::Scored> s(n);
        for (auto& x : s) {
            // Coarse scores so that ties occur.
            x.probability = (rng() % 2) ? std::round(u(rng) * 10.0) / 10.0 : u(rng);
            x.label = static_cast<std::uint8_t>(rng() & 1u);
        }
        s[0].label = 0;
        s[1].label = 1;
        worst_auc = std::max(worst_auc, std::abs(metrics::auc(s) - oracle::auc_pairwise(s)));
        long double sq = 0.0L;
        for (const auto& x : s) sq += (static_cast<long double>(x.probability) - x.label) *
                                      (static_cast<long double>(x.probability) - x.label);
        const double direct = static_cast<double>(std::sqrt(sq / static_cast<long double>(n)));
        worst_rmse = std::max(worst_rmse, std::abs(metrics::rmse(s) - direct));
    }
    const bool ok = worst_auc <= 1e-12 && worst_rmse <= 1e-12;
    report(6, ok ? "PASS" : "FAIL",
           "metrics vs direct oracles, 100 sets: max AUC error " + sci(worst_auc) + ", max RMSE error " +
               sci(worst_rmse) + " (tolerance 1e-12)");
}

void ac7() {
    synth::BktWorld w;
    w.students = 120;
    w.attempts = 50;
    const auto rows = synth::bkt_world(w);
    const auto data = Dataset::from_records(rows);
    const auto shuffled = Dataset::from_records(synth::shuffle_labels(rows, 99));
    ExperimentConfig config;
    config.feature_set = FeatureSet::ikt1;

    const auto r1 = eval::run_cv(data, config);
    const auto r2 = eval::run_cv(data, config);
    const auto rs = eval::run_cv(shuffled, config);

    // Determinism over the full feature set as well.
    ExperimentConfig full;
    const auto f1 = eval::run_ablation(data, full);
    const auto f2 = eval::run_ablation(data, full);
    bool identical = report::format_key_values(r1) == report::format_key_values(r2) &&
                     report::format_table(r1) == report::format_table(r2) &&
                     report::format_comparison(f1) == report::format_comparison(f2);
    for (std::size_t k = 0; k < 3; ++k) identical = identical && report::format_key_values(f1[k]) == report::format_key_values(f2[k]);

    const bool ok = r1.mean_auc > 0.65 && rs.mean_auc >= 0.47 && rs.mean_auc <= 0.53 && identical;
    report(7, ok ? "PASS" : "FAIL",
           "pipeline sanity on " + std::to_string(data.size()) + " simulated BKT interactions: IKT-1 AUC=" +
               fmt(r1.mean_auc) + " (need > 0.65), shuffled-label AUC=" + fmt(rs.mean_auc) +
               " (need 0.47..0.53), repeated runs byte-identical: " + (identical ? "yes" : "no"));
}

}  // namespace

int main() {
    try {
        const auto data = real_dataset();
        ac1(data);
        ac2(data);
        ac3();
        ac4();
        ac5();
        ac6();
        ac7();
    } catch (const std::exception& e) {
        std::cout << "acceptance suite aborted: " << e.what() << std::endl;
        return 2;
    }
    return failures == 0 ? 0 : 1;
}

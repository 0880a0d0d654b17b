#include "ikt/ability.hpp"
#include "ikt/bkt.hpp"
#include "ikt/config.hpp"
#include "ikt/dataset.hpp"
#include "ikt/difficulty.hpp"
#include "ikt/metrics.hpp"
#include "ikt/pipeline.hpp"
#include "ikt/report.hpp"
#include "ikt/tan.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;

namespace {

std::vector<ikt::metrics::Scored> zip_scores(const std::vector<double>& p, const std::vector<int>& y) {
    if (p.size() != y.size()) throw py::value_error("probabilities and labels differ in length");
    std::vector<ikt::metrics::Scored> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = {p[i], static_cast<std::uint8_t>(y[i] != 0)};
    return out;
}

ikt::ExperimentConfig config_from_dict(const py::dict& d) {
    ikt::io::KeyValues kv;
    for (const auto& [k, v] : d) {
        std::string value;
        if (py::isinstance<py::bool_>(v)) value = v.cast<bool>() ? "true" : "false";
        else value = py::str(v).cast<std::string>();
        kv[py::str(k).cast<std::string>()] = value;
    }
    return ikt::parse_config(kv);
}

py::dict report_dict(const ikt::eval::MetricReport& r) {
    py::dict d;
    d["feature_set"] = std::string(ikt::feature_set_name(r.feature_set));
    py::list folds;
    for (const auto& f : r.folds) {
        py::dict fd;
        fd["fold"] = f.fold;
        fd["auc"] = f.auc;
        fd["rmse"] = f.rmse;
        fd["train_rows"] = f.train_rows;
        fd["test_rows"] = f.test_rows;
        folds.append(fd);
    }
    d["folds"] = folds;
    d["mean_auc"] = r.mean_auc;
    d["mean_rmse"] = r.mean_rmse;
    d["pooled_auc"] = r.pooled_auc;
    d["pooled_rmse"] = r.pooled_rmse;
    d["fold_digest"] = r.fold_digest;
    d["table"] = ikt::report::format_table(r);
    return d;
}

ikt::tan::FeatureRow row_from_tuple(const py::tuple& t) {
    if (t.size() != 5) throw py::value_error("feature rows are (skill, mastery, profile, difficulty, label)");
    ikt::tan::FeatureRow r;
    r.skill = t[0].cast<std::uint32_t>();
    r.mastery = t[1].cast<double>();
    r.profile = t[2].cast<std::uint32_t>();
    r.difficulty = t[3].cast<std::uint32_t>();
    r.label = static_cast<std::uint8_t>(t[4].cast<int>() != 0);
    return r;
}

std::vector<ikt::tan::Feature> features_from(const std::vector<std::string>& names) {
    std::vector<ikt::tan::Feature> out;
    for (const auto& n : names) {
        const auto f = ikt::tan::parse_feature(n);
        if (!f) throw py::value_error("unknown feature '" + n + "'");
        out.push_back(*f);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_ikt, m) {
    m.doc() = "Interpretable knowledge tracing: BKT mastery, ability profiles, difficulty and a TAN classifier";

    py::register_exception<ikt::InputError>(m, "InputError", PyExc_ValueError);

    // bkt
    py::class_<ikt::bkt::BktParams>(m, "BktParams")
        .def(py::init<>())
        .def(py::init([](double l0, double t, double g, double s) { return ikt::bkt::BktParams{l0, t, g, s}; }),
             py::arg("l0"), py::arg("t"), py::arg("g"), py::arg("s"))
        .def_readwrite("l0", &ikt::bkt::BktParams::l0)
        .def_readwrite("t", &ikt::bkt::BktParams::t)
        .def_readwrite("g", &ikt::bkt::BktParams::g)
        .def_readwrite("s", &ikt::bkt::BktParams::s)
        .def("__eq__", [](const ikt::bkt::BktParams& a, const ikt::bkt::BktParams& b) { return a == b; })
        .def("__repr__", [](const ikt::bkt::BktParams& p) {
            return "BktParams(l0=" + ikt::io::format_exact(p.l0) + ", t=" + ikt::io::format_exact(p.t) +
                   ", g=" + ikt::io::format_exact(p.g) + ", s=" + ikt::io::format_exact(p.s) + ")";
        });

    m.def("posterior_given_obs", &ikt::bkt::posterior_given_obs, py::arg("params"), py::arg("prior"), py::arg("obs"));
    m.def("advance", &ikt::bkt::advance, py::arg("params"), py::arg("posterior"));
    m.def("trace_mastery", [](const ikt::bkt::BktParams& p, const std::vector<std::uint8_t>& r) {
        return ikt::bkt::trace_mastery(p, r);
    }, py::arg("params"), py::arg("responses"));
    m.def("sequence_log_likelihood", [](const ikt::bkt::BktParams& p, const std::vector<std::uint8_t>& r) {
        return ikt::bkt::sequence_log_likelihood(p, r);
    }, py::arg("params"), py::arg("responses"));
    m.def("fit_skill",
          [](const std::vector<std::vector<std::uint8_t>>& seqs, double step, double guess_cap, double slip_cap)
              -> std::optional<ikt::bkt::BktParams> {
              ikt::bkt::FitGrid grid;
              grid.step = step;
              grid.g_cap = guess_cap;
              grid.s_cap = slip_cap;
              return ikt::bkt::fit_skill(seqs, grid);
          },
          py::arg("sequences"), py::arg("step") = 0.05, py::arg("guess_cap") = 0.30, py::arg("slip_cap") = 0.30);

    // ability
    m.def("segment_intervals", [](std::size_t n, std::size_t len) {
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
        for (const auto& iv : ikt::ability::segment_intervals(n, len)) out.emplace_back(iv.index, iv.begin, iv.end);
        return out;
    }, py::arg("attempt_count"), py::arg("interval_len") = 20);
    m.def("performance_vector",
          [](const std::vector<std::pair<std::uint32_t, int>>& history, std::size_t skills) {
              std::vector<ikt::ability::Attempt> h;
              for (const auto& [s, c] : history) h.push_back({s, static_cast<std::uint8_t>(c != 0)});
              return ikt::ability::performance_vector(h, skills);
          },
          py::arg("history"), py::arg("skill_count"));
    m.def("train_clusters",
          [](const std::vector<std::vector<double>>& vectors, std::size_t k, std::uint64_t seed, std::size_t restarts,
             std::size_t max_iterations) {
              ikt::ability::KMeansOptions opt{k, seed, restarts, max_iterations};
              return ikt::ability::train_clusters(vectors, opt).centroids;
          },
          py::arg("vectors"), py::arg("k") = 7, py::arg("seed") = 1, py::arg("restarts") = 10,
          py::arg("max_iterations") = 300);
    m.def("assign_profile",
          [](const std::vector<double>& v, const std::vector<std::vector<double>>& centroids, bool first) {
              return ikt::ability::assign_profile(v, ikt::ability::ClusterModel{centroids}, first);
          },
          py::arg("vector"), py::arg("centroids"), py::arg("is_first_interval") = false);

    // difficulty
    m.def("difficulty_level", &ikt::difficulty::level_from_counts, py::arg("first_attempt_correct"),
          py::arg("students"));

    // metrics
    m.def("auc", [](const std::vector<double>& p, const std::vector<int>& y) {
        return ikt::metrics::auc(zip_scores(p, y));
    }, py::arg("probabilities"), py::arg("labels"));
    m.def("rmse", [](const std::vector<double>& p, const std::vector<int>& y) {
        return ikt::metrics::rmse(zip_scores(p, y));
    }, py::arg("probabilities"), py::arg("labels"));

    // tan
    py::class_<ikt::tan::TanModel>(m, "TanModel")
        .def_property_readonly("features", [](const ikt::tan::TanModel& mdl) {
            std::vector<std::string> out;
            for (const auto f : mdl.features) out.emplace_back(ikt::tan::feature_name(f));
            return out;
        })
        .def_property_readonly("cutpoints", [](const ikt::tan::TanModel& mdl) { return mdl.discretizer.cutpoints; })
        .def_property_readonly("parents", [](const ikt::tan::TanModel& mdl) { return mdl.classifier.structure.parent; })
        .def("predict_proba", [](const ikt::tan::TanModel& mdl, long long skill, double mastery, long long profile,
                                 long long difficulty) {
            return ikt::tan::predict_proba(mdl, {skill, mastery, profile, difficulty});
        }, py::arg("skill"), py::arg("mastery"), py::arg("profile") = 1, py::arg("difficulty") = 5)
        .def("explain", [](const ikt::tan::TanModel& mdl, long long skill, double mastery, long long profile,
                           long long difficulty) {
            const auto ex = ikt::tan::explain(mdl, {skill, mastery, profile, difficulty});
            py::dict d;
            d["probability"] = ex.probability;
            d["log_odds"] = ex.log_odds;
            d["prior_log_odds"] = ex.prior_log_odds;
            d["flagged"] = ex.flagged;
            py::list nodes;
            for (const auto& n : ex.nodes) {
                py::dict nd;
                nd["node"] = std::string(ikt::tan::feature_name(n.feature));
                nd["value"] = n.value;
                nd["parent"] = n.parent ? py::object(py::str(std::string(ikt::tan::feature_name(*n.parent))))
                                        : py::object(py::none());
                nd["log_ratio"] = n.log_ratio;
                nd["fallback"] = n.fallback;
                nodes.append(nd);
            }
            d["nodes"] = nodes;
            return d;
        }, py::arg("skill"), py::arg("mastery"), py::arg("profile") = 1, py::arg("difficulty") = 5)
        .def("serialize", [](const ikt::tan::TanModel& mdl) { return ikt::tan::serialize(mdl); })
        .def_static("deserialize", [](const std::string& s) { return ikt::tan::deserialize(s); });

    m.def("fit_tan",
          [](const std::vector<py::tuple>& rows, const std::vector<std::string>& features, std::uint32_t skills,
             std::uint32_t profiles, double alpha) {
              std::vector<ikt::tan::FeatureRow> r;
              r.reserve(rows.size());
              for (const auto& t : rows) r.push_back(row_from_tuple(t));
              ikt::tan::FeatureDomains d;
              d.skills = skills;
              d.profiles = profiles;
              const auto fs = features_from(features);
              return ikt::tan::fit_tan(r, fs, d, alpha);
          },
          py::arg("rows"), py::arg("features"), py::arg("skill_count"), py::arg("profile_count") = 8,
          py::arg("alpha") = 1.0);

    // dataset + evaluation
    py::class_<ikt::Dataset>(m, "Dataset")
        .def_property_readonly("size", &ikt::Dataset::size)
        .def_property_readonly("student_count", &ikt::Dataset::student_count)
        .def_property_readonly("skill_count", &ikt::Dataset::skill_count)
        .def_property_readonly("problem_count", &ikt::Dataset::problem_count)
        .def("to_csv", [](const ikt::Dataset& d) { return ikt::to_csv(d); })
        .def("__len__", &ikt::Dataset::size);

    const auto schema_from = [](const py::dict& d) {
        ikt::io::KeyValues kv;
        for (const auto& [k, v] : d) kv[py::str(k).cast<std::string>()] = py::str(v).cast<std::string>();
        return ikt::CsvSchema::from_key_values(kv);
    };
    m.def("load_csv", [schema_from](const std::filesystem::path& path, const py::dict& schema) {
        auto r = ikt::load_csv(path, schema_from(schema));
        return py::make_tuple(std::move(r.data), r.report.dropped);
    }, py::arg("path"), py::arg("schema") = py::dict());
    m.def("parse_csv", [schema_from](const std::string& text, const py::dict& schema) {
        auto r = ikt::parse_csv(text, schema_from(schema));
        return py::make_tuple(std::move(r.data), r.report.dropped);
    }, py::arg("text"), py::arg("schema") = py::dict());
    m.def("preprocess", [](const ikt::Dataset& d) {
        auto r = ikt::preprocess(d);
        return py::make_tuple(std::move(r.data), r.report.dropped);
    }, py::arg("dataset"));
    m.def("split_folds", [](const ikt::Dataset& d, int k, std::uint64_t seed) {
        std::vector<std::vector<std::uint32_t>> out;
        for (const auto& f : ikt::split_folds(d, k, seed)) out.push_back(f.test_students);
        return out;
    }, py::arg("dataset"), py::arg("k") = 5, py::arg("seed") = 1);
    m.def("run_cv", [](const ikt::Dataset& d, const py::dict& config) {
        const auto cfg = config_from_dict(config);
        ikt::eval::MetricReport r;
        {
            py::gil_scoped_release release;
            r = ikt::eval::run_cv(d, cfg);
        }
        return report_dict(r);
    }, py::arg("dataset"), py::arg("config") = py::dict());
    m.def("run_ablation", [](const ikt::Dataset& d, const py::dict& config) {
        const auto cfg = config_from_dict(config);
        std::array<ikt::eval::MetricReport, 3> r;
        {
            py::gil_scoped_release release;
            r = ikt::eval::run_ablation(d, cfg);
        }
        py::list out;
        for (const auto& x : r) out.append(report_dict(x));
        return out;
    }, py::arg("dataset"), py::arg("config") = py::dict());
}

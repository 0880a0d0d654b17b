#include "ikt/report.hpp"

#include <iomanip>
#include <sstream>

namespace ikt::report {

namespace {
std::string f6(double v) { return io::format_fixed(v, 6); }
}  // namespace

std::string format_table(const eval::MetricReport& r) {
    std::ostringstream os;
    os << feature_set_name(r.feature_set) << "  (folds " << r.fold_digest << ")\n";
    os << std::left << std::setw(8) << "fold" << std::right << std::setw(12) << "train_rows" << std::setw(12)
       << "test_rows" << std::setw(10) << "AUC" << std::setw(10) << "RMSE" << '\n';
    for (const auto& f : r.folds) {
        os << std::left << std::setw(8) << f.fold << std::right << std::setw(12) << f.train_rows << std::setw(12)
           << f.test_rows << std::setw(10) << f6(f.auc) << std::setw(10) << f6(f.rmse) << '\n';
    }
    os << std::left << std::setw(32) << "mean" << std::right << std::setw(10) << f6(r.mean_auc) << std::setw(10)
       << f6(r.mean_rmse) << '\n';
    os << std::left << std::setw(32) << "pooled" << std::right << std::setw(10) << f6(r.pooled_auc)
       << std::setw(10) << f6(r.pooled_rmse) << '\n';
    return os.str();
}

std::string format_key_values(const eval::MetricReport& r) {
    std::ostringstream os;
    const auto set = feature_set_name(r.feature_set);
    for (const auto& f : r.folds) {
        os << "feature_set=" << set << " fold=" << f.fold << " metric=auc value=" << f6(f.auc) << '\n';
        os << "feature_set=" << set << " fold=" << f.fold << " metric=rmse value=" << f6(f.rmse) << '\n';
        os << "feature_set=" << set << " fold=" << f.fold << " metric=test_rows value=" << f.test_rows << '\n';
    }
    os << "feature_set=" << set << " fold=mean metric=auc value=" << f6(r.mean_auc) << '\n';
    os << "feature_set=" << set << " fold=mean metric=rmse value=" << f6(r.mean_rmse) << '\n';
    os << "feature_set=" << set << " fold=pooled metric=auc value=" << f6(r.pooled_auc) << '\n';
    os << "feature_set=" << set << " fold=pooled metric=rmse value=" << f6(r.pooled_rmse) << '\n';
    os << "feature_set=" << set << " fold_digest=" << r.fold_digest << '\n';
    return os.str();
}

std::string format_comparison(std::span<const eval::MetricReport> reports) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "model" << std::right << std::setw(10) << "AUC" << std::setw(10) << "RMSE"
       << std::setw(12) << "pooledAUC" << std::setw(12) << "pooledRMSE" << '\n';
    for (const auto& r : reports) {
        os << std::left << std::setw(10) << feature_set_name(r.feature_set) << std::right << std::setw(10)
           << f6(r.mean_auc) << std::setw(10) << f6(r.mean_rmse) << std::setw(12) << f6(r.pooled_auc)
           << std::setw(12) << f6(r.pooled_rmse) << '\n';
    }
    return os.str();
}

std::string format_predictions(const eval::MetricReport& r, const Dataset& data) {
    std::ostringstream os;
    os << "fold\tstudent_id\torder_key\tproblem_id\tskill_id\tmastery\tprofile\tdifficulty\tprobability\tlabel\n";
    for (const auto& p : r.predictions) {
        const auto& i = p.instance;
        const auto& rec = data.student_records(i.student)[i.position];
        os << p.fold << '\t' << data.students().name(i.student) << '\t' << io::format_exact(i.order_key) << '\t'
           << data.problems().name(i.problem) << '\t' << data.skills().name(rec.skill) << '\t'
           << f6(i.row.mastery) << '\t' << i.row.profile << '\t' << i.row.difficulty << '\t' << f6(p.probability)
           << '\t' << int(i.row.label) << '\n';
    }
    return os.str();
}

std::string RunManifest::to_text() const {
    std::ostringstream os;
    os << "tool_version = " << kToolVersion << '\n';
    os << "command = " << command << '\n';
    for (const auto& [path, digest] : inputs) os << "input = " << path << " fnv1a64:" << digest << '\n';
    for (const auto& a : artifacts) os << "artifact = " << a << '\n';
    os << "# config\n" << config.to_key_values();
    return os.str();
}

}  // namespace ikt::report

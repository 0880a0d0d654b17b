// Drives the ikt executable end to end through the shell.

#include "ikt/dataset.hpp"
#include "ikt/table_io.hpp"

#include "../support/synthetic.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

namespace fs = std::filesystem;
using ikt::io::read_file;
using ikt::io::write_file;

namespace {

const fs::path kWork = fs::path(IKT_TEST_WORK_DIR) / "cli";

int run(const std::string& args, const std::string& tag) {
    const auto cmd = std::string(IKT_CLI_PATH) + " " + args + " > " + (kWork / (tag + ".out")).string() + " 2> " +
                     (kWork / (tag + ".err")).string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out_of(const std::string& tag) { return read_file(kWork / (tag + ".out")); }
std::string err_of(const std::string& tag) { return read_file(kWork / (tag + ".err")); }

const fs::path& dataset() {
    static const fs::path path = [] {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
        ikt::synth::BktWorld w;
        w.students = 30;
        w.attempts = 30;
        const auto p = kWork / "log.csv";
        write_file(p, ikt::to_csv(ikt::Dataset::from_records(ikt::synth::bkt_world(w))));
        write_file(kWork / "small.cfg", "K = 3\nkmeans_restarts = 2\ninterval_len = 10\nfolds = 3\n");
        return p;
    }();
    return path;
}

}  // namespace

TEST_CASE("preprocess writes a dataset and a drop report") {
    const auto data = dataset();
    write_file(kWork / "dirty.csv",
               "student_id,problem_id,skill_id,correct,order_key\n"
               "a,p1,add,1,1\na,p1,add,0,2\na,p2,,1,3\nb,p1,add,1,1\n");
    CHECK(run("preprocess --data " + (kWork / "dirty.csv").string() + " --out " + (kWork / "clean.csv").string(),
              "pre") == 0);
    const auto clean = ikt::load_csv(kWork / "clean.csv");
    CHECK(clean.data.size() == 2);
    const auto report = read_file(kWork / "clean.csv.report.txt");
    CHECK(report.find("1 dropped: missing skill") != std::string::npos);
    CHECK(report.find("1 dropped: repeat attempt") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
    dataset();
    CHECK(run("preprocess --data " + (kWork / "nope.csv").string() + " --out x.csv", "missing") == 2);
    CHECK(err_of("missing").find("not found") != std::string::npos);
    CHECK(run("preprocess --data " + dataset().string() + " --schema " + (kWork / "nope.schema").string() +
                  " --out " + (kWork / "y.csv").string(),
              "noschema") == 2);
    CHECK(run("evaluate --data " + dataset().string(), "noout") == 2);
    CHECK(run("frobnicate", "badcmd") == 2);
}

TEST_CASE("empty input is not an error") {
    dataset();
    write_file(kWork / "empty.csv", "student_id,problem_id,skill_id,correct,order_key\n");
    CHECK(run("preprocess --data " + (kWork / "empty.csv").string() + " --out " + (kWork / "empty_out.csv").string(),
              "empty") == 0);
    CHECK(err_of("empty").find("warning") != std::string::npos);
    CHECK(fs::exists(kWork / "empty_out.csv"));
}

TEST_CASE("invalid config names the field") {
    write_file(kWork / "bad.cfg", "K = 0\n");
    CHECK(run("evaluate --data " + dataset().string() + " --config " + (kWork / "bad.cfg").string() + " --out " +
                  (kWork / "bad").string(),
              "badcfg") == 2);
    CHECK(err_of("badcfg").find("K:") != std::string::npos);
}

TEST_CASE("ablation writes three reports") {
    const auto out = kWork / "abl";
    CHECK(run("evaluate --ablation --data " + dataset().string() + " --config " + (kWork / "small.cfg").string() +
                  " --out " + out.string(),
              "abl") == 0);
    for (const char* f : {"report_ikt1.txt", "report_ikt2.txt", "report_ikt3.txt", "ablation.txt", "manifest.txt"}) {
        INFO(f);
        CHECK(fs::exists(out / f));
    }
    // A repeated run is byte-identical.
    const auto out2 = kWork / "abl2";
    CHECK(run("ablate --data " + dataset().string() + " --config " + (kWork / "small.cfg").string() + " --out " +
                  out2.string(),
              "abl2") == 0);
    CHECK(read_file(out / "report_ikt3.kv") == read_file(out2 / "report_ikt3.kv"));
    CHECK(read_file(out / "ablation.txt") == read_file(out2 / "ablation.txt"));
}

TEST_CASE("fit, predict and explain") {
    const auto model = kWork / "model";
    CHECK(run("fit --data " + dataset().string() + " --config " + (kWork / "small.cfg").string() + " --out " +
                  model.string(),
              "fit") == 0);
    CHECK(fs::exists(model / "tan_model.txt"));
    CHECK(fs::exists(model / "centroids.tsv"));

    CHECK(run("predict --data " + dataset().string() + " --model " + model.string() + " --out " +
                  (kWork / "pred.tsv").string(),
              "predict") == 0);
    CHECK(!read_file(kWork / "pred.tsv").empty());

    CHECK(run("explain --model " + model.string() + " --skill k1 --mastery 0.8 --profile 2 --difficulty 7",
              "explain") == 0);
    const auto text = out_of("explain");
    CHECK(text.find("flagged=0") != std::string::npos);
    CHECK(text.find("check:") != std::string::npos);

    CHECK(run("explain --model " + model.string() + " --skill k1 --mastery 0.8 --difficulty 99", "explain_bad") == 0);
    CHECK(out_of("explain_bad").find("flagged=1") != std::string::npos);
}

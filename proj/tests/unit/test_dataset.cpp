#include "ikt/dataset.hpp"
#include "ikt/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

using namespace ikt;

namespace {
std::vector<RawRecord> students(std::size_t n, std::size_t attempts = 1) {
    std::vector<RawRecord> rows;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < attempts; ++t)
            rows.push_back({"s" + std::to_string(s), "p" + std::to_string(t), "k", 1, double(t), true});
    return rows;
}
}  // namespace

TEST_CASE("three-row csv") {
    const auto r = parse_csv("student_id,problem_id,skill_id,correct,order_key\n"
                             "a,p1,add,1,1\n"
                             "a,p2,sub,0,2\n"
                             "b,p1,add,1,1\n");
    CHECK(r.data.size() == 3);
    CHECK(r.data.skill_count() == 2);
    CHECK(r.data.student_count() == 2);
    CHECK(r.report.total_dropped() == 0);
}

TEST_CASE("rows without a skill are dropped and reported") {
    const auto r = parse_csv("student_id,problem_id,skill_id,correct,order_key\n"
                             "a,p1,add,1,1\n"
                             "a,p2,,0,2\n");
    CHECK(r.data.size() == 1);
    CHECK(r.report.to_text().find("1 dropped: missing skill") != std::string::npos);
}

TEST_CASE("records are ordered by order key within a student") {
    const auto r = parse_csv("student_id\tproblem_id\tskill_id\tcorrect\torder_key\n"
                             "a\tp3\tk\t1\t30\n"
                             "a\tp1\tk\t0\t10\n"
                             "a\tp2\tk\t1\t20\n");
    const auto recs = r.data.student_records(0);
    REQUIRE(recs.size() == 3);
    CHECK(r.data.problems().name(recs[0].problem) == "p1");
    CHECK(r.data.problems().name(recs[2].problem) == "p3");
}

TEST_CASE("schema remaps columns") {
    CsvSchema schema = CsvSchema::from_key_values(
        {{"student", "user_id"}, {"problem", "item"}, {"skill", "kc"}, {"correct", "ok"}, {"order", "ts"}});
    const auto r = parse_csv("user_id,item,kc,ok,ts\nu,i,k,1,5\n", schema);
    CHECK(r.data.size() == 1);
    CHECK_THROWS_AS(CsvSchema::from_key_values({{"colour", "x"}}), InputError);
}

TEST_CASE("input errors") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), InputError);
    CHECK_THROWS_AS(CsvSchema::load("/nonexistent/schema.txt"), InputError);
    CHECK_THROWS_AS(parse_csv("student_id,problem_id,correct\na,p,1\n"), InputError);
    CHECK_THROWS_AS(parse_csv("student_id,problem_id,skill_id,correct\na,p,k,maybe\n"), InputError);
}

TEST_CASE("empty input yields an empty dataset") {
    const auto r = parse_csv("student_id,problem_id,skill_id,correct,order_key\n");
    CHECK(r.data.empty());
    CHECK(r.report.to_text().find("warning") != std::string::npos);
}

TEST_CASE("preprocess keeps the first attempt per problem") {
    const auto raw = Dataset::from_records({{"s", "p1", "k", 0, 1, true},
                                            {"s", "p1", "k", 1, 2, true},
                                            {"s", "p2", "k", 1, 3, true},
                                            {"s", "p2", "k", 1, 3, true},
                                            {"s", "p3", "k", 1, 4, false}});
    const auto r = preprocess(raw);
    REQUIRE(r.data.size() == 2);
    CHECK(r.data.records()[0].correct == 0);
    CHECK(r.report.dropped.at("repeat_attempt") == 1);
    CHECK(r.report.dropped.at("duplicate") == 1);
    CHECK(r.report.dropped.at("scaffolding") == 1);
}

TEST_CASE("preprocess drops rows with an empty skill") {
    DropReport report;
    const auto raw = Dataset::from_records({{"s", "p1", "", 1, 1, true}, {"s", "p2", "k", 1, 2, true}}, &report);
    CHECK(raw.size() == 1);
    CHECK(report.dropped.at("missing_skill") == 1);
}

TEST_CASE("csv round trip") {
    const auto a = parse_csv("student_id,problem_id,skill_id,correct,order_key\n"
                             "a,\"p,1\",k,1,1.5\nb,p2,k,0,2\n");
    const auto b = parse_csv(to_csv(a.data));
    CHECK(to_csv(a.data) == to_csv(b.data));
    CHECK(b.data.problems().name(0) == "p,1");
}

TEST_CASE("fold sizes") {
    const auto ten = split_folds(Dataset::from_records(students(10)), 5, 1);
    for (const auto& f : ten) CHECK(f.test_students.size() == 2);

    const auto eleven = split_folds(Dataset::from_records(students(11)), 5, 1);
    std::vector<std::size_t> sizes;
    for (const auto& f : eleven) sizes.push_back(f.test_students.size());
    CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});
}

TEST_CASE("folds partition students") {
    for (std::size_t n : {5, 7, 23, 64}) {
        for (int k : {2, 3, 5}) {
            const auto data = Dataset::from_records(students(n));
            const auto folds = split_folds(data, k, 42);
            std::multiset<std::uint32_t> all;
            for (const auto& f : folds) {
                all.insert(f.test_students.begin(), f.test_students.end());
                CHECK(f.train_students.size() + f.test_students.size() == n);
                std::vector<std::uint32_t> both;
                std::set_intersection(f.train_students.begin(), f.train_students.end(), f.test_students.begin(),
                                      f.test_students.end(), std::back_inserter(both));
                CHECK(both.empty());
            }
            CHECK(all.size() == n);
            CHECK(std::set<std::uint32_t>(all.begin(), all.end()).size() == n);
        }
    }
}

TEST_CASE("folds are deterministic in the seed") {
    const auto data = Dataset::from_records(students(30));
    const auto a = split_folds(data, 5, 9);
    const auto b = split_folds(data, 5, 9);
    const auto c = split_folds(data, 5, 10);
    bool same = true, differs = false;
    for (int f = 0; f < 5; ++f) {
        same = same && a[f].test_students == b[f].test_students;
        differs = differs || a[f].test_students != c[f].test_students;
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("fold errors") {
    const auto data = Dataset::from_records(students(3));
    CHECK_THROWS_AS(split_folds(data, 1, 1), InputError);
    CHECK_THROWS_AS(split_folds(data, 5, 1), InputError);
}

#include "ikt/difficulty.hpp"

#include <doctest.h>

using namespace ikt;
using namespace ikt::difficulty;

namespace {
std::vector<RawRecord> first_attempts(const std::string& problem, std::size_t n, std::size_t correct) {
    std::vector<RawRecord> rows;
    for (std::size_t s = 0; s < n; ++s)
        rows.push_back({"s" + std::to_string(s), problem, "k", s < correct ? 1 : 0, 1.0, true});
    return rows;
}
}  // namespace

TEST_CASE("level from counts") {
    CHECK(level_from_counts(3, 7) == 4);
    CHECK(level_from_counts(4, 4) == 10);
    CHECK(level_from_counts(0, 4) == 0);
    CHECK(level_from_counts(3, 3) == 5);
    CHECK(level_from_counts(7, 10) == 7);  // no drift below an exact tenth
    CHECK(level_from_counts(0, 0) == 5);
}

TEST_CASE("table from a dataset") {
    auto rows = first_attempts("p7", 7, 3);
    for (auto& r : first_attempts("p3", 3, 3)) rows.push_back(r);
    for (auto& r : first_attempts("p4", 4, 4)) rows.push_back(r);
    // A later retry by s0 on p7 does not count.
    rows.push_back({"s0", "p7", "k", 0, 2.0, true});
    rows.push_back({"s6", "p7", "k", 1, 3.0, true});
    const auto data = Dataset::from_records(rows);
    const auto t = build_difficulty_table(data);
    CHECK(lookup(t, *data.problems().find("p7")) == 4);
    CHECK(lookup(t, *data.problems().find("p3")) == 5);
    CHECK(lookup(t, *data.problems().find("p4")) == 10);
    CHECK(lookup(t, 999) == 5);
}

TEST_CASE("only listed students contribute") {
    const auto data = Dataset::from_records(first_attempts("p", 8, 4));
    std::vector<std::uint32_t> train{0, 1, 2, 3};  // all correct
    CHECK(lookup(build_difficulty_table(data, train), 0) == 10);
    std::vector<std::uint32_t> few{0, 1, 2};
    CHECK(lookup(build_difficulty_table(data, few), 0) == 5);
}

TEST_CASE("rebuild is identical and text round trips") {
    auto rows = first_attempts("a", 9, 2);
    for (auto& r : first_attempts("b", 5, 4)) rows.push_back(r);
    const auto data = Dataset::from_records(rows);
    const auto t1 = build_difficulty_table(data);
    const auto t2 = build_difficulty_table(data);
    CHECK(format_table(t1, data.problems()) == format_table(t2, data.problems()));
    const auto back = parse_table(format_table(t1, data.problems()), data.problems());
    CHECK(back.levels == t1.levels);
}

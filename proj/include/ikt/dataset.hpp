#pragma once

#include "ikt/table_io.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ikt {

// Bijection between opaque string identifiers and dense indices 0..size()-1,
// assigned in order of first appearance.
class IdIndex {
public:
    std::uint32_t intern(std::string_view id);
    std::optional<std::uint32_t> find(std::string_view id) const;
    const std::string& name(std::uint32_t index) const { return names_.at(index); }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> lookup_;
};

// One student attempt in dense-index form.
struct InteractionRecord {
    std::uint32_t student = 0;
    std::uint32_t problem = 0;
    std::uint32_t skill = 0;
    std::uint8_t correct = 0;
    double order_key = 0.0;
    bool original = true;  // false for scaffolding sub-problems
};

// One attempt as read from a file, before indexing.
struct RawRecord {
    std::string student;
    std::string problem;
    std::string skill;
    int correct = 0;
    double order_key = 0.0;
    bool original = true;
};

// Tally of rows removed during loading or preprocessing, keyed by reason.
struct DropReport {
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;
    std::map<std::string, std::size_t> dropped;

    void drop(const std::string& reason, std::size_t n = 1) { dropped[reason] += n; }
    std::size_t total_dropped() const;
    void merge(const DropReport& later);

    std::string to_text() const;
    std::string to_key_values() const;
};

// Interaction log grouped by student, each student's records ordered by
// (order_key, input position). Immutable once built.
class Dataset {
public:
    Dataset() = default;

    // Rows with an empty student/problem/skill are removed and tallied.
    static Dataset from_records(const std::vector<RawRecord>& rows, DropReport* report = nullptr);

    std::span<const InteractionRecord> records() const { return records_; }
    std::span<const InteractionRecord> student_records(std::uint32_t student) const;

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::size_t student_count() const { return students_.size(); }
    std::size_t skill_count() const { return skills_.size(); }
    std::size_t problem_count() const { return problems_.size(); }

    const IdIndex& students() const { return students_; }
    const IdIndex& skills() const { return skills_; }
    const IdIndex& problems() const { return problems_; }

    std::vector<RawRecord> to_raw() const;

private:
    IdIndex students_;
    IdIndex skills_;
    IdIndex problems_;
    std::vector<InteractionRecord> records_;
    std::vector<std::size_t> offsets_;  // student s owns [offsets_[s], offsets_[s+1])
};

// Column mapping for delimited input. Keys in the schema file:
//   student, problem, skill, correct, order, original, original_value, delimiter
struct CsvSchema {
    std::string student_column = "student_id";
    std::string problem_column = "problem_id";
    std::string skill_column = "skill_id";
    std::string correct_column = "correct";
    std::string order_column = "order_key";
    // When false a missing order column falls back to file row order.
    bool order_required = false;
    // Optional scaffolding filter: rows whose `original_column` differs from
    // `original_value` are marked non-original and removed by preprocess().
    std::string original_column;
    std::string original_value = "1";
    char delimiter = '\0';  // '\0' detects comma vs tab from the header

    static CsvSchema from_key_values(const io::KeyValues& kv);
    static CsvSchema load(const std::filesystem::path& path);
};

struct LoadResult {
    Dataset data;
    DropReport report;
};

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
LoadResult parse_csv(std::string_view text, const CsvSchema& schema = {}, const std::string& origin = "<input>");

// Keeps the first attempt per (student, original problem), removes
// scaffolding rows, exact duplicates and rows with missing identifiers.
LoadResult preprocess(const Dataset& raw);

// Writes student_id,problem_id,skill_id,correct,order_key rows, readable
// back with the default schema.
std::string to_csv(const Dataset& data);

struct FoldSplit {
    int fold_id = 0;
    std::vector<std::uint32_t> train_students;  // ascending
    std::vector<std::uint32_t> test_students;   // ascending
};

// Seeded shuffle of student indices dealt round-robin into k test groups.
std::vector<FoldSplit> split_folds(const Dataset& data, int k, std::uint64_t seed);

}  // namespace ikt

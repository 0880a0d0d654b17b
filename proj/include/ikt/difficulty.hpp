#pragma once

#include "ikt/dataset.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>

namespace ikt::difficulty {

using Level = std::uint32_t;

inline constexpr Level kDefaultLevel = 5;
inline constexpr std::size_t kMinStudents = 4;
inline constexpr Level kMaxLevel = 10;

// Problem dense index -> level in {0, ..., 10}. Problems attempted by fewer
// than four distinct students are absent and resolve to the default.
struct DifficultyTable {
    std::unordered_map<std::uint32_t, Level> levels;
    Level default_level = kDefaultLevel;
};

// floor(10 * first-attempt success rate), or the default below the student threshold.
Level level_from_counts(std::size_t first_attempt_correct, std::size_t students);

// Uses each listed student's first attempt on every problem.
DifficultyTable build_difficulty_table(const Dataset& data, std::span<const std::uint32_t> students);
DifficultyTable build_difficulty_table(const Dataset& data);

Level lookup(const DifficultyTable& table, std::uint32_t problem);

// "problem_id<TAB>level" rows for problems present in the table, in index order.
std::string format_table(const DifficultyTable& table, const IdIndex& problems);
// Parses rows back, resolving problem ids through `problems`; unknown ids are skipped.
DifficultyTable parse_table(const std::string& text, const IdIndex& problems);

}  // namespace ikt::difficulty

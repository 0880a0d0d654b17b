#include "ikt/difficulty.hpp"

#include "ikt/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <vector>

namespace ikt::difficulty {

Level level_from_counts(std::size_t first_attempt_correct, std::size_t students) {
    if (students < kMinStudents) return kDefaultLevel;
    // Integer floor avoids 10 * (7/10) landing on 6.999...
    return static_cast<Level>((first_attempt_correct * kMaxLevel) / students);
}

DifficultyTable build_difficulty_table(const Dataset& data, std::span<const std::uint32_t> students) {
    std::vector<std::size_t> attempted(data.problem_count(), 0);
    std::vector<std::size_t> correct(data.problem_count(), 0);
    for (const auto s : students) {
        std::unordered_set<std::uint32_t> seen;
        for (const auto& r : data.student_records(s)) {
            if (!seen.insert(r.problem).second) continue;
            ++attempted[r.problem];
            correct[r.problem] += r.correct;
        }
    }
    DifficultyTable table;
    for (std::uint32_t p = 0; p < data.problem_count(); ++p) {
        if (attempted[p] >= kMinStudents) table.levels[p] = level_from_counts(correct[p], attempted[p]);
    }
    return table;
}

DifficultyTable build_difficulty_table(const Dataset& data) {
    std::vector<std::uint32_t> all(data.student_count());
    std::iota(all.begin(), all.end(), 0u);
    return build_difficulty_table(data, all);
}

Level lookup(const DifficultyTable& table, std::uint32_t problem) {
    const auto it = table.levels.find(problem);
    return it == table.levels.end() ? table.default_level : it->second;
}

std::string format_table(const DifficultyTable& table, const IdIndex& problems) {
    std::vector<std::uint32_t> keys;
    keys.reserve(table.levels.size());
    for (const auto& [p, level] : table.levels) keys.push_back(p);
    std::sort(keys.begin(), keys.end());
    std::ostringstream os;
    os << "problem_id\tlevel\n";
    for (const auto p : keys) os << problems.name(p) << '\t' << table.levels.at(p) << '\n';
    return os.str();
}

DifficultyTable parse_table(const std::string& text, const IdIndex& problems) {
    DifficultyTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || io::trim(line).empty()) continue;
        const auto f = io::split_delimited(line, '\t');
        long long level = 0;
        if (f.size() != 2 || !io::parse_int(f[1], level) || level < 0 || level > kMaxLevel) {
            throw InputError("difficulty table line " + std::to_string(line_no) + " is malformed");
        }
        if (const auto p = problems.find(f[0])) table.levels[*p] = static_cast<Level>(level);
    }
    return table;
}

}  // namespace ikt::difficulty

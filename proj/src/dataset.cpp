#include "ikt/dataset.hpp"

#include "ikt/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace ikt {

namespace {

bool is_missing(std::string_view v) {
    v = io::trim(v);
    return v.empty() || v == "NA" || v == "NULL" || v == "null" || v == "nan" || v == "NaN";
}

int parse_correct(std::string_view v) {
    v = io::trim(v);
    if (v == "1" || v == "true" || v == "TRUE" || v == "True") return 1;
    if (v == "0" || v == "false" || v == "FALSE" || v == "False") return 0;
    double d = 0.0;
    if (io::parse_double(v, d) && (d == 0.0 || d == 1.0)) return static_cast<int>(d);
    return -1;
}

std::string reason_label(const std::string& reason) {
    std::string out = reason;
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

}  // namespace

std::uint32_t IdIndex::intern(std::string_view id) {
    const auto it = lookup_.find(std::string(id));
    if (it != lookup_.end()) return it->second;
    const auto idx = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(id);
    lookup_.emplace(names_.back(), idx);
    return idx;
}

std::optional<std::uint32_t> IdIndex::find(std::string_view id) const {
    const auto it = lookup_.find(std::string(id));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t DropReport::total_dropped() const {
    std::size_t n = 0;
    for (const auto& [reason, count] : dropped) n += count;
    return n;
}

void DropReport::merge(const DropReport& later) {
    for (const auto& [reason, count] : later.dropped) dropped[reason] += count;
    rows_out = later.rows_out;
}

std::string DropReport::to_text() const {
    std::ostringstream os;
    os << "rows read: " << rows_in << '\n';
    os << "rows kept: " << rows_out << '\n';
    for (const auto& [reason, count] : dropped) {
        os << count << " dropped: " << reason_label(reason) << '\n';
    }
    if (rows_out == 0) os << "warning: no records remain\n";
    return os.str();
}

std::string DropReport::to_key_values() const {
    std::ostringstream os;
    os << "rows_in=" << rows_in << '\n';
    os << "rows_out=" << rows_out << '\n';
    for (const auto& [reason, count] : dropped) os << "dropped." << reason << '=' << count << '\n';
    return os.str();
}

Dataset Dataset::from_records(const std::vector<RawRecord>& rows, DropReport* report) {
    Dataset ds;
    struct Pending {
        InteractionRecord rec;
        std::size_t position;
    };
    std::vector<Pending> pending;
    pending.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const char* reason = nullptr;
        if (is_missing(r.student)) reason = "missing_student";
        else if (is_missing(r.skill)) reason = "missing_skill";
        else if (is_missing(r.problem)) reason = "missing_problem";
        else if (r.correct != 0 && r.correct != 1) reason = "bad_correct";
        if (reason) {
            if (report) report->drop(reason);
            continue;
        }
        InteractionRecord rec;
        rec.student = ds.students_.intern(io::trim(r.student));
        rec.skill = ds.skills_.intern(io::trim(r.skill));
        rec.problem = ds.problems_.intern(io::trim(r.problem));
        rec.correct = static_cast<std::uint8_t>(r.correct);
        rec.order_key = r.order_key;
        rec.original = r.original;
        pending.push_back({rec, i});
    }
    std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        return std::tie(a.rec.student, a.rec.order_key, a.position) <
               std::tie(b.rec.student, b.rec.order_key, b.position);
    });
    ds.records_.reserve(pending.size());
    ds.offsets_.assign(ds.students_.size() + 1, 0);
    for (const auto& p : pending) {
        ds.records_.push_back(p.rec);
        ++ds.offsets_[p.rec.student + 1];
    }
    std::partial_sum(ds.offsets_.begin(), ds.offsets_.end(), ds.offsets_.begin());
    if (report) {
        if (report->rows_in == 0) report->rows_in = rows.size();
        report->rows_out = ds.records_.size();
    }
    return ds;
}

std::span<const InteractionRecord> Dataset::student_records(std::uint32_t student) const {
    if (student + 1 >= offsets_.size()) throw std::out_of_range("student index out of range");
    return std::span<const InteractionRecord>(records_).subspan(
        offsets_[student], offsets_[student + 1] - offsets_[student]);
}

std::vector<RawRecord> Dataset::to_raw() const {
    std::vector<RawRecord> out;
    out.reserve(records_.size());
    for (const auto& r : records_) {
        out.push_back({students_.name(r.student), problems_.name(r.problem), skills_.name(r.skill),
                       r.correct, r.order_key, r.original});
    }
    return out;
}

CsvSchema CsvSchema::from_key_values(const io::KeyValues& kv) {
    CsvSchema s;
    for (const auto& [key, value] : kv) {
        if (key == "student") s.student_column = value;
        else if (key == "problem") s.problem_column = value;
        else if (key == "skill") s.skill_column = value;
        else if (key == "correct") s.correct_column = value;
        else if (key == "order") {
            s.order_column = value;
            s.order_required = !value.empty();
        } else if (key == "original") s.original_column = value;
        else if (key == "original_value") s.original_value = value;
        else if (key == "delimiter") {
            if (value == "comma" || value == ",") s.delimiter = ',';
            else if (value == "tab" || value == "\\t") s.delimiter = '\t';
            else if (value == "auto") s.delimiter = '\0';
            else throw InputError("schema: unsupported delimiter '" + value + "'");
        } else {
            throw InputError("schema: unknown key '" + key + "'");
        }
    }
    return s;
}

CsvSchema CsvSchema::load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("schema file not found: " + path.string());
    return from_key_values(io::read_key_values(path));
}

LoadResult parse_csv(std::string_view text, const CsvSchema& schema, const std::string& origin) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    }
    while (!lines.empty() && io::trim(lines.back()).empty()) lines.pop_back();

    LoadResult result;
    if (lines.empty()) {
        result.data = Dataset::from_records({}, &result.report);
        return result;
    }
    std::string_view header_line = lines.front();
    if (header_line.substr(0, 3) == "\xEF\xBB\xBF") header_line.remove_prefix(3);
    const char delim = schema.delimiter != '\0'
                           ? schema.delimiter
                           : (header_line.find('\t') != std::string_view::npos ? '\t' : ',');
    const auto header = io::split_delimited(header_line, delim);

    const auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (io::trim(header[i]) == name) return i;
        }
        if (required) throw InputError(origin + ": missing mapped column '" + name + "'");
        return std::nullopt;
    };
    const auto c_student = *column(schema.student_column, true);
    const auto c_problem = *column(schema.problem_column, true);
    const auto c_skill = *column(schema.skill_column, true);
    const auto c_correct = *column(schema.correct_column, true);
    std::optional<std::size_t> c_order, c_original;
    if (!schema.order_column.empty()) c_order = column(schema.order_column, schema.order_required);
    if (!schema.original_column.empty()) c_original = column(schema.original_column, true);
    std::size_t width = std::max({c_student, c_problem, c_skill, c_correct});
    if (c_order) width = std::max(width, *c_order);
    if (c_original) width = std::max(width, *c_original);

    std::vector<RawRecord> rows;
    std::vector<std::string> order_text;
    rows.reserve(lines.size() - 1);
    DropReport& report = result.report;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (io::trim(lines[li]).empty()) continue;
        ++report.rows_in;
        const auto f = io::split_delimited(lines[li], delim);
        if (f.size() <= width) {
            report.drop("short_row");
            continue;
        }
        RawRecord r;
        r.student = std::string(io::trim(f[c_student]));
        r.problem = std::string(io::trim(f[c_problem]));
        r.skill = std::string(io::trim(f[c_skill]));
        r.correct = parse_correct(f[c_correct]);
        if (r.correct < 0) {
            throw InputError(origin + ":" + std::to_string(li + 1) +
                             ": unparseable correctness value '" + f[c_correct] + "'");
        }
        r.order_key = static_cast<double>(li);
        if (c_order) order_text.emplace_back(io::trim(f[*c_order]));
        if (c_original) r.original = io::trim(f[*c_original]) == schema.original_value;
        rows.push_back(std::move(r));
    }

    if (c_order) {
        // Numeric order keys are used as-is; otherwise keys are ranked as text
        // (ISO timestamps sort correctly this way).
        std::vector<double> numeric(order_text.size());
        bool all_numeric = true;
        for (std::size_t i = 0; i < order_text.size() && all_numeric; ++i) {
            all_numeric = io::parse_double(order_text[i], numeric[i]);
        }
        if (!all_numeric) {
            std::vector<std::string> sorted = order_text;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (std::size_t i = 0; i < order_text.size(); ++i) {
                numeric[i] = static_cast<double>(
                    std::lower_bound(sorted.begin(), sorted.end(), order_text[i]) - sorted.begin());
            }
        }
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i].order_key = numeric[i];
    }

    result.data = Dataset::from_records(rows, &report);
    return result;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    if (!std::filesystem::exists(path)) throw InputError("input file not found: " + path.string());
    return parse_csv(io::read_file(path), schema, path.string());
}

LoadResult preprocess(const Dataset& raw) {
    LoadResult result;
    result.report.rows_in = raw.size();
    std::vector<RawRecord> kept;
    kept.reserve(raw.size());
    for (std::uint32_t s = 0; s < raw.student_count(); ++s) {
        std::set<std::uint32_t> seen_problems;
        std::set<std::tuple<std::uint32_t, std::uint32_t, int, double>> seen_rows;
        for (const auto& r : raw.student_records(s)) {
            if (!r.original) {
                result.report.drop("scaffolding");
                continue;
            }
            if (!seen_rows.emplace(r.problem, r.skill, r.correct, r.order_key).second) {
                result.report.drop("duplicate");
                continue;
            }
            if (!seen_problems.insert(r.problem).second) {
                result.report.drop("repeat_attempt");
                continue;
            }
            kept.push_back({raw.students().name(r.student), raw.problems().name(r.problem),
                            raw.skills().name(r.skill), r.correct, r.order_key, true});
        }
    }
    result.data = Dataset::from_records(kept, &result.report);
    result.report.rows_in = raw.size();
    return result;
}

std::string to_csv(const Dataset& data) {
    std::ostringstream os;
    os << "student_id,problem_id,skill_id,correct,order_key\n";
    const auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (const char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + '"';
    };
    for (const auto& r : data.records()) {
        os << quote(data.students().name(r.student)) << ',' << quote(data.problems().name(r.problem))
           << ',' << quote(data.skills().name(r.skill)) << ',' << int(r.correct) << ','
           << io::format_exact(r.order_key) << '\n';
    }
    return os.str();
}

std::vector<FoldSplit> split_folds(const Dataset& data, int k, std::uint64_t seed) {
    if (k < 2) throw InputError("fold count must be at least 2");
    const auto n = data.student_count();
    if (n < static_cast<std::size_t>(k)) {
        throw InputError("fewer students (" + std::to_string(n) + ") than folds (" +
                         std::to_string(k) + ")");
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> fold_of(n);
    for (std::size_t i = 0; i < n; ++i) fold_of[order[i]] = static_cast<int>(i % k);

    std::vector<FoldSplit> folds(k);
    for (int f = 0; f < k; ++f) {
        folds[f].fold_id = f;
        for (std::uint32_t s = 0; s < n; ++s) {
            (fold_of[s] == f ? folds[f].test_students : folds[f].train_students).push_back(s);
        }
    }
    return folds;
}

}  // namespace ikt

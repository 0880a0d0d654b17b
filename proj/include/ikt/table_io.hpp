#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ikt::io {

// Ordered `key = value` pairs. Blank lines and lines starting with '#' are
// skipped; later duplicates overwrite earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text, const std::string& origin);
KeyValues read_key_values(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Splits one delimited line, honouring double-quoted fields ("" escapes a quote).
std::vector<std::string> split_delimited(std::string_view line, char delim);

std::string_view trim(std::string_view s);

// Shortest decimal text that parses back to the same double.
std::string format_exact(double v);
// Fixed-point with the given number of decimals.
std::string format_fixed(double v, int decimals);

bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

// 64-bit FNV-1a over the file bytes, rendered as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace ikt::io

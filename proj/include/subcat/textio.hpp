#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subcat {

std::string trim(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view s);

// Line iteration that drops "#" comments and blank lines; keeps 1-based
// source line numbers for error messages.
struct ConfigLine {
  int number;
  std::string text;
};
std::vector<ConfigLine> config_lines(std::string_view text);

std::string read_file(const std::string& path);
bool file_exists(const std::string& path);

// Write-temp-then-rename so readers never observe partial artifacts.
void write_file_atomic(const std::string& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Fixed-precision decimal used by the lexicon and report formats.
std::string fixed9(double v);
// Round-trip-exact double formatting for intermediate artifacts.
std::string g17(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long> parse_long(std::string_view s);

}  // namespace subcat

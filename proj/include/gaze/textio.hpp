#pragma once

// Line-oriented text helpers shared by the file formats.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gaze::textio {

// Shortest representation that parses back to the identical double.
std::string format_real(double value);
// Fixed-point with the given number of decimals, for reports.
std::string format_fixed(double value, int decimals);

bool parse_real(std::string_view token, double& out) noexcept;
bool parse_int(std::string_view token, std::int64_t& out) noexcept;

std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string_view> split_lines(std::string_view text);

// Throw IoError on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

bool is_token(std::string_view s) noexcept;  // non-empty, no whitespace

}  // namespace gaze::textio

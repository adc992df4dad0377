#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace phoneboost::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Parses a full token as a double; throws FormatError naming `what` on failure.
double parse_double(std::string_view token, std::string_view what);
long long parse_int(std::string_view token, std::string_view what);

/// Splits on runs of ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view line);
std::vector<std::string> split(std::string_view line, char separator);
std::string_view trim(std::string_view s);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary file in the same directory, then renames.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace phoneboost::text

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mqr::io {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

/// Splits a file body into lines, checks the first line equals `header`
/// and returns the remaining non-empty lines. Throws FormatError.
std::vector<std::string> body_lines(std::string_view contents, std::string_view header);

}  // namespace mqr::io

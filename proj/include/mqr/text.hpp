#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mqr::text {

std::string trim(std::string_view s);

// ASCII lower-casing; bytes outside A-Z pass through untouched so UTF-8
// payloads survive.
std::string to_lower(std::string_view s);

// Trims and collapses internal whitespace runs to a single space.
std::string collapse_whitespace(std::string_view s);

// to_lower + collapse_whitespace.
std::string normalize(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);

// Splits on runs of whitespace, dropping empty pieces.
std::vector<std::string> tokenize(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace mqr::text

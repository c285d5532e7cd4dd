#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mqr/session.hpp"

namespace mqr {

inline constexpr std::string_view kSessionsHeader = "format=sessions/v1";

// Both the raw turn log and the session file carry the same header; the
// log holds one JSON turn record per line, the session file one JSON
// session record (turns inlined) per line.

std::string serialize_log(const std::vector<LogRecord>& records);
std::vector<LogRecord> parse_log(std::string_view contents);

std::string serialize_sessions(const std::vector<Session>& sessions);
std::vector<Session> parse_sessions(std::string_view contents);

std::vector<LogRecord> read_log_file(const std::string& path);
std::vector<Session> read_sessions_file(const std::string& path);
void write_sessions_file(const std::string& path, const std::vector<Session>& sessions);

}  // namespace mqr

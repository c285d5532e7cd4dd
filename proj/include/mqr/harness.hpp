#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqr/session.hpp"
#include "mqr/stats.hpp"

namespace mqr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parameters of one CLI invocation. Unused fields keep their defaults.
struct RunConfig {
    std::string command;

    std::string input;
    std::string output;
    std::string graph;
    std::string templates;
    std::string evalset;
    std::string hypothesis;
    std::string lexicon;
    std::string articles;
    std::string csv;
    std::string curve;
    std::string snapshots;
    std::string evalset_out;

    std::string mode = "discounting";
    std::string scorer = "heuristic";
    std::string scenario = "type2";
    std::string language = "en";

    std::int64_t max_gap = kDefaultMaxGapSeconds;
    double iq_threshold = kDefaultIqThreshold;
    double eta = kDefaultEta;
    double confidence = kDefaultConfidence;
    double eps = 1e-10;
    std::uint64_t min_support = 2;
    std::size_t min_state_support = 2;
    std::size_t template_support = 3;
    std::size_t k = 5;

    std::optional<std::uint64_t> seed;
    std::size_t days = 60;
    std::size_t sessions = 200;
    std::size_t intents = 60;
};

/// Flat "key = value" lines; blank lines and '#' comments are skipped.
/// Throws ConfigError on a line without '=' or an empty key.
std::vector<std::pair<std::string, std::string>> parse_config(std::string_view contents);

/// Format identifiers of every file the tool reads or writes.
std::vector<std::string_view> supported_formats();

/// Runs one command. `args` excludes the program name. Primary output that
/// has no --out path goes to `out`; diagnostics and usage go to `err`.
/// Returns kExitOk, kExitRuntime on data or runtime errors and kExitUsage on
/// bad arguments.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mqr

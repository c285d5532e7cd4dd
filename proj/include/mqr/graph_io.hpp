#pragma once

#include <string>
#include <string_view>

#include "mqr/markov_graph.hpp"

namespace mqr {

inline constexpr std::string_view kGraphHeader = "format=graph/v1";

/// Text snapshot, tab-separated:
///
///   format=graph/v1
///   mode <mode>
///   states <n>            then n lines: <id> <canonical hypothesis>
///   counts <m>            then m lines: <src> <dst> <count>
///   meta <k>              then k lines: <src> <dst> Ja Jb Jg Je alpha beta gamma tier
///
/// Ids 0 and 1 are the success and failure absorbing states. Doubles use the
/// shortest round-trip representation, so parse(serialize(g)) == g exactly.
std::string serialize_graph(const GraphData& data);
GraphData parse_graph(std::string_view contents);

void write_graph_file(const std::string& path, const GraphData& data);
GraphData read_graph_file(const std::string& path);

}  // namespace mqr

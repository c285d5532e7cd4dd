#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mqr/template.hpp"

namespace mqr {

inline constexpr std::string_view kTemplatesHeader = "format=templates/v1";
inline constexpr std::string_view kDagsHeader = "format=dags/v1";

// One JSON record per line:
//   templates/v1  {"intent", "language", "tokens": [{"literal": s, "article": b} | {"placeholder": type}], "z": [...]}
//   dags/v1       {"intent", "language", "nodes": [{token fields, "occurrence"}], "edges": [[a, b]],
//                  "entries": [...], "exits": [...], "sources": [...]}
std::string serialize_templates(const std::vector<Template>& templates);
std::vector<Template> parse_templates(std::string_view contents);
std::vector<Template> read_templates_file(const std::string& path);
void write_templates_file(const std::string& path, const std::vector<Template>& templates);

std::string serialize_dags(const DagStore& store);
DagStore parse_dags(std::string_view contents);
void write_dags_file(const std::string& path, const DagStore& store);
DagStore read_dags_file(const std::string& path);

}  // namespace mqr

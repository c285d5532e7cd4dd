#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mqr/eval.hpp"

namespace mqr {

inline constexpr std::string_view kEvalSetHeader = "format=evalset/v1";

// One JSON record per line: {"request": h, "positives": [h...], "negatives": [h...]}
std::string serialize_evalset(const std::vector<EvalRecord>& records);
std::vector<EvalRecord> parse_evalset(std::string_view contents);
std::vector<EvalRecord> read_evalset_file(const std::string& path);
void write_evalset_file(const std::string& path, const std::vector<EvalRecord>& records);

/// "threshold,precision,recall" rows.
std::string curve_csv(const PrCurve& curve);
/// Single-line JSON summary of an evaluation.
std::string summary_json(const EvalSummary& summary);

}  // namespace mqr

#pragma once

#include <cstddef>
#include <string_view>

namespace mqr {

/// Edit distance with insert/delete cost 1 and substitution cost `sub_cost`.
std::size_t levenshtein_distance(std::string_view a, std::string_view b, std::size_t sub_cost = 1);

/// Similarity in [0,1]: (|a| + |b| - d) / (|a| + |b|) where d is the edit
/// distance with substitution cost 2. Two empty strings have ratio 1.
double levenshtein_ratio(std::string_view a, std::string_view b);

}  // namespace mqr

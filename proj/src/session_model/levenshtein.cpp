#include "mqr/levenshtein.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace mqr {

std::size_t levenshtein_distance(std::string_view a, std::string_view b, std::size_t sub_cost) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : sub_cost);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
    const std::size_t total = a.size() + b.size();
    if (total == 0) return 1.0;
    const std::size_t d = levenshtein_distance(a, b, 2);
    return static_cast<double>(total - d) / static_cast<double>(total);
}

}  // namespace mqr

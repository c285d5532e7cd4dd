#include "mqr/state_space.hpp"

#include <algorithm>
#include <numeric>

#include "mqr/error.hpp"

namespace mqr {

StateSpace::StateSpace(std::vector<Hypothesis> hypotheses) {
    std::vector<std::string> keys;
    keys.reserve(hypotheses.size());
    for (const auto& h : hypotheses) keys.push_back(h.format());
    std::vector<std::size_t> order(hypotheses.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

    hypotheses_.reserve(order.size());
    canonical_.reserve(order.size());
    for (std::size_t pos : order) {
        const auto id = static_cast<StateId>(hypotheses_.size() + kFirstTransient);
        if (!index_.emplace(keys[pos], id).second)
            throw ArgumentError("duplicate hypothesis in state space: " + keys[pos]);
        hypotheses_.push_back(std::move(hypotheses[pos]));
        canonical_.push_back(std::move(keys[pos]));
    }
}

std::optional<StateId> StateSpace::find(const Hypothesis& h) const { return find(h.format()); }

std::optional<StateId> StateSpace::find(const std::string& canonical) const {
    auto it = index_.find(canonical);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const Hypothesis& StateSpace::hypothesis(StateId id) const {
    if (is_absorbing(id) || id >= size()) throw LookupError("no transient state " + std::to_string(id));
    return hypotheses_[id - kFirstTransient];
}

const std::string& StateSpace::canonical(StateId id) const {
    if (is_absorbing(id) || id >= size()) throw LookupError("no transient state " + std::to_string(id));
    return canonical_[id - kFirstTransient];
}

std::string StateSpace::label(StateId id) const {
    if (id == kSuccessState) return "+";
    if (id == kFailureState) return "-";
    return canonical(id);
}

}  // namespace mqr

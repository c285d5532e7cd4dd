#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mqr/hypothesis.hpp"

namespace mqr {

using StateId = std::uint32_t;

/// Reserved absorbing indices; transient states start at kFirstTransient.
inline constexpr StateId kSuccessState = 0;
inline constexpr StateId kFailureState = 1;
inline constexpr StateId kFirstTransient = 2;

inline constexpr bool is_absorbing(StateId id) { return id < kFirstTransient; }

/// Bijective interning of hypotheses to dense indices. Transient indices are
/// assigned in canonical-string order, so the same set of hypotheses always
/// yields the same numbering regardless of observation order.
class StateSpace {
public:
    StateSpace() = default;
    /// Throws ArgumentError on duplicates.
    explicit StateSpace(std::vector<Hypothesis> hypotheses);

    std::size_t size() const noexcept { return hypotheses_.size() + kFirstTransient; }
    std::size_t transient_count() const noexcept { return hypotheses_.size(); }

    std::optional<StateId> find(const Hypothesis& h) const;
    std::optional<StateId> find(const std::string& canonical) const;

    /// Throws LookupError for absorbing or out-of-range ids.
    const Hypothesis& hypothesis(StateId id) const;
    const std::string& canonical(StateId id) const;

    /// "+" / "-" for absorbing states, canonical text otherwise.
    std::string label(StateId id) const;

    friend bool operator==(const StateSpace& a, const StateSpace& b) {
        return a.canonical_ == b.canonical_;
    }

private:
    std::vector<Hypothesis> hypotheses_;
    std::vector<std::string> canonical_;
    std::unordered_map<std::string, StateId> index_;
};

}  // namespace mqr

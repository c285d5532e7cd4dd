#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>

namespace mqr {

/// NLU interpretation of an utterance: the identity of a transient state.
///
/// Canonical text form is `Domain|Intent|Slot:value|...` with slots in
/// slot-name order. Slot values are lower-cased and whitespace-collapsed on
/// construction so equal interpretations intern to the same state.
class Hypothesis {
public:
    using SlotMap = std::map<std::string, std::string>;

    Hypothesis() = default;

    /// Throws ArgumentError if domain/intent are empty or any field holds a
    /// reserved delimiter.
    Hypothesis(std::string domain, std::string intent, SlotMap slots = {});

    /// Parses the pipe-delimited form. Throws ParseError naming the offending
    /// segment.
    static Hypothesis parse(std::string_view text);

    std::string format() const;

    const std::string& domain() const noexcept { return domain_; }
    const std::string& intent() const noexcept { return intent_; }
    const SlotMap& slots() const noexcept { return slots_; }

    bool empty() const noexcept { return domain_.empty(); }

    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
    friend auto operator<=>(const Hypothesis&, const Hypothesis&) = default;

private:
    std::string domain_;
    std::string intent_;
    SlotMap slots_;
};

}  // namespace mqr

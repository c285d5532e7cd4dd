#include "mqr/hypothesis.hpp"

#include "mqr/error.hpp"
#include "mqr/text.hpp"

namespace mqr {

namespace {

bool has_reserved(std::string_view s) {
    for (char c : s) {
        if (c == '|' || c == '\n' || c == '\r' || c == '\t') return true;
    }
    return false;
}

}  // namespace

Hypothesis::Hypothesis(std::string domain, std::string intent, SlotMap slots)
    : domain_(text::trim(domain)), intent_(text::trim(intent)) {
    if (domain_.empty()) throw ArgumentError("hypothesis domain is empty");
    if (intent_.empty()) throw ArgumentError("hypothesis intent is empty");
    if (has_reserved(domain_) || domain_.find(':') != std::string::npos)
        throw ArgumentError("hypothesis domain holds a reserved character: " + domain_);
    if (has_reserved(intent_) || intent_.find(':') != std::string::npos)
        throw ArgumentError("hypothesis intent holds a reserved character: " + intent_);
    for (auto& [name, value] : slots) {
        std::string key = text::trim(name);
        if (key.empty()) throw ArgumentError("hypothesis slot name is empty");
        if (has_reserved(key) || key.find(':') != std::string::npos)
            throw ArgumentError("slot name holds a reserved character: " + key);
        std::string v = text::normalize(value);
        if (has_reserved(v)) throw ArgumentError("slot value holds a reserved character: " + v);
        if (!slots_.emplace(std::move(key), std::move(v)).second)
            throw ArgumentError("duplicate slot name after trimming: " + name);
    }
}

Hypothesis Hypothesis::parse(std::string_view input) {
    if (text::trim(input).empty()) throw ParseError("empty hypothesis text");
    auto segments = text::split(input, '|');
    if (segments.size() < 2)
        throw ParseError("hypothesis needs Domain|Intent, got segment '" + std::string(input) + "'");
    std::string domain = text::trim(segments[0]);
    std::string intent = text::trim(segments[1]);
    if (domain.empty()) throw ParseError("empty domain segment in '" + std::string(input) + "'");
    if (intent.empty()) throw ParseError("empty intent segment in '" + std::string(input) + "'");
    if (domain.find(':') != std::string::npos)
        throw ParseError("domain segment '" + segments[0] + "' contains ':'");
    if (intent.find(':') != std::string::npos)
        throw ParseError("intent segment '" + segments[1] + "' contains ':'");

    SlotMap slots;
    for (size_t i = 2; i < segments.size(); ++i) {
        const std::string& seg = segments[i];
        size_t colon = seg.find(':');
        if (colon == std::string::npos)
            throw ParseError("slot segment '" + seg + "' has no ':'");
        std::string name = text::trim(std::string_view(seg).substr(0, colon));
        if (name.empty()) throw ParseError("slot segment '" + seg + "' has an empty name");
        std::string value = text::normalize(std::string_view(seg).substr(colon + 1));
        if (!slots.emplace(std::move(name), std::move(value)).second)
            throw ParseError("duplicate slot in segment '" + seg + "'");
    }
    return Hypothesis(std::move(domain), std::move(intent), std::move(slots));
}

std::string Hypothesis::format() const {
    std::string out = domain_;
    out.push_back('|');
    out += intent_;
    for (const auto& [name, value] : slots_) {
        out.push_back('|');
        out += name;
        out.push_back(':');
        out += value;
    }
    return out;
}

}  // namespace mqr

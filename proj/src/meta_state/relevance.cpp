#include "mqr/relevance.hpp"

#include <cmath>

#include "mqr/error.hpp"
#include "mqr/levenshtein.hpp"
#include "mqr/text.hpp"

namespace mqr {

namespace {

char soundex_class(char c) {
    switch (c) {
        case 'b': case 'f': case 'p': case 'v': return '1';
        case 'c': case 'g': case 'j': case 'k': case 'q': case 's': case 'x': case 'z': return '2';
        case 'd': case 't': return '3';
        case 'l': return '4';
        case 'm': case 'n': return '5';
        case 'r': return '6';
        default: return 0;
    }
}

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

std::string encode_word(std::string_view word) {
    std::string out;
    char last = 0;
    for (char c : word) {
        if (c >= '0' && c <= '9') {
            out.push_back(c);
            last = 0;
            continue;
        }
        if (c < 'a' || c > 'z') continue;
        if (out.empty()) {
            out.push_back(static_cast<char>(c - 'a' + 'A'));
            last = soundex_class(c);
            continue;
        }
        if (is_vowel(c)) {
            last = 0;
            continue;
        }
        const char code = soundex_class(c);
        if (code == 0) continue;  // h, w
        if (code != last) out.push_back(code);
        last = code;
    }
    return out;
}

}  // namespace

std::string consonant_skeleton(std::string_view text) {
    std::string out;
    for (const auto& word : text::tokenize(text::to_lower(text))) {
        auto code = encode_word(word);
        if (code.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += code;
    }
    return out;
}

double relevance_rho(std::string_view rewrite_text, std::string_view followup_text, const PhoneticKey& key) {
    const auto a = text::normalize(rewrite_text);
    const auto b = text::normalize(followup_text);
    const double grapheme = levenshtein_ratio(a, b);
    const double phoneme = levenshtein_ratio(key(a), key(b));
    return 0.5 * (grapheme + phoneme);
}

TripletWeights mst_weights(double alpha, double rho) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in [0, 1]");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("rho must lie in [0, 1]");
    // std::pow(0, 0) is 1 already; spelled out because the limit matters.
    const double beta = rho == 0.0 ? 1.0 : std::pow(alpha, rho);
    return {beta, 1.0 - alpha * beta};
}

}  // namespace mqr

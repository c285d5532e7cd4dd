#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace mqr {

/// Maps an utterance to a phonetic key; swap per language.
using PhoneticKey = std::function<std::string(std::string_view)>;

/// Soundex-style consonant skeleton applied word by word. Each word keeps its
/// first letter (upper-cased) followed by digit classes of the remaining
/// consonants:
///
///   b f p v -> 1   c g j k q s x z -> 2   d t -> 3   l -> 4   m n -> 5   r -> 6
///
/// Vowels separate codes, h and w do not, adjacent equal codes collapse, and
/// there is no padding or truncation. Digits pass through; other bytes are
/// dropped. Words are joined with single spaces.
std::string consonant_skeleton(std::string_view text);

/// Mean of the grapheme and the phoneme Levenshtein ratios of the normalized
/// strings.
double relevance_rho(std::string_view rewrite_text, std::string_view followup_text,
                     const PhoneticKey& key = consonant_skeleton);

struct TripletWeights {
    double beta = 0.0;
    double gamma = 1.0;
};

/// beta = alpha^rho with 0^0 = 1, gamma = 1 - alpha * beta.
TripletWeights mst_weights(double alpha, double rho);

}  // namespace mqr

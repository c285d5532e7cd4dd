#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mqr/hypothesis.hpp"

namespace mqr {

enum class TurnKind { User, Rewrite, Synthetic };
enum class Outcome { Success, Failure };

std::string_view to_string(TurnKind kind);
std::string_view to_string(Outcome outcome);
TurnKind parse_turn_kind(std::string_view s);
Outcome parse_outcome(std::string_view s);

struct Turn {
    std::string utterance;
    Hypothesis hypothesis;
    std::int64_t timestamp = 0;  // seconds since epoch
    TurnKind kind = TurnKind::User;
    std::optional<double> iq;
    // Set when the turn answers a system clarification prompt; marks the
    // non-initiating turns of a multi-turn dialog.
    bool solicited = false;

    friend bool operator==(const Turn&, const Turn&) = default;
};

struct Session {
    std::string customer_id;
    std::vector<Turn> turns;
    std::optional<Outcome> outcome;

    friend bool operator==(const Session&, const Session&) = default;
};

/// One line of the raw interaction log.
struct LogRecord {
    std::string customer_id;
    Turn turn;
};

inline constexpr std::int64_t kDefaultMaxGapSeconds = 45;
inline constexpr double kDefaultIqThreshold = 0.5;

/// Throws DataError when a session breaks the turn invariants: empty turns,
/// time going backwards, iq outside [0,1], or a Rewrite turn that does not
/// directly follow a User/Synthetic turn.
void validate_session(const Session& session);

/// Splits a customer-then-time ordered stream into sessions. A new session
/// starts when the customer changes or the gap to the previous turn exceeds
/// `max_gap`. Throws OrderingError on unsorted input.
std::vector<Session> segment_sessions(const std::vector<LogRecord>& events,
                                      std::int64_t max_gap = kDefaultMaxGapSeconds);

/// Per-language list of abrupt-ending utterances ("stop", "no", ...).
class InterjectionLexicon {
public:
    InterjectionLexicon() = default;
    explicit InterjectionLexicon(std::set<std::string> phrases);

    static InterjectionLexicon english();
    /// One phrase per line; blank lines and '#' comments ignored.
    static InterjectionLexicon load(const std::string& path);

    bool contains(std::string_view utterance) const;
    /// The phrase used when an interjection turn must be synthesized.
    const std::string& canonical() const;
    const std::set<std::string>& phrases() const noexcept { return phrases_; }

private:
    std::set<std::string> phrases_;
    std::string canonical_ = "stop";
};

/// Interaction-quality scorer. Implementations return a score in [0,1] for
/// turn `index` of `session`, or throw ScoringError.
class IqScorer {
public:
    virtual ~IqScorer() = default;
    virtual double score(const Session& session, size_t index) const = 0;
};

/// Reads the annotated `iq` field; throws ScoringError when it is missing.
class AnnotatedScorer final : public IqScorer {
public:
    double score(const Session& session, size_t index) const override;
};

/// Uses the annotated score when present. Otherwise a turn is defective (0)
/// if the next turn is an interjection or a near-duplicate rephrase
/// (grapheme Levenshtein ratio >= `rephrase_ratio`), and successful (1)
/// otherwise.
class HeuristicScorer final : public IqScorer {
public:
    explicit HeuristicScorer(InterjectionLexicon lexicon = InterjectionLexicon::english(),
                             double rephrase_ratio = 0.7);
    double score(const Session& session, size_t index) const override;

private:
    InterjectionLexicon lexicon_;
    double rephrase_ratio_;
};

/// Success iff the terminal turn scores >= threshold and is not an
/// interjection.
Session assign_outcome(Session session, const IqScorer& scorer, double threshold,
                       const InterjectionLexicon& lexicon = InterjectionLexicon::english());

}  // namespace mqr

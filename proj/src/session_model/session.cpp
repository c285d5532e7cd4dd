#include "mqr/session.hpp"

#include <fstream>

#include "mqr/error.hpp"
#include "mqr/text.hpp"
#include "mqr/levenshtein.hpp"

namespace mqr {

std::string_view to_string(TurnKind kind) {
    switch (kind) {
        case TurnKind::User:
            return "user";
        case TurnKind::Rewrite:
            return "rewrite";
        case TurnKind::Synthetic:
            return "synthetic";
    }
    return "user";
}

std::string_view to_string(Outcome outcome) {
    return outcome == Outcome::Success ? "success" : "failure";
}

TurnKind parse_turn_kind(std::string_view s) {
    if (s == "user") return TurnKind::User;
    if (s == "rewrite") return TurnKind::Rewrite;
    if (s == "synthetic") return TurnKind::Synthetic;
    throw ParseError("unknown turn kind '" + std::string(s) + "'");
}

Outcome parse_outcome(std::string_view s) {
    if (s == "success") return Outcome::Success;
    if (s == "failure") return Outcome::Failure;
    throw ParseError("unknown outcome '" + std::string(s) + "'");
}

void validate_session(const Session& session) {
    if (session.turns.empty()) throw DataError("session for '" + session.customer_id + "' has no turns");
    for (size_t i = 0; i < session.turns.size(); ++i) {
        const Turn& t = session.turns[i];
        if (t.iq && !(*t.iq >= 0.0 && *t.iq <= 1.0))
            throw DataError("turn iq outside [0,1] in session for '" + session.customer_id + "'");
        if (i > 0 && t.timestamp < session.turns[i - 1].timestamp)
            throw DataError("turns out of time order in session for '" + session.customer_id + "'");
        if (t.kind == TurnKind::Rewrite &&
            (i == 0 || session.turns[i - 1].kind == TurnKind::Rewrite))
            throw DataError("rewrite turn without a preceding request in session for '" +
                            session.customer_id + "'");
    }
}

std::vector<Session> segment_sessions(const std::vector<LogRecord>& events, std::int64_t max_gap) {
    if (max_gap < 0) throw ArgumentError("max_gap must be non-negative");
    std::vector<Session> sessions;
    for (size_t i = 0; i < events.size(); ++i) {
        const LogRecord& ev = events[i];
        bool start_new = sessions.empty();
        if (i > 0) {
            const LogRecord& prev = events[i - 1];
            if (ev.customer_id < prev.customer_id ||
                (ev.customer_id == prev.customer_id && ev.turn.timestamp < prev.turn.timestamp)) {
                throw OrderingError("log records not sorted by (customer, timestamp) at record " +
                                    std::to_string(i));
            }
            start_new = ev.customer_id != prev.customer_id ||
                        ev.turn.timestamp - prev.turn.timestamp > max_gap;
        }
        if (start_new) {
            sessions.push_back(Session{ev.customer_id, {}, std::nullopt});
        }
        sessions.back().turns.push_back(ev.turn);
    }
    return sessions;
}

InterjectionLexicon::InterjectionLexicon(std::set<std::string> phrases) {
    for (const auto& p : phrases) {
        std::string n = text::normalize(p);
        if (!n.empty()) phrases_.insert(std::move(n));
    }
    if (!phrases_.empty() && !phrases_.count(canonical_)) canonical_ = *phrases_.begin();
}

InterjectionLexicon InterjectionLexicon::english() {
    return InterjectionLexicon({"stop", "no", "cancel", "never mind", "nevermind", "shut up", "quiet"});
}

InterjectionLexicon InterjectionLexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open interjection lexicon '" + path + "'");
    std::set<std::string> phrases;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        phrases.insert(t);
    }
    if (phrases.empty()) throw ConfigError("interjection lexicon '" + path + "' is empty");
    return InterjectionLexicon(std::move(phrases));
}

bool InterjectionLexicon::contains(std::string_view utterance) const {
    std::string n = text::normalize(utterance);
    while (!n.empty() && (n.back() == '.' || n.back() == '!' || n.back() == ',')) n.pop_back();
    return phrases_.count(n) > 0;
}

const std::string& InterjectionLexicon::canonical() const { return canonical_; }

double AnnotatedScorer::score(const Session& session, size_t index) const {
    if (index >= session.turns.size()) throw ScoringError("turn index out of range");
    const auto& iq = session.turns[index].iq;
    if (!iq) throw ScoringError("turn " + std::to_string(index) + " of session for '" +
                                session.customer_id + "' has no iq annotation");
    return *iq;
}

HeuristicScorer::HeuristicScorer(InterjectionLexicon lexicon, double rephrase_ratio)
    : lexicon_(std::move(lexicon)), rephrase_ratio_(rephrase_ratio) {}

double HeuristicScorer::score(const Session& session, size_t index) const {
    if (index >= session.turns.size()) throw ScoringError("turn index out of range");
    const Turn& turn = session.turns[index];
    if (turn.iq) return *turn.iq;
    if (lexicon_.contains(turn.utterance)) return 0.0;
    if (index + 1 >= session.turns.size()) return 1.0;
    const Turn& next = session.turns[index + 1];
    if (lexicon_.contains(next.utterance)) return 0.0;
    if (next.kind == TurnKind::User &&
        levenshtein_ratio(text::normalize(turn.utterance), text::normalize(next.utterance)) >=
            rephrase_ratio_)
        return 0.0;
    return 1.0;
}

Session assign_outcome(Session session, const IqScorer& scorer, double threshold,
                       const InterjectionLexicon& lexicon) {
    if (session.turns.empty()) throw DataError("cannot assign outcome to an empty session");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ArgumentError("iq threshold outside [0,1]");
    const size_t last = session.turns.size() - 1;
    const double iq = scorer.score(session, last);
    const bool interjected = lexicon.contains(session.turns[last].utterance);
    session.outcome = (!interjected && iq >= threshold) ? Outcome::Success : Outcome::Failure;
    return session;
}

}  // namespace mqr

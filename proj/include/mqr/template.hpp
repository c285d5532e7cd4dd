#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqr/session.hpp"

namespace mqr {

struct Token {
    enum class Kind { Literal, Placeholder };

    Kind kind = Kind::Literal;
    std::string text;  // surface form, or entity type for placeholders
    bool article = false;

    static Token literal(std::string s, bool article = false) { return {Kind::Literal, std::move(s), article}; }
    static Token placeholder(std::string type) { return {Kind::Placeholder, std::move(type), false}; }

    bool is_placeholder() const noexcept { return kind == Kind::Placeholder; }
    /// "<Type>" for placeholders, the surface otherwise.
    std::string display() const;

    friend auto operator<=>(const Token&, const Token&) = default;
    friend bool operator==(const Token&, const Token&) = default;
};

struct Template {
    std::vector<Token> tokens;
    std::string intent;
    std::string language = "en";
    std::vector<double> confidence_samples;

    std::string display() const;
    std::vector<std::string> placeholder_types() const;
    double mean_confidence() const;

    friend bool operator==(const Template&, const Template&) = default;
};

/// Byte range [begin, end) of the utterance holding one entity.
struct EntitySpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string type;
};

/// Replaces every whitespace token touched by an entity span with one
/// placeholder. `pos_tags` is either empty or one tag per token; tokens
/// tagged DT, DET or ART become article literals. Throws SpanConflictError on
/// overlapping, empty or out-of-range spans and ArgumentError on a tag count
/// mismatch.
Template extract_template(std::string_view utterance, std::vector<EntitySpan> spans,
                          const std::vector<std::string>& pos_tags = {}, std::string intent = {},
                          std::string language = "en");

inline constexpr std::size_t kDefaultTemplateSupport = 3;

/// Highest mean confidence, then more samples, then smaller display form.
/// Candidates with fewer than `min_support` samples are considered only when
/// none reaches it. Throws ArgumentError on an empty set or a candidate
/// without samples.
const Template& select_optimal_template(const std::vector<Template>& candidates,
                                        std::size_t min_support = kDefaultTemplateSupport);

/// Acyclic token graph. Nodes are unified on (token, occurrence of that
/// token within its template).
struct TemplateDag {
    struct Node {
        Token token;
        std::size_t occurrence = 0;
        friend auto operator<=>(const Node&, const Node&) = default;
        friend bool operator==(const Node&, const Node&) = default;
    };

    std::string intent;
    std::string language;
    std::vector<Node> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::size_t> entries;
    std::vector<std::size_t> exits;
    /// Token forms of the templates whose chains make up this DAG.
    std::vector<std::string> sources;

    std::vector<std::size_t> successors(std::size_t node) const;
    bool is_acyclic() const;
    /// Entry-to-exit node sequences, at most `limit` of them, in DFS order
    /// with successors visited by node order.
    std::vector<std::vector<std::size_t>> paths(std::size_t limit = 10000) const;
    std::string render(const std::vector<std::size_t>& path) const;

    friend bool operator==(const TemplateDag&, const TemplateDag&) = default;
};

/// Unifies the template chains, drops DFS back edges and splits the result so
/// that every template is a full path of some DAG. Templates fully preserved
/// by the acyclic graph form one DAG; the rest are factorized recursively.
std::vector<TemplateDag> build_dags(const std::vector<Template>& templates);

/// Per-language article rewrites applied to article literals, e.g. English
/// "a" -> "an" before a vowel, French "le" -> "l'" joined before a vowel.
class ArticleRules {
public:
    struct Rule {
        std::string article;
        std::string replacement;
        bool before_vowel = true;
        bool join = false;
    };

    ArticleRules() = default;
    explicit ArticleRules(std::vector<Rule> rules) : rules_(std::move(rules)) {}

    /// Built-in tables for "en" and "fr"; other languages get no rules.
    static ArticleRules builtin(std::string_view language);
    /// Tab-separated lines: article, replacement, vowel|consonant, space|join.
    static ArticleRules load(const std::string& path);

    /// Returns the rewritten article and whether it fuses with the next word.
    std::pair<std::string, bool> apply(const std::string& article, std::string_view next_word) const;
    const std::vector<Rule>& rules() const noexcept { return rules_; }

private:
    std::vector<Rule> rules_;
};

/// Picks the entry-to-exit path with the largest number of distinct entity
/// types, among paths whose placeholders can all be filled from `entities`.
/// Ties prefer a path that equals an original template, then fewer tokens,
/// then the smaller rendering. Returns nullopt when no path uses any entity.
std::optional<std::string> generate_synthetic(const std::map<std::string, std::string>& entities,
                                              const std::vector<TemplateDag>& dags,
                                              const ArticleRules& rules = ArticleRules::builtin("en"));

/// DAGs keyed by (intent, language).
using DagStore = std::map<std::pair<std::string, std::string>, std::vector<TemplateDag>>;

std::vector<Template> select_per_entity_set(const std::vector<Template>& templates,
                                            std::size_t min_support = kDefaultTemplateSupport);
/// Groups by (intent, language), keeps the optimal template per entity-type
/// set and builds the DAGs of each group.
DagStore build_dag_store(const std::vector<Template>& templates, std::size_t min_support = kDefaultTemplateSupport);

struct AbridgeOptions {
    std::string language = "en";
    InterjectionLexicon lexicon = InterjectionLexicon::english();
    ArticleRules articles = ArticleRules::builtin("en");
};

/// Compresses a clarification dialog. Successful dialogs become the
/// initiating turn plus one Synthetic turn carrying the resolved entities,
/// or the initiating turn alone when no DAG path fits. Failed or abruptly
/// ended dialogs become the initiating turn plus an interjection turn with a
/// Failure outcome. Single-turn input is returned unchanged.
Session abridge_dialog(const Session& dialog, const DagStore& store, const AbridgeOptions& options = {});

/// Applies abridge_dialog to every run of an initiating turn followed by
/// solicited turns. Dialogs before the last turn count as failed only when
/// they end in an interjection.
Session abridge_session(const Session& session, const DagStore& store, const AbridgeOptions& options = {});

}  // namespace mqr

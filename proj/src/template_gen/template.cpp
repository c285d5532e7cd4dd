#include "mqr/template.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <tuple>

#include "mqr/error.hpp"
#include "mqr/io.hpp"
#include "mqr/text.hpp"

namespace mqr {

std::string Token::display() const { return is_placeholder() ? "<" + text + ">" : text; }

std::string Template::display() const {
    std::vector<std::string> parts;
    parts.reserve(tokens.size());
    for (const auto& t : tokens) parts.push_back(t.display());
    return text::join(parts, " ");
}

std::vector<std::string> Template::placeholder_types() const {
    std::vector<std::string> out;
    for (const auto& t : tokens)
        if (t.is_placeholder()) out.push_back(t.text);
    return out;
}

double Template::mean_confidence() const {
    if (confidence_samples.empty()) return 0.0;
    return std::accumulate(confidence_samples.begin(), confidence_samples.end(), 0.0) /
           static_cast<double>(confidence_samples.size());
}

namespace {

bool is_article_tag(const std::string& tag) { return tag == "DT" || tag == "DET" || tag == "ART"; }

}  // namespace

Template extract_template(std::string_view utterance, std::vector<EntitySpan> spans,
                          const std::vector<std::string>& pos_tags, std::string intent, std::string language) {
    std::sort(spans.begin(), spans.end(), [](const EntitySpan& a, const EntitySpan& b) { return a.begin < b.begin; });
    for (std::size_t k = 0; k < spans.size(); ++k) {
        const auto& s = spans[k];
        if (s.begin >= s.end || s.end > utterance.size())
            throw SpanConflictError("entity span [" + std::to_string(s.begin) + ", " + std::to_string(s.end) +
                                    ") is empty or outside the utterance");
        if (s.type.empty()) throw SpanConflictError("entity span without a type");
        if (k > 0 && s.begin < spans[k - 1].end)
            throw SpanConflictError("entity spans " + spans[k - 1].type + " and " + s.type + " overlap");
    }

    std::vector<std::pair<std::size_t, std::size_t>> bounds;
    for (std::size_t i = 0; i < utterance.size();) {
        while (i < utterance.size() && std::isspace(static_cast<unsigned char>(utterance[i]))) ++i;
        if (i == utterance.size()) break;
        std::size_t j = i;
        while (j < utterance.size() && !std::isspace(static_cast<unsigned char>(utterance[j]))) ++j;
        bounds.emplace_back(i, j);
        i = j;
    }
    if (!pos_tags.empty() && pos_tags.size() != bounds.size())
        throw ArgumentError("expected one POS tag per token");

    Template out;
    out.intent = std::move(intent);
    out.language = std::move(language);
    std::optional<std::size_t> last_span;
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const auto [tb, te] = bounds[k];
        std::optional<std::size_t> hit;
        for (std::size_t s = 0; s < spans.size(); ++s) {
            if (spans[s].begin < te && tb < spans[s].end) {
                if (hit) throw SpanConflictError("token touches two entity spans");
                hit = s;
            }
        }
        if (hit) {
            if (hit != last_span) out.tokens.push_back(Token::placeholder(spans[*hit].type));
            last_span = hit;
            continue;
        }
        last_span.reset();
        const bool article = !pos_tags.empty() && is_article_tag(pos_tags[k]);
        out.tokens.push_back(Token::literal(text::to_lower(utterance.substr(tb, te - tb)), article));
    }
    if (out.tokens.empty()) throw ArgumentError("utterance has no tokens");
    return out;
}

const Template& select_optimal_template(const std::vector<Template>& candidates, std::size_t min_support) {
    if (candidates.empty()) throw ArgumentError("no template candidates");
    for (const auto& c : candidates)
        if (c.confidence_samples.empty()) throw ArgumentError("template '" + c.display() + "' has no samples");

    const bool any_supported = std::any_of(candidates.begin(), candidates.end(), [&](const Template& t) {
        return t.confidence_samples.size() >= min_support;
    });
    const Template* best = nullptr;
    for (const auto& c : candidates) {
        if (any_supported && c.confidence_samples.size() < min_support) continue;
        if (!best) {
            best = &c;
            continue;
        }
        const double mc = c.mean_confidence(), mb = best->mean_confidence();
        if (mc != mb) {
            if (mc > mb) best = &c;
        } else if (c.confidence_samples.size() != best->confidence_samples.size()) {
            if (c.confidence_samples.size() > best->confidence_samples.size()) best = &c;
        } else if (c.display() < best->display()) {
            best = &c;
        }
    }
    return *best;
}

std::vector<std::size_t> TemplateDag::successors(std::size_t node) const {
    std::vector<std::size_t> out;
    for (const auto& [a, b] : edges)
        if (a == node) out.push_back(b);
    std::sort(out.begin(), out.end());
    return out;
}

bool TemplateDag::is_acyclic() const {
    std::vector<std::size_t> indeg(nodes.size(), 0);
    for (const auto& e : edges) ++indeg[e.second];
    std::vector<std::size_t> ready;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (indeg[k] == 0) ready.push_back(k);
    std::size_t seen = 0;
    while (!ready.empty()) {
        const auto n = ready.back();
        ready.pop_back();
        ++seen;
        for (const auto& e : edges)
            if (e.first == n && --indeg[e.second] == 0) ready.push_back(e.second);
    }
    return seen == nodes.size();
}

std::vector<std::vector<std::size_t>> TemplateDag::paths(std::size_t limit) const {
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) adj[k] = successors(k);
    std::vector<char> is_exit(nodes.size(), 0);
    for (auto e : exits) is_exit[e] = 1;

    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> path;
    auto walk = [&](auto&& self, std::size_t n) -> void {
        if (out.size() >= limit) return;
        path.push_back(n);
        if (is_exit[n]) out.push_back(path);
        for (auto next : adj[n]) self(self, next);
        path.pop_back();
    };
    for (auto e : entries) walk(walk, e);
    return out;
}

std::string TemplateDag::render(const std::vector<std::size_t>& path) const {
    std::vector<std::string> parts;
    for (auto n : path) parts.push_back(nodes[n].token.display());
    return text::join(parts, " ");
}

namespace {

using Node = TemplateDag::Node;

std::vector<Node> chain_nodes(const Template& t) {
    std::map<Token, std::size_t> seen;
    std::vector<Node> out;
    for (const auto& tok : t.tokens) out.push_back({tok, seen[tok]++});
    return out;
}

// Lexicographic order used for deterministic traversal.
bool node_before(const Node& a, const Node& b) {
    const auto da = a.token.display(), db = b.token.display();
    if (da != db) return da < db;
    if (a.occurrence != b.occurrence) return a.occurrence < b.occurrence;
    return a.token < b.token;
}

struct Unified {
    std::vector<Node> nodes;  // sorted by node_before
    std::vector<std::vector<std::size_t>> chains;
    std::set<std::pair<std::size_t, std::size_t>> edges;
};

Unified unify(const std::vector<const Template*>& ts) {
    Unified u;
    std::vector<std::vector<Node>> raw;
    for (const auto* t : ts) {
        raw.push_back(chain_nodes(*t));
        u.nodes.insert(u.nodes.end(), raw.back().begin(), raw.back().end());
    }
    std::sort(u.nodes.begin(), u.nodes.end(), node_before);
    u.nodes.erase(std::unique(u.nodes.begin(), u.nodes.end()), u.nodes.end());
    auto index_of = [&](const Node& n) {
        return static_cast<std::size_t>(std::lower_bound(u.nodes.begin(), u.nodes.end(), n, node_before) -
                                        u.nodes.begin());
    };
    for (const auto& chain : raw) {
        std::vector<std::size_t> ids;
        for (const auto& n : chain) ids.push_back(index_of(n));
        for (std::size_t k = 0; k + 1 < ids.size(); ++k) u.edges.emplace(ids[k], ids[k + 1]);
        u.chains.push_back(std::move(ids));
    }
    return u;
}

std::set<std::pair<std::size_t, std::size_t>> back_edges(const Unified& u) {
    std::vector<std::vector<std::size_t>> adj(u.nodes.size());
    for (const auto& [a, b] : u.edges) adj[a].push_back(b);  // set order keeps these sorted

    std::set<std::size_t> entry_set;
    for (const auto& c : u.chains) entry_set.insert(c.front());
    std::vector<std::size_t> roots(entry_set.begin(), entry_set.end());
    for (std::size_t k = 0; k < u.nodes.size(); ++k)
        if (!entry_set.count(k)) roots.push_back(k);

    enum Color : char { White, Gray, Black };
    std::vector<Color> color(u.nodes.size(), White);
    std::set<std::pair<std::size_t, std::size_t>> back;
    auto dfs = [&](auto&& self, std::size_t n) -> void {
        color[n] = Gray;
        for (auto next : adj[n]) {
            if (color[next] == Gray) back.emplace(n, next);
            else if (color[next] == White) self(self, next);
        }
        color[n] = Black;
    };
    for (auto r : roots)
        if (color[r] == White) dfs(dfs, r);
    return back;
}

TemplateDag make_dag(const std::vector<const Template*>& members) {
    const auto u = unify(members);
    TemplateDag dag;
    dag.intent = members.front()->intent;
    dag.language = members.front()->language;
    dag.nodes = u.nodes;
    dag.edges.assign(u.edges.begin(), u.edges.end());
    std::set<std::size_t> entries, exits;
    std::set<std::string> sources;
    for (std::size_t k = 0; k < u.chains.size(); ++k) {
        entries.insert(u.chains[k].front());
        exits.insert(u.chains[k].back());
        sources.insert(members[k]->display());
    }
    dag.entries.assign(entries.begin(), entries.end());
    dag.exits.assign(exits.begin(), exits.end());
    dag.sources.assign(sources.begin(), sources.end());
    return dag;
}

}  // namespace

std::vector<TemplateDag> build_dags(const std::vector<Template>& templates) {
    std::vector<const Template*> pending;
    for (const auto& t : templates) {
        if (t.tokens.empty()) throw ArgumentError("template without tokens");
        pending.push_back(&t);
    }
    std::vector<TemplateDag> out;
    while (!pending.empty()) {
        const auto u = unify(pending);
        const auto back = back_edges(u);
        std::vector<const Template*> covered, rest;
        for (std::size_t k = 0; k < pending.size(); ++k) {
            const auto& c = u.chains[k];
            bool intact = true;
            for (std::size_t i = 0; i + 1 < c.size() && intact; ++i) intact = !back.count({c[i], c[i + 1]});
            (intact ? covered : rest).push_back(pending[k]);
        }
        if (covered.empty()) {
            covered.push_back(rest.front());
            rest.erase(rest.begin());
        }
        out.push_back(make_dag(covered));
        pending = std::move(rest);
    }
    return out;
}

ArticleRules ArticleRules::builtin(std::string_view language) {
    if (language == "en") return ArticleRules({{"a", "an", true, false}, {"an", "a", false, false}});
    if (language == "fr") return ArticleRules({{"le", "l'", true, true}, {"la", "l'", true, true}});
    return {};
}

ArticleRules ArticleRules::load(const std::string& path) {
    std::vector<Rule> rules;
    std::size_t line_no = 0;
    for (auto line : text::split(io::read_file(path), '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto f = text::split(line, '\t');
        const auto where = path + ":" + std::to_string(line_no);
        if (f.size() != 4) throw FormatError(where + ": expected 4 tab-separated fields");
        if (f[2] != "vowel" && f[2] != "consonant") throw FormatError(where + ": bad context '" + f[2] + "'");
        if (f[3] != "space" && f[3] != "join") throw FormatError(where + ": bad joiner '" + f[3] + "'");
        rules.push_back({f[0], f[1], f[2] == "vowel", f[3] == "join"});
    }
    return ArticleRules(std::move(rules));
}

namespace {

bool starts_with_vowel(std::string_view w) {
    if (w.empty()) return false;
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(w.front())));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace

std::pair<std::string, bool> ArticleRules::apply(const std::string& article, std::string_view next_word) const {
    const bool vowel = starts_with_vowel(next_word);
    for (const auto& r : rules_)
        if (r.article == article && r.before_vowel == vowel) return {r.replacement, r.join};
    return {article, false};
}

std::optional<std::string> generate_synthetic(const std::map<std::string, std::string>& entities,
                                              const std::vector<TemplateDag>& dags, const ArticleRules& rules) {
    struct Choice {
        std::size_t overlap = 0;
        bool original = false;
        std::size_t length = 0;
        std::string form;
        std::string text;
    };
    std::optional<Choice> best;
    auto better = [](const Choice& a, const Choice& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.original != b.original) return a.original;
        if (a.length != b.length) return a.length < b.length;
        return a.form < b.form;
    };

    for (const auto& dag : dags) {
        for (const auto& path : dag.paths()) {
            std::set<std::string> types;
            bool fillable = true;
            for (auto n : path) {
                const auto& tok = dag.nodes[n].token;
                if (!tok.is_placeholder()) continue;
                if (!entities.count(tok.text)) {
                    fillable = false;
                    break;
                }
                types.insert(tok.text);
            }
            if (!fillable || types.empty()) continue;

            std::vector<std::string> words;
            for (auto n : path) {
                const auto& tok = dag.nodes[n].token;
                words.push_back(tok.is_placeholder() ? entities.at(tok.text) : tok.text);
            }
            std::string rendered;
            bool glue = false;
            for (std::size_t k = 0; k < words.size(); ++k) {
                std::string w = words[k];
                bool join = false;
                if (dag.nodes[path[k]].token.article && k + 1 < words.size())
                    std::tie(w, join) = rules.apply(w, words[k + 1]);
                if (!rendered.empty() && !glue) rendered.push_back(' ');
                rendered += w;
                glue = join;
            }

            Choice c;
            c.overlap = types.size();
            c.form = dag.render(path);
            c.original = std::find(dag.sources.begin(), dag.sources.end(), c.form) != dag.sources.end();
            c.length = path.size();
            c.text = std::move(rendered);
            if (!best || better(c, *best)) best = std::move(c);
        }
    }
    if (!best) return std::nullopt;
    return best->text;
}

std::vector<Template> select_per_entity_set(const std::vector<Template>& templates, std::size_t min_support) {
    std::map<std::tuple<std::string, std::string, std::set<std::string>>, std::vector<Template>> groups;
    for (const auto& t : templates) {
        const auto types = t.placeholder_types();
        groups[{t.intent, t.language, std::set<std::string>(types.begin(), types.end())}].push_back(t);
    }
    std::vector<Template> out;
    for (const auto& [key, group] : groups) out.push_back(select_optimal_template(group, min_support));
    return out;
}

DagStore build_dag_store(const std::vector<Template>& templates, std::size_t min_support) {
    std::map<std::pair<std::string, std::string>, std::vector<Template>> by_intent;
    for (auto& t : select_per_entity_set(templates, min_support)) by_intent[{t.intent, t.language}].push_back(t);
    DagStore store;
    for (const auto& [key, group] : by_intent) store[key] = build_dags(group);
    return store;
}

Session abridge_dialog(const Session& dialog, const DagStore& store, const AbridgeOptions& options) {
    if (dialog.turns.size() < 2) return dialog;
    if (!dialog.outcome) throw DataError("dialog for '" + dialog.customer_id + "' has no outcome");
    const Turn& first = dialog.turns.front();
    const Turn& last = dialog.turns.back();
    const bool abrupt = options.lexicon.contains(last.utterance);

    if (*dialog.outcome == Outcome::Failure || abrupt) {
        Turn stop = last;
        if (!abrupt) {
            stop.utterance = options.lexicon.canonical();
            stop.hypothesis = Hypothesis("Global", "StopIntent");
            stop.iq = 0.0;
        }
        stop.kind = TurnKind::User;
        stop.solicited = false;
        return Session{dialog.customer_id, {first, stop}, Outcome::Failure};
    }

    std::map<std::string, std::string> entities;
    for (const auto& t : dialog.turns)
        for (const auto& [name, value] : t.hypothesis.slots()) entities[name] = value;

    std::optional<std::string> synthetic;
    if (auto it = store.find({first.hypothesis.intent(), options.language}); it != store.end() && !entities.empty())
        synthetic = generate_synthetic(entities, it->second, options.articles);
    if (!synthetic) return Session{dialog.customer_id, {first}, Outcome::Success};

    Turn turn;
    turn.utterance = *synthetic;
    turn.hypothesis = Hypothesis(first.hypothesis.domain(), first.hypothesis.intent(), entities);
    turn.timestamp = last.timestamp;
    turn.kind = TurnKind::Synthetic;
    turn.iq = last.iq;
    return Session{dialog.customer_id, {first, turn}, Outcome::Success};
}

Session abridge_session(const Session& session, const DagStore& store, const AbridgeOptions& options) {
    Session out{session.customer_id, {}, session.outcome};
    const auto& turns = session.turns;
    for (std::size_t i = 0; i < turns.size();) {
        std::size_t j = i + 1;
        while (j < turns.size() && turns[j].solicited) ++j;
        if (j == i + 1) {
            out.turns.push_back(turns[i]);
            ++i;
            continue;
        }
        Session dialog{session.customer_id, {turns.begin() + static_cast<std::ptrdiff_t>(i),
                                             turns.begin() + static_cast<std::ptrdiff_t>(j)},
                       Outcome::Success};
        if (j == turns.size()) dialog.outcome = session.outcome;
        else if (options.lexicon.contains(turns[j - 1].utterance)) dialog.outcome = Outcome::Failure;
        auto abridged = abridge_dialog(dialog, store, options);
        for (auto& t : abridged.turns) out.turns.push_back(std::move(t));
        if (j == turns.size()) out.outcome = abridged.outcome;
        i = j;
    }
    return out;
}

}  // namespace mqr

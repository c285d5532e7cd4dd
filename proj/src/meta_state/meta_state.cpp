#include "mqr/meta_state.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <unordered_map>

#include "mqr/error.hpp"

namespace mqr {

EdgeRoleRatios RoleCounts::ratios() const {
    const std::uint64_t n = total();
    if (n == 0) return {};
    const double d = static_cast<double>(n);
    return {static_cast<double>(alpha) / d, static_cast<double>(beta) / d, static_cast<double>(gamma) / d,
            static_cast<double>(eps) / d};
}

EdgeRoleRatios MstDetection::ratios(EdgeKey edge) const {
    auto it = roles.find(edge);
    return it == roles.end() ? EdgeRoleRatios{} : it->second.ratios();
}

namespace {

enum class Role { Alpha, Beta, Gamma, Eps };

struct PendingEdge {
    GraphAssembler::Node src;
    GraphAssembler::Node dst;
    Role role;
};

void bump(RoleCounts& rc, Role role) {
    switch (role) {
        case Role::Alpha: ++rc.alpha; break;
        case Role::Beta: ++rc.beta; break;
        case Role::Gamma: ++rc.gamma; break;
        case Role::Eps: ++rc.eps; break;
    }
}

}  // namespace

MstDetection detect_msts(const std::vector<Session>& sessions) {
    GraphAssembler assembler;
    std::vector<PendingEdge> edges;
    std::vector<MstOccurrence> occurrences;
    std::vector<std::array<GraphAssembler::Node, 3>> occurrence_nodes;

    for (std::size_t si = 0; si < sessions.size(); ++si) {
        const auto& s = sessions[si];
        if (s.turns.empty()) continue;
        if (!s.outcome) throw DataError("session for '" + s.customer_id + "' has no outcome");
        const auto end = *s.outcome == Outcome::Success ? GraphAssembler::kSuccess : GraphAssembler::kFailure;

        std::vector<GraphAssembler::Node> nodes;
        nodes.reserve(s.turns.size());
        for (const auto& t : s.turns) nodes.push_back(assembler.node(t.hypothesis));

        const std::size_t m = s.turns.size();
        for (std::size_t t = 0; t < m; ++t) {
            const bool is_rewrite = s.turns[t].kind == TurnKind::Rewrite;
            if (is_rewrite && (t == 0 || s.turns[t - 1].kind == TurnKind::Rewrite))
                throw DataError("rewrite turn without a preceding request in session of '" + s.customer_id + "'");
            const auto next = t + 1 < m ? nodes[t + 1] : end;
            const bool next_is_rewrite = t + 1 < m && s.turns[t + 1].kind == TurnKind::Rewrite;

            Role role = Role::Eps;
            if (next_is_rewrite) role = Role::Alpha;
            else if (is_rewrite) role = Role::Beta;
            edges.push_back({nodes[t], next, role});

            if (is_rewrite) {
                edges.push_back({nodes[t - 1], next, Role::Gamma});
                MstOccurrence occ;
                occ.session = si;
                occ.request_turn = t - 1;
                occ.rewrite_turn = t;
                if (t + 1 < m) occ.successor_turn = t + 1;
                occurrences.push_back(occ);
                occurrence_nodes.push_back({nodes[t - 1], nodes[t], next});
            }
        }
    }
    if (edges.empty()) throw EmptyGraphError("no transitions to count");

    for (const auto& e : edges) assembler.add(e.src, e.dst);
    std::vector<StateId> remap;
    MstDetection out;
    out.graph = std::move(assembler).finish(GraphMode::SelfAware, &remap);
    for (const auto& e : edges) bump(out.roles[EdgeKey{remap[e.src], remap[e.dst]}], e.role);
    for (std::size_t k = 0; k < occurrences.size(); ++k) {
        occurrences[k].source = remap[occurrence_nodes[k][0]];
        occurrences[k].rewrite = remap[occurrence_nodes[k][1]];
        occurrences[k].successor = remap[occurrence_nodes[k][2]];
    }
    out.occurrences = std::move(occurrences);
    return out;
}

MarkovGraph build_superposition(const StateSpace& states, const std::map<EdgeKey, std::uint64_t>& counts,
                                const std::map<EdgeKey, RoleCounts>& roles,
                                const std::map<EdgeKey, EdgeWeights>& params) {
    GraphData data;
    data.mode = GraphMode::SelfAware;
    data.states = states;
    data.counts = counts;
    for (const auto& [edge, rc] : roles) {
        if (rc.alpha + rc.beta + rc.gamma == 0) continue;
        if (!counts.count(edge)) throw ArgumentError("role record for an edge with no count");
        auto it = params.find(edge);
        if (it == params.end()) throw ArgumentError("edge in a triplet has no weights");
        const auto& w = it->second;
        for (double v : {w.alpha, w.beta, w.gamma})
            if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("triplet weights must lie in [0, 1]");
        const auto r = rc.ratios();
        EdgeParams p;
        p.j_alpha = r.alpha;
        p.j_beta = r.beta;
        p.j_gamma = r.gamma;
        p.j_eps = r.eps;
        p.alpha = w.alpha;
        p.beta = w.beta;
        p.gamma = w.gamma;
        p.tier = w.tier;
        data.meta.emplace(edge, p);
    }
    return MarkovGraph(std::move(data));
}

std::vector<std::string> entity_change_keys(const Hypothesis& from, const Hypothesis& to) {
    std::vector<std::string> keys;
    if (from.domain() != to.domain()) keys.emplace_back("@domain:changed");
    if (from.intent() != to.intent()) keys.emplace_back("@intent:changed");
    const auto& a = from.slots();
    const auto& b = to.slots();
    for (const auto& [name, value] : a) {
        auto it = b.find(name);
        if (it == b.end()) keys.push_back(name + ":removed");
        else if (it->second != value) keys.push_back(name + ":changed");
    }
    for (const auto& [name, value] : b)
        if (!a.count(name)) keys.push_back(name + ":added");
    if (keys.empty()) keys.emplace_back("@none:unchanged");
    std::sort(keys.begin(), keys.end());
    return keys;
}

namespace {

// Population statistics gathered once over the unpruned input.
class Populations {
public:
    Populations(const std::vector<Session>& sessions, const IqScorer& scorer, double threshold) {
        for (const auto& s : sessions) {
            const std::size_t m = s.turns.size();
            for (std::size_t t = 0; t < m; ++t) {
                const auto& turn = s.turns[t];
                if (turn.kind == TurnKind::Rewrite) continue;
                const std::string x = turn.hypothesis.format();
                const bool rewritten = t + 1 < m && s.turns[t + 1].kind == TurnKind::Rewrite;
                if (!rewritten) {
                    const PopulationCounts obs{scorer.score(s, t) >= threshold ? 1u : 0u, 1};
                    x_[x] += obs;
                    x_[customer_key(s.customer_id, x)] += obs;
                    continue;
                }
                const auto& next = s.turns[t + 1];
                const std::string pair = pair_key(x, next.hypothesis.format());
                const PopulationCounts obs{scorer.score(s, t + 1) >= threshold ? 1u : 0u, 1};
                w_[pair] += obs;
                w_[customer_key(s.customer_id, pair)] += obs;
                for (const auto& e : entity_change_keys(turn.hypothesis, next.hypothesis)) {
                    entity_w_[e] += obs;
                    entity_sources_[e].insert(x);
                }
            }
        }
    }

    TierEvidence global(const std::string& x, const std::string& y) const {
        return {lookup(x_, x), lookup(w_, pair_key(x, y))};
    }

    std::optional<TierEvidence> customer(const std::string& c, const std::string& x, const std::string& y) const {
        const auto w = lookup(w_, customer_key(c, pair_key(x, y)));
        if (w.trials == 0) return std::nullopt;
        return TierEvidence{lookup(x_, customer_key(c, x)), w};
    }

    std::vector<double> entity_values(const Hypothesis& from, const Hypothesis& to, const AlphaGate& gate) {
        std::vector<double> out;
        for (const auto& e : entity_change_keys(from, to)) {
            auto cached = entity_alpha_.find(e);
            if (cached == entity_alpha_.end()) {
                TierEvidence ev{{}, lookup(entity_w_, e)};
                if (auto it = entity_sources_.find(e); it != entity_sources_.end())
                    for (const auto& src : it->second) ev.not_rewritten += lookup(x_, src);
                cached = entity_alpha_.emplace(e, superiority(ev, gate)).first;
            }
            out.push_back(cached->second);
        }
        return out;
    }

private:
    static std::string pair_key(const std::string& x, const std::string& y) { return x + '\n' + y; }
    static std::string customer_key(const std::string& c, const std::string& k) { return c + '\x1f' + k; }

    static PopulationCounts lookup(const std::unordered_map<std::string, PopulationCounts>& m, const std::string& k) {
        auto it = m.find(k);
        return it == m.end() ? PopulationCounts{} : it->second;
    }

    std::unordered_map<std::string, PopulationCounts> x_;
    std::unordered_map<std::string, PopulationCounts> w_;
    std::unordered_map<std::string, PopulationCounts> entity_w_;
    std::unordered_map<std::string, std::set<std::string>> entity_sources_;
    std::unordered_map<std::string, double> entity_alpha_;
};

struct Accumulator {
    double sum = 0.0;
    std::array<std::uint64_t, 5> tiers{};
};

AlphaTier dominant_tier(const std::array<std::uint64_t, 5>& tiers) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < tiers.size(); ++k)
        if (tiers[k] > tiers[best]) best = k;
    return static_cast<AlphaTier>(best);
}

}  // namespace

SelfAwareBuild build_selfaware(const std::vector<Session>& sessions, const SelfAwareOptions& options) {
    if (sessions.empty()) throw EmptyGraphError("cannot build a graph from zero sessions");
    for (const auto& s : sessions)
        if (!s.outcome) throw DataError("session for '" + s.customer_id + "' has no outcome");
    if (options.fixed_alpha && !(*options.fixed_alpha >= 0.0 && *options.fixed_alpha <= 1.0))
        throw ArgumentError("fixed alpha must lie in [0, 1]");

    const auto pruned = prune_sessions(sessions, GraphMode::SelfAware, options.build.min_state_support);
    if (pruned.empty()) throw EmptyGraphError("no state survives pruning");
    const auto det = detect_msts(pruned);
    const auto& states = det.graph.states;

    const HeuristicScorer fallback;
    const IqScorer& scorer = options.scorer ? *options.scorer : fallback;
    std::optional<Populations> pops;
    if (!options.fixed_alpha) pops.emplace(sessions, scorer, options.iq_threshold);

    std::unordered_map<std::string, AlphaChoice> customer_cache;
    std::map<EdgeKey, AlphaChoice> pair_cache;
    auto choose = [&](const Session& s, StateId x, StateId y) -> AlphaChoice {
        if (options.fixed_alpha) return {*options.fixed_alpha, AlphaTier::Fixed};
        const auto& xs = states.canonical(x);
        const auto& ys = states.canonical(y);
        const std::string ckey = s.customer_id + '\x1f' + xs + '\n' + ys;
        if (auto it = customer_cache.find(ckey); it != customer_cache.end()) return it->second;
        AlphaChoice choice;
        const auto cust = pops->customer(s.customer_id, xs, ys);
        if (cust && passes_gate(*cust, options.gate)) {
            choice = {superiority(*cust, options.gate), AlphaTier::Customer};
        } else if (auto it = pair_cache.find({x, y}); it != pair_cache.end()) {
            choice = it->second;
        } else {
            choice = select_alpha(std::nullopt, pops->global(xs, ys),
                                  pops->entity_values(states.hypothesis(x), states.hypothesis(y), options.gate),
                                  options.gate);
            pair_cache.emplace(EdgeKey{x, y}, choice);
        }
        customer_cache.emplace(ckey, choice);
        return choice;
    };

    std::map<EdgeKey, Accumulator> acc_alpha, acc_beta, acc_gamma;
    SelfAwareBuild out{MarkovGraph(GraphData{}), {}};
    out.triplets.reserve(det.occurrences.size());
    for (const auto& occ : det.occurrences) {
        const auto& s = pruned[occ.session];
        const auto choice = choose(s, occ.source, occ.rewrite);
        const double rho = occ.successor_turn ? relevance_rho(s.turns[occ.rewrite_turn].utterance,
                                                              s.turns[*occ.successor_turn].utterance,
                                                              options.phonetic)
                                              : 1.0;
        const auto w = mst_weights(choice.alpha, rho);
        out.triplets.push_back({occ.source, occ.rewrite, occ.successor, choice.alpha, w.beta, w.gamma, rho,
                                choice.tier});
        const auto tier = static_cast<std::size_t>(choice.tier);
        auto& a = acc_alpha[{occ.source, occ.rewrite}];
        a.sum += choice.alpha;
        ++a.tiers[tier];
        auto& b = acc_beta[{occ.rewrite, occ.successor}];
        b.sum += w.beta;
        ++b.tiers[tier];
        auto& g = acc_gamma[{occ.source, occ.successor}];
        g.sum += w.gamma;
        ++g.tiers[tier];
    }

    std::map<EdgeKey, EdgeWeights> params;
    for (const auto& [edge, rc] : det.roles) {
        if (rc.alpha + rc.beta + rc.gamma == 0) continue;
        EdgeWeights w;
        std::array<std::uint64_t, 5> tiers{};
        auto take = [&](const std::map<EdgeKey, Accumulator>& acc, std::uint64_t n, double& dst) {
            if (n == 0) return;
            const auto& a = acc.at(edge);
            dst = std::clamp(a.sum / static_cast<double>(n), 0.0, 1.0);
            for (std::size_t k = 0; k < tiers.size(); ++k) tiers[k] += a.tiers[k];
        };
        take(acc_alpha, rc.alpha, w.alpha);
        take(acc_beta, rc.beta, w.beta);
        take(acc_gamma, rc.gamma, w.gamma);
        w.tier = dominant_tier(tiers);
        params.emplace(edge, w);
    }

    out.graph = build_superposition(states, det.graph.counts, det.roles, params);
    return out;
}

MarkovGraph build_graph_for_mode(const std::vector<Session>& sessions, GraphMode mode,
                                 const SelfAwareOptions& options) {
    if (mode == GraphMode::SelfAware) return build_selfaware(sessions, options).graph;
    return build_graph(sessions, mode, options.build);
}

}  // namespace mqr

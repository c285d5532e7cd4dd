#include <unordered_map>

#include "mqr/error.hpp"
#include "mqr/markov_graph.hpp"

namespace mqr {

GraphAssembler::GraphAssembler() = default;

GraphAssembler::Node GraphAssembler::node(const Hypothesis& h) {
    std::string key = h.format();
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const Node id = static_cast<Node>(nodes_.size() + kFirstTransient);
    index_.emplace(std::move(key), id);
    nodes_.push_back(h);
    return id;
}

void GraphAssembler::add(Node src, Node dst, std::uint64_t n) {
    if (src < kFirstTransient) throw DataError("absorbing states have no outgoing edges");
    edges_[(static_cast<std::uint64_t>(src) << 32) | dst] += n;
}

GraphData GraphAssembler::finish(GraphMode mode, std::vector<StateId>* remap) && {
    std::vector<std::string> keys(nodes_.size());
    for (const auto& [key, id] : index_) keys[id - kFirstTransient] = key;

    GraphData data;
    data.mode = mode;
    data.states = StateSpace(std::move(nodes_));

    std::vector<StateId> map(keys.size() + kFirstTransient);
    map[kSuccess] = kSuccessState;
    map[kFailure] = kFailureState;
    for (std::size_t k = 0; k < keys.size(); ++k) map[k + kFirstTransient] = *data.states.find(keys[k]);

    for (const auto& [packed, n] : edges_) {
        const auto src = static_cast<Node>(packed >> 32);
        const auto dst = static_cast<Node>(packed & 0xffffffffu);
        data.counts[EdgeKey{map[src], map[dst]}] += n;
    }
    if (remap) *remap = std::move(map);
    return data;
}

bool in_chain(TurnKind kind, GraphMode mode) {
    return kind != TurnKind::Rewrite || mode != GraphMode::Discounting;
}

std::vector<Session> prune_sessions(const std::vector<Session>& sessions, GraphMode mode,
                                    std::size_t min_support) {
    if (min_support <= 1) return sessions;
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& s : sessions)
        for (const auto& t : s.turns)
            if (in_chain(t.kind, mode)) ++seen[t.hypothesis.format()];

    std::vector<Session> out;
    out.reserve(sessions.size());
    for (const auto& s : sessions) {
        Session kept{s.customer_id, {}, s.outcome};
        bool request_kept = false;
        for (const auto& t : s.turns) {
            if (t.kind == TurnKind::Rewrite) {
                const bool supported = !in_chain(t.kind, mode) || seen[t.hypothesis.format()] >= min_support;
                if (request_kept && supported) kept.turns.push_back(t);
                request_kept = false;
                continue;
            }
            request_kept = seen[t.hypothesis.format()] >= min_support;
            if (request_kept) kept.turns.push_back(t);
        }
        if (!kept.turns.empty()) out.push_back(std::move(kept));
    }
    return out;
}

GraphData count_transitions(const std::vector<Session>& sessions, GraphMode mode,
                            const BuildOptions& options) {
    if (mode == GraphMode::SelfAware)
        throw ArgumentError("self-aware graphs are built from meta-state triplets");
    if (sessions.empty()) throw EmptyGraphError("cannot build a graph from zero sessions");
    for (const auto& s : sessions)
        if (!s.outcome) throw DataError("session for '" + s.customer_id + "' has no outcome");

    const auto pruned = prune_sessions(sessions, mode, options.min_state_support);
    GraphAssembler assembler;
    for (const auto& s : pruned) {
        GraphAssembler::Node prev = 0;
        bool have_prev = false;
        for (const auto& t : s.turns) {
            if (!in_chain(t.kind, mode)) continue;
            const auto cur = assembler.node(t.hypothesis);
            if (have_prev) assembler.add(prev, cur);
            prev = cur;
            have_prev = true;
        }
        if (have_prev)
            assembler.add(prev, *s.outcome == Outcome::Success ? GraphAssembler::kSuccess
                                                               : GraphAssembler::kFailure);
    }
    GraphData data = std::move(assembler).finish(mode);
    if (data.states.transient_count() == 0) throw EmptyGraphError("no state survives pruning");
    return data;
}

MarkovGraph build_graph(const std::vector<Session>& sessions, GraphMode mode, const BuildOptions& options) {
    return MarkovGraph(count_transitions(sessions, mode, options));
}

}  // namespace mqr

#include "mqr/markov_graph.hpp"

#include <cmath>
#include <deque>

#include "mqr/error.hpp"

namespace mqr {

std::string_view to_string(GraphMode mode) {
    switch (mode) {
        case GraphMode::Discounting:
            return "discounting";
        case GraphMode::Unrolling:
            return "unrolling";
        case GraphMode::SelfAware:
            return "selfaware";
    }
    return "discounting";
}

GraphMode parse_graph_mode(std::string_view s) {
    if (s == "discounting" || s == "baseline") return GraphMode::Discounting;
    if (s == "unrolling") return GraphMode::Unrolling;
    if (s == "selfaware") return GraphMode::SelfAware;
    throw ParseError("unknown graph mode '" + std::string(s) + "'");
}

std::string_view to_string(AlphaTier tier) {
    switch (tier) {
        case AlphaTier::None:
            return "none";
        case AlphaTier::Customer:
            return "customer";
        case AlphaTier::Global:
            return "global";
        case AlphaTier::Entity:
            return "entity";
        case AlphaTier::Fixed:
            return "fixed";
    }
    return "none";
}

AlphaTier parse_alpha_tier(std::string_view s) {
    if (s == "none") return AlphaTier::None;
    if (s == "customer") return AlphaTier::Customer;
    if (s == "global") return AlphaTier::Global;
    if (s == "entity") return AlphaTier::Entity;
    if (s == "fixed") return AlphaTier::Fixed;
    throw ParseError("unknown alpha tier '" + std::string(s) + "'");
}

MarkovGraph::MarkovGraph(GraphData data) : data_(std::move(data)) {
    const std::size_t n = data_.states.size();
    rows_.assign(n, {});
    incoming_.assign(n, {});
    success_.assign(n, 0.0);
    failure_.assign(n, 0.0);

    for (const auto& [key, params] : data_.meta) {
        if (!data_.counts.count(key)) throw DataError("meta record for an edge with no count");
        (void)params;
    }

    auto it = data_.counts.begin();
    std::vector<std::pair<StateId, double>> out;
    for (StateId i = kFirstTransient; i < n; ++i) {
        out.clear();
        double total = 0.0;
        for (; it != data_.counts.end() && it->first.src == i; ++it) {
            const EdgeKey& key = it->first;
            if (key.dst >= n) throw DataError("edge target out of range");
            double w = static_cast<double>(it->second);
            if (auto m = data_.meta.find(key); m != data_.meta.end()) {
                const double lambda = m->second.lambda();
                if (!std::isfinite(lambda) || lambda < 0.0) throw DataError("invalid edge weight");
                w *= lambda;
            }
            if (w > 0.0) {
                out.emplace_back(key.dst, w);
                total += w;
            }
        }
        if (it != data_.counts.end() && it->first.src < i) throw DataError("edge source is absorbing");
        if (total <= 0.0) {
            failure_[i] = 1.0;
            continue;
        }
        for (const auto& [dst, w] : out) {
            const double p = w / total;
            if (dst == kSuccessState) {
                success_[i] += p;
            } else if (dst == kFailureState) {
                failure_[i] += p;
            } else {
                rows_[i].push_back({dst, p});
            }
        }
    }
    if (it != data_.counts.end()) throw DataError("edge source out of range");

    // States that cannot reach absorption through positive transitions would
    // make (I - Q) singular; they are treated as failures.
    std::vector<std::vector<StateId>> preds(n);
    for (StateId i = kFirstTransient; i < n; ++i)
        for (const auto& e : rows_[i]) preds[e.state].push_back(i);
    std::vector<char> absorbs(n, 0);
    std::deque<StateId> queue;
    for (StateId i = kFirstTransient; i < n; ++i) {
        if (success_[i] > 0.0 || failure_[i] > 0.0) {
            absorbs[i] = 1;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        StateId j = queue.front();
        queue.pop_front();
        for (StateId p : preds[j]) {
            if (!absorbs[p]) {
                absorbs[p] = 1;
                queue.push_back(p);
            }
        }
    }
    for (StateId i = kFirstTransient; i < n; ++i) {
        if (!absorbs[i]) {
            rows_[i].clear();
            success_[i] = 0.0;
            failure_[i] = 1.0;
        }
    }
    for (StateId i = kFirstTransient; i < n; ++i)
        for (const auto& e : rows_[i]) incoming_[e.state].push_back({i, e.p});
}

std::span<const MarkovGraph::Entry> MarkovGraph::row(StateId i) const {
    if (i >= size()) throw LookupError("state " + std::to_string(i) + " out of range");
    return rows_[i];
}

std::span<const MarkovGraph::Entry> MarkovGraph::incoming(StateId j) const {
    if (j >= size()) throw LookupError("state " + std::to_string(j) + " out of range");
    return incoming_[j];
}

double MarkovGraph::success_probability(StateId i) const {
    if (i >= size()) throw LookupError("state " + std::to_string(i) + " out of range");
    return success_[i];
}

double MarkovGraph::failure_probability(StateId i) const {
    if (i >= size()) throw LookupError("state " + std::to_string(i) + " out of range");
    return failure_[i];
}

double MarkovGraph::probability(StateId i, StateId j) const {
    if (i >= size() || j >= size()) throw LookupError("state out of range");
    if (is_absorbing(i)) return i == j ? 1.0 : 0.0;
    if (j == kSuccessState) return success_[i];
    if (j == kFailureState) return failure_[i];
    for (const auto& e : rows_[i])
        if (e.state == j) return e.p;
    return 0.0;
}

std::uint64_t MarkovGraph::count(StateId i, StateId j) const {
    auto it = data_.counts.find(EdgeKey{i, j});
    return it == data_.counts.end() ? 0 : it->second;
}

std::uint64_t MarkovGraph::support(StateId i, StateId j) const {
    const EdgeKey key{i, j};
    auto it = data_.counts.find(key);
    if (it == data_.counts.end()) return 0;
    auto m = data_.meta.find(key);
    if (m == data_.meta.end()) return it->second;
    const auto& p = m->second;
    const double c = static_cast<double>(it->second);
    auto dropped = [c](double ratio, double w) -> std::uint64_t {
        return w == 0.0 ? static_cast<std::uint64_t>(std::llround(ratio * c)) : 0;
    };
    const std::uint64_t zero = dropped(p.j_alpha, p.alpha) + dropped(p.j_beta, p.beta) + dropped(p.j_gamma, p.gamma);
    return zero >= it->second ? 0 : it->second - zero;
}

double MarkovGraph::weight(StateId i, StateId j) const {
    const EdgeKey key{i, j};
    auto it = data_.counts.find(key);
    if (it == data_.counts.end()) return 0.0;
    double w = static_cast<double>(it->second);
    if (auto m = data_.meta.find(key); m != data_.meta.end()) w *= m->second.lambda();
    return w;
}

}  // namespace mqr

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mqr/session.hpp"
#include "mqr/state_space.hpp"

namespace mqr {

/// How Rewrite turns enter the chain.
///   Discounting: rewrite turns are skipped (the original baseline).
///   Unrolling:   rewrite turns are spliced into the chain as ordinary states.
///   SelfAware:   superposition of both, weighted per meta-state triplet.
enum class GraphMode { Discounting, Unrolling, SelfAware };

std::string_view to_string(GraphMode mode);
/// Accepts "baseline" as an alias of "discounting".
GraphMode parse_graph_mode(std::string_view s);

/// Which population supplied the viability weight of an edge.
enum class AlphaTier { None, Customer, Global, Entity, Fixed };

std::string_view to_string(AlphaTier tier);
AlphaTier parse_alpha_tier(std::string_view s);

struct EdgeKey {
    StateId src = 0;
    StateId dst = 0;
    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// Role ratios and triplet weights of one edge of the superposition graph.
/// Edges that never take part in a triplet keep the defaults (J_eps = 1),
/// which makes their lambda exactly 1.
struct EdgeParams {
    double j_alpha = 0.0;
    double j_beta = 0.0;
    double j_gamma = 0.0;
    double j_eps = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    AlphaTier tier = AlphaTier::None;

    double lambda() const noexcept { return alpha * j_alpha + beta * j_beta + gamma * j_gamma + j_eps; }

    friend bool operator==(const EdgeParams&, const EdgeParams&) = default;
};

/// Everything a snapshot persists: interned states, co-occurrence counts C
/// and, for self-aware graphs, the per-edge triplet parameters.
struct GraphData {
    GraphMode mode = GraphMode::Discounting;
    StateSpace states;
    std::map<EdgeKey, std::uint64_t> counts;
    std::map<EdgeKey, EdgeParams> meta;

    friend bool operator==(const GraphData&, const GraphData&) = default;
};

/// Absorbing chain [Q S; 0 I] normalized from lambda-weighted counts.
///
/// Each transient row of [Q|S] sums to one. A row whose weighted mass is zero,
/// or whose state cannot reach either absorbing state through positive
/// transitions, routes all of its mass to the failure state. Immutable after
/// construction and safe for concurrent readers.
class MarkovGraph {
public:
    struct Entry {
        StateId state;
        double p;
    };

    explicit MarkovGraph(GraphData data);

    const GraphData& data() const noexcept { return data_; }
    const StateSpace& states() const noexcept { return data_.states; }
    GraphMode mode() const noexcept { return data_.mode; }
    std::size_t size() const noexcept { return data_.states.size(); }

    bool is_transient(StateId id) const noexcept { return id >= kFirstTransient && id < size(); }

    /// Transient-to-transient transitions out of `i`, sorted by target.
    std::span<const Entry> row(StateId i) const;
    /// Transient predecessors of `j` with their transition probabilities.
    std::span<const Entry> incoming(StateId j) const;

    double success_probability(StateId i) const;  // S(i, s+)
    double failure_probability(StateId i) const;  // S(i, s-)
    /// One-step transition probability between any two states.
    double probability(StateId i, StateId j) const;

    std::uint64_t count(StateId i, StateId j) const;
    /// Count of observations that carry weight: occurrences in a role whose
    /// triplet weight is zero are left out. Equals count() without meta.
    std::uint64_t support(StateId i, StateId j) const;
    /// lambda(i,j) * C(i,j)
    double weight(StateId i, StateId j) const;

private:
    GraphData data_;
    std::vector<std::vector<Entry>> rows_;
    std::vector<std::vector<Entry>> incoming_;
    std::vector<double> success_;
    std::vector<double> failure_;
};

struct BuildOptions {
    /// States seen fewer times than this are spliced out of every chain.
    std::size_t min_state_support = 2;
};

/// Builds GraphData from temporary node ids, then renumbers states in
/// canonical order.
class GraphAssembler {
public:
    using Node = std::uint32_t;
    static constexpr Node kSuccess = 0;
    static constexpr Node kFailure = 1;

    GraphAssembler();

    Node node(const Hypothesis& h);
    void add(Node src, Node dst, std::uint64_t n = 1);

    /// Returns the assembled data and fills `remap` with temp-node -> StateId.
    GraphData finish(GraphMode mode, std::vector<StateId>* remap = nullptr) &&;

private:
    std::unordered_map<std::string, Node> index_;
    std::vector<Hypothesis> nodes_;
    std::unordered_map<std::uint64_t, std::uint64_t> edges_;
};

/// Whether a turn of the given kind is a chain state under `mode`.
bool in_chain(TurnKind kind, GraphMode mode);

/// Splices out turns whose hypothesis occurs fewer than `min_support` times
/// among the chain states of `mode`. A pruned request also drops the Rewrite
/// turn attached to it. Sessions left without turns are dropped.
std::vector<Session> prune_sessions(const std::vector<Session>& sessions, GraphMode mode,
                                    std::size_t min_support);

/// Counts consecutive chain pairs plus the terminal (state, absorbing) pair.
/// Supports Discounting and Unrolling; SelfAware graphs are built by the
/// meta-state builder. Throws EmptyGraphError on empty input and DataError
/// on sessions without an outcome.
GraphData count_transitions(const std::vector<Session>& sessions, GraphMode mode,
                            const BuildOptions& options = {});

MarkovGraph build_graph(const std::vector<Session>& sessions, GraphMode mode,
                        const BuildOptions& options = {});

}  // namespace mqr

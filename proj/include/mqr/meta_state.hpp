#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mqr/alpha.hpp"
#include "mqr/markov_graph.hpp"
#include "mqr/relevance.hpp"
#include "mqr/session.hpp"

namespace mqr {

/// Per-edge role frequencies over the superposition graph.
struct EdgeRoleRatios {
    double alpha = 0.0;  // viability: request -> rewrite
    double beta = 0.0;   // succeeding: rewrite -> successor
    double gamma = 0.0;  // discounting: request -> successor
    double eps = 1.0;    // plain transition
};

struct RoleCounts {
    std::uint64_t alpha = 0;
    std::uint64_t beta = 0;
    std::uint64_t gamma = 0;
    std::uint64_t eps = 0;

    std::uint64_t total() const noexcept { return alpha + beta + gamma + eps; }
    EdgeRoleRatios ratios() const;
};

/// One rewritten request together with the turn that followed the rewrite.
/// `successor_turn` is empty when the session ended on the rewrite, in which
/// case `successor` is the absorbing state of the session outcome.
struct MstOccurrence {
    std::size_t session = 0;
    std::size_t request_turn = 0;
    std::size_t rewrite_turn = 0;
    std::optional<std::size_t> successor_turn;
    StateId source = 0;
    StateId rewrite = 0;
    StateId successor = 0;
};

struct MstDetection {
    /// States and counts C over the superposition graph; meta is left empty.
    GraphData graph;
    std::vector<MstOccurrence> occurrences;
    std::map<EdgeKey, RoleCounts> roles;

    EdgeRoleRatios ratios(EdgeKey edge) const;
};

/// Walks each session as an unrolled chain. A Rewrite turn k after request i
/// with successor j (the next turn, or the absorbing outcome) adds the roles
/// (i,k) viability, (k,j) succeeding and the virtual edge (i,j) discounting;
/// every other consecutive pair is a plain transition. Sessions are taken as
/// given (no pruning). Throws DataError for a Rewrite turn without a
/// preceding request or a session without an outcome, and EmptyGraphError
/// when there is nothing to count.
MstDetection detect_msts(const std::vector<Session>& sessions);

struct MetaStateTriplet {
    StateId source = 0;
    StateId rewrite = 0;
    StateId successor = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    double rho = 1.0;
    AlphaTier tier = AlphaTier::None;
};

struct EdgeWeights {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    AlphaTier tier = AlphaTier::None;
};

/// lambda = alpha*J_alpha + beta*J_beta + gamma*J_gamma + J_eps per edge;
/// the resulting graph normalizes lambda * C per source. Edges absent from
/// `roles` are plain transitions with lambda = 1.
MarkovGraph build_superposition(const StateSpace& states, const std::map<EdgeKey, std::uint64_t>& counts,
                                const std::map<EdgeKey, RoleCounts>& roles,
                                const std::map<EdgeKey, EdgeWeights>& params);

/// Entity-change categories of a rewrite, e.g. "SongName:changed",
/// "ArtistName:added". Domain and intent changes appear as "@domain:changed"
/// and "@intent:changed"; an identical rewrite yields "@none:unchanged".
std::vector<std::string> entity_change_keys(const Hypothesis& from, const Hypothesis& to);

struct SelfAwareOptions {
    BuildOptions build;
    AlphaGate gate;
    double iq_threshold = kDefaultIqThreshold;
    /// Scores turns without an annotated iq. Defaults to HeuristicScorer.
    const IqScorer* scorer = nullptr;
    PhoneticKey phonetic = consonant_skeleton;
    /// Bypasses the tier hierarchy and uses this alpha for every triplet.
    std::optional<double> fixed_alpha;
};

struct SelfAwareBuild {
    MarkovGraph graph;
    std::vector<MetaStateTriplet> triplets;
};

/// Prunes rare states, detects triplets, chooses alpha per triplet from the
/// customer / global / entity populations of the full input, derives beta
/// and gamma from the relevance of the rewrite to its successor, and
/// averages them per edge over the triplets that use that edge.
///
/// When the successor is absorbing there is no follow-up utterance and rho
/// is taken as 1.
SelfAwareBuild build_selfaware(const std::vector<Session>& sessions, const SelfAwareOptions& options = {});

/// Dispatches on mode; SelfAware goes through build_selfaware.
MarkovGraph build_graph_for_mode(const std::vector<Session>& sessions, GraphMode mode,
                                 const SelfAwareOptions& options = {});

}  // namespace mqr

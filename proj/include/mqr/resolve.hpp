#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mqr/markov_graph.hpp"

namespace mqr {

struct SolverOptions {
    /// Stop once ||x (I - Q) - e_i||_inf <= eps.
    double eps = 1e-10;
    std::size_t max_iterations = 100000;
    /// Scores closer than this count as tied when comparing candidates
    /// against the source; it sits above the solver's residual floor.
    double tie_tolerance = 1e-9;
};

/// Row `source` of the fundamental matrix N = (I - Q)^-1, indexed by StateId
/// (absorbing entries are zero). Solved by Gauss-Seidel sweeps over the
/// states reachable from `source`. Throws SolverError (carrying the last
/// residual) if the iteration cap is hit, LookupError for a non-transient
/// source.
std::vector<double> fundamental_row(const MarkovGraph& graph, StateId source,
                                    const SolverOptions& options = {});

/// ||row (I - Q) - e_source||_inf
double fundamental_residual(const MarkovGraph& graph, StateId source, const std::vector<double>& row);

/// Phi_inf(h_j) = P(s+ | h_j) * N(source, j) for every state j.
std::vector<double> phi_row(const MarkovGraph& graph, StateId source, const SolverOptions& options = {});

double phi_infinity(const MarkovGraph& graph, StateId source, StateId target,
                    const SolverOptions& options = {});

/// Finite-horizon variant: N replaced by sum_{n=0}^{k} Q^n. Exposed for
/// testing; prediction uses the k -> infinity form.
std::vector<double> phi_k_row(const MarkovGraph& graph, StateId source, std::size_t k);

/// 1 iff some transient state scores strictly above the source (beyond the
/// tie tolerance); ties keep the source.
bool predict_rewritability(const MarkovGraph& graph, StateId source, const SolverOptions& options = {});

struct RewriteCandidate {
    StateId source = 0;
    StateId target = 0;
    double score = 0.0;

    friend bool operator==(const RewriteCandidate&, const RewriteCandidate&) = default;
};

/// Reachable transient states that beat the source's own score, whose direct
/// edge count C(source, target) is at least `min_support`, ordered by score
/// then by state index. `k == 0` returns all of them.
std::vector<RewriteCandidate> top_rewrites(const MarkovGraph& graph, StateId source, std::size_t k,
                                           std::uint64_t min_support, const SolverOptions& options = {});

}  // namespace mqr

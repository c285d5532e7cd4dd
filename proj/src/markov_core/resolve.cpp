#include "mqr/resolve.hpp"

#include <algorithm>
#include <cmath>

#include "mqr/error.hpp"

namespace mqr {

namespace {

void require_transient(const MarkovGraph& graph, StateId id) {
    if (!graph.is_transient(id)) throw LookupError("state " + std::to_string(id) + " is not transient");
}

std::vector<StateId> reachable_from(const MarkovGraph& graph, StateId source) {
    std::vector<char> seen(graph.size(), 0);
    std::vector<StateId> order{source};
    seen[source] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (const auto& e : graph.row(order[head])) {
            if (!seen[e.state]) {
                seen[e.state] = 1;
                order.push_back(e.state);
            }
        }
    }
    return order;
}

double residual_over(const MarkovGraph& graph, StateId source, const std::vector<double>& x,
                     const std::vector<StateId>& states) {
    double worst = 0.0;
    for (StateId j : states) {
        double r = x[j] - (j == source ? 1.0 : 0.0);
        for (const auto& e : graph.incoming(j)) r -= x[e.state] * e.p;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace

std::vector<double> fundamental_row(const MarkovGraph& graph, StateId source, const SolverOptions& options) {
    require_transient(graph, source);
    const auto states = reachable_from(graph, source);
    std::vector<double> x(graph.size(), 0.0);

    double residual = 0.0;
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        for (StateId j : states) {
            double acc = j == source ? 1.0 : 0.0;
            double diag = 0.0;
            for (const auto& e : graph.incoming(j)) {
                if (e.state == j) {
                    diag = e.p;
                } else {
                    acc += x[e.state] * e.p;
                }
            }
            x[j] = acc / (1.0 - diag);
        }
        residual = residual_over(graph, source, x, states);
        if (!std::isfinite(residual)) break;
        if (residual <= options.eps) return x;
    }
    throw SolverError("fundamental row for state " + std::to_string(source) +
                          " did not converge; residual " + std::to_string(residual),
                      residual);
}

double fundamental_residual(const MarkovGraph& graph, StateId source, const std::vector<double>& row) {
    require_transient(graph, source);
    if (row.size() != graph.size()) throw ArgumentError("row length does not match the state count");
    std::vector<StateId> all;
    for (StateId j = kFirstTransient; j < graph.size(); ++j) all.push_back(j);
    return residual_over(graph, source, row, all);
}

std::vector<double> phi_row(const MarkovGraph& graph, StateId source, const SolverOptions& options) {
    auto phi = fundamental_row(graph, source, options);
    for (StateId j = 0; j < phi.size(); ++j) phi[j] *= is_absorbing(j) ? 0.0 : graph.success_probability(j);
    return phi;
}

double phi_infinity(const MarkovGraph& graph, StateId source, StateId target, const SolverOptions& options) {
    require_transient(graph, target);
    return phi_row(graph, source, options)[target];
}

std::vector<double> phi_k_row(const MarkovGraph& graph, StateId source, std::size_t k) {
    require_transient(graph, source);
    std::vector<double> acc(graph.size(), 0.0);
    std::vector<double> cur(graph.size(), 0.0);
    std::vector<double> next(graph.size(), 0.0);
    cur[source] = 1.0;
    acc[source] = 1.0;
    for (std::size_t step = 0; step < k; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (StateId i = kFirstTransient; i < graph.size(); ++i) {
            if (cur[i] == 0.0) continue;
            for (const auto& e : graph.row(i)) next[e.state] += cur[i] * e.p;
        }
        std::swap(cur, next);
        for (StateId j = 0; j < graph.size(); ++j) acc[j] += cur[j];
    }
    for (StateId j = 0; j < acc.size(); ++j) acc[j] *= is_absorbing(j) ? 0.0 : graph.success_probability(j);
    return acc;
}

bool predict_rewritability(const MarkovGraph& graph, StateId source, const SolverOptions& options) {
    const auto phi = phi_row(graph, source, options);
    const double own = phi[source];
    for (StateId j = kFirstTransient; j < phi.size(); ++j) {
        if (j != source && phi[j] > own + options.tie_tolerance) return true;
    }
    return false;
}

std::vector<RewriteCandidate> top_rewrites(const MarkovGraph& graph, StateId source, std::size_t k,
                                           std::uint64_t min_support, const SolverOptions& options) {
    const auto phi = phi_row(graph, source, options);
    // phi[t] > own >= 0 implies N(source, t) > 0, so reachability is implied.
    const double own = phi[source];
    std::vector<RewriteCandidate> out;
    for (StateId t = kFirstTransient; t < phi.size(); ++t) {
        if (t == source || !(phi[t] > own + options.tie_tolerance)) continue;
        if (graph.support(source, t) < min_support) continue;
        out.push_back({source, t, phi[t]});
    }
    std::sort(out.begin(), out.end(), [](const RewriteCandidate& a, const RewriteCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.target < b.target;
    });
    if (k > 0 && out.size() > k) out.resize(k);
    return out;
}

}  // namespace mqr

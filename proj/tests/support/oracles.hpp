#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "mqr/markov_graph.hpp"

namespace mqr::fixtures {

// Dense (I - Q)^-1 over all states; rows/cols of absorbing states are zero.
inline Eigen::MatrixXd dense_fundamental(const MarkovGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const Eigen::Index t = n - kFirstTransient;
    Eigen::MatrixXd iq = Eigen::MatrixXd::Identity(t, t);
    for (StateId i = kFirstTransient; i < g.size(); ++i)
        for (StateId j = kFirstTransient; j < g.size(); ++j) iq(i - 2, j - 2) -= g.probability(i, j);
    Eigen::MatrixXd inv = iq.inverse();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    out.bottomRightCorner(t, t) = inv;
    return out;
}

// Phi(i, j) = S(j, +) * N(i, j) from the dense oracle.
inline std::vector<double> dense_phi_row(const MarkovGraph& g, StateId i) {
    const auto n = dense_fundamental(g);
    std::vector<double> out(g.size(), 0.0);
    for (StateId j = kFirstTransient; j < g.size(); ++j) out[j] = n(i, j) * g.success_probability(j);
    return out;
}

inline std::vector<Hypothesis> numbered_states(std::size_t n) {
    std::vector<Hypothesis> hs;
    for (std::size_t k = 0; k < n; ++k) hs.emplace_back("D", "S" + std::to_string(10 + k));
    return hs;
}

// Random absorbing graph: every transient state has at least one absorbing
// edge so every row reaches absorption.
inline GraphData random_graph(std::size_t transient, std::mt19937_64& rng, double density = 0.5) {
    GraphData d;
    d.mode = GraphMode::Unrolling;
    d.states = StateSpace(numbered_states(transient));
    std::uniform_int_distribution<int> count(1, 9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (StateId i = kFirstTransient; i < d.states.size(); ++i) {
        d.counts[{i, static_cast<StateId>(rng() % 2)}] = static_cast<std::uint64_t>(count(rng));
        for (StateId j = kFirstTransient; j < d.states.size(); ++j)
            if (u(rng) < density) d.counts[{i, j}] = static_cast<std::uint64_t>(count(rng));
    }
    return d;
}

}  // namespace mqr::fixtures

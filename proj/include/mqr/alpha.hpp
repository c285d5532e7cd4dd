#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mqr/markov_graph.hpp"
#include "mqr/stats.hpp"

namespace mqr {

struct PopulationCounts {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;

    std::uint64_t failures() const noexcept { return trials - successes; }
    PopulationCounts& operator+=(const PopulationCounts& o) noexcept {
        successes += o.successes;
        trials += o.trials;
        return *this;
    }
};

/// Outcomes of a source hypothesis when left alone (X) and when rewritten (W).
struct TierEvidence {
    PopulationCounts not_rewritten;
    PopulationCounts rewritten;
};

struct AlphaGate {
    double eta = kDefaultEta;
    double confidence = kDefaultConfidence;
    double prior_a = 1.0;
    double prior_b = 1.0;
    double quad_eps = kDefaultQuadEps;
    /// Maps the entity tier from [0, 0.5] onto [0, 1] by doubling.
    bool rescale_entity = false;
};

struct AlphaChoice {
    double alpha = 0.0;
    AlphaTier tier = AlphaTier::None;
};

/// Both Wilson widths strictly below eta.
bool passes_gate(const TierEvidence& evidence, const AlphaGate& gate);

/// P(p_W > p_X) under Beta posteriors of the two populations.
double superiority(const TierEvidence& evidence, const AlphaGate& gate);

/// max_i |values_i - 0.5|. Throws ArgumentError on an empty list or values
/// outside [0, 1].
double alpha_entity(const std::vector<double>& values);

/// Customer tier, then global tier, each used only if it passes the gate;
/// otherwise the entity tier built from per-entity superiority values.
/// Throws ConfigError when no tier can answer.
AlphaChoice select_alpha(const std::optional<TierEvidence>& customer, const std::optional<TierEvidence>& global,
                         const std::optional<std::vector<double>>& entity_values, const AlphaGate& gate = {});

}  // namespace mqr

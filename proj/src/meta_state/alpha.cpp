#include "mqr/alpha.hpp"

#include <algorithm>
#include <cmath>

#include "mqr/error.hpp"

namespace mqr {

bool passes_gate(const TierEvidence& evidence, const AlphaGate& gate) {
    const auto& x = evidence.not_rewritten;
    const auto& w = evidence.rewritten;
    return wilson_interval(x.successes, x.trials, gate.confidence).width() < gate.eta &&
           wilson_interval(w.successes, w.trials, gate.confidence).width() < gate.eta;
}

double superiority(const TierEvidence& evidence, const AlphaGate& gate) {
    const auto& x = evidence.not_rewritten;
    const auto& w = evidence.rewritten;
    return beta_superiority(BetaEvidence::from_counts(x.successes, x.failures(), gate.prior_a, gate.prior_b),
                            BetaEvidence::from_counts(w.successes, w.failures(), gate.prior_a, gate.prior_b),
                            gate.quad_eps);
}

double alpha_entity(const std::vector<double>& values) {
    if (values.empty()) throw ArgumentError("alpha_entity needs at least one value");
    double best = 0.0;
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("entity superiority outside [0, 1]");
        best = std::max(best, std::abs(v - 0.5));
    }
    return best;
}

AlphaChoice select_alpha(const std::optional<TierEvidence>& customer, const std::optional<TierEvidence>& global,
                         const std::optional<std::vector<double>>& entity_values, const AlphaGate& gate) {
    if (customer && passes_gate(*customer, gate)) return {superiority(*customer, gate), AlphaTier::Customer};
    if (global && passes_gate(*global, gate)) return {superiority(*global, gate), AlphaTier::Global};
    if (entity_values && !entity_values->empty()) {
        const double a = alpha_entity(*entity_values);
        return {gate.rescale_entity ? std::min(1.0, 2.0 * a) : a, AlphaTier::Entity};
    }
    throw ConfigError("no alpha tier available");
}

}  // namespace mqr

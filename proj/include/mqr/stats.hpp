#pragma once

#include <cstdint>

namespace mqr {

inline constexpr double kDefaultConfidence = 0.89;
inline constexpr double kDefaultEta = 0.588;
inline constexpr double kDefaultQuadEps = 1e-8;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double width() const noexcept { return hi - lo; }
};

/// Two-sided standard normal critical value for the given confidence level.
double normal_critical_value(double confidence);

/// Wilson score interval for a binomial proportion. n = 0 gives (0, 1).
/// Throws ArgumentError if successes > n or confidence is outside (0, 1).
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double confidence = kDefaultConfidence);

/// Pseudo-counts of a Beta posterior over a success probability.
struct BetaEvidence {
    double a = 1.0;
    double b = 1.0;

    /// Beta(prior_a + successes, prior_b + failures).
    static BetaEvidence from_counts(std::uint64_t successes, std::uint64_t failures, double prior_a = 1.0,
                                    double prior_b = 1.0);
};

/// P(p_W > p_X) for p_X ~ Beta(x.a, x.b), p_W ~ Beta(w.a, w.b):
///
///   1 - integral_0^1 beta_pdf(p; x.a, x.b) * I_p(w.a, w.b) dp
///
/// evaluated by adaptive Gauss-Kronrod quadrature, with the interval split
/// around the bulk of both densities so that concentrated posteriors are
/// resolved. Throws ArgumentError for non-positive pseudo-counts and
/// NumericError if the integrand is not finite.
double beta_superiority(const BetaEvidence& x, const BetaEvidence& w, double quad_eps = kDefaultQuadEps);

}  // namespace mqr

#include "mqr/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "mqr/error.hpp"

namespace mqr {

double normal_critical_value(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw ArgumentError("confidence must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - (1.0 - confidence) / 2.0);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double confidence) {
    if (successes > n) throw ArgumentError("wilson_interval: successes exceed trials");
    const double z = normal_critical_value(confidence);
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
    // The closed form reaches the bounds exactly at the extremes; pin them so
    // rounding cannot leave 1 - 1e-16.
    if (successes == 0) out.lo = 0.0;
    if (successes == n) out.hi = 1.0;
    return out;
}

BetaEvidence BetaEvidence::from_counts(std::uint64_t successes, std::uint64_t failures, double prior_a,
                                       double prior_b) {
    return {prior_a + static_cast<double>(successes), prior_b + static_cast<double>(failures)};
}

namespace {

void add_bulk_points(std::vector<double>& pts, const BetaEvidence& e) {
    const double s = e.a + e.b;
    const double mean = e.a / s;
    const double sd = std::sqrt(e.a * e.b / (s * s * (s + 1.0)));
    for (double k : {-12.0, -8.0, -5.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0}) {
        const double p = mean + k * sd;
        if (p > 0.0 && p < 1.0) pts.push_back(p);
    }
}

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;

// Bisects until the Kronrod error estimate of each piece is below its share
// of the absolute budget.
template <class F>
double integrate_abs(const F& f, double a, double b, double tol, int depth) {
    double err = 0.0;
    const double v = Quadrature::integrate(f, a, b, 0, 0.0, &err);
    // Past a few ulps of the piece the estimate is rounding noise.
    if (err <= tol || err <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(v) || depth == 0) return v;
    const double mid = 0.5 * (a + b);
    return integrate_abs(f, a, mid, 0.5 * tol, depth - 1) + integrate_abs(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace

double beta_superiority(const BetaEvidence& x, const BetaEvidence& w, double quad_eps) {
    for (double v : {x.a, x.b, w.a, w.b}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("beta pseudo-counts must be positive and finite");
    }
    if (!(quad_eps > 0.0)) throw ArgumentError("quad_eps must be positive");

    auto integrand = [&](double p) {
        const double v = boost::math::ibeta_derivative(x.a, x.b, p) * boost::math::ibeta(w.a, w.b, p);
        if (!std::isfinite(v)) throw NumericError("non-finite beta integrand");
        return v;
    };

    std::vector<double> pts{0.0, 1.0};
    add_bulk_points(pts, x);
    add_bulk_points(pts, w);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double piece_tol = 0.1 * quad_eps / static_cast<double>(pts.size());
    double integral = 0.0;
    for (std::size_t k = 1; k + 2 < pts.size(); ++k)
        integral += integrate_abs(integrand, pts[k], pts[k + 1], piece_tol, 30);

    // The posterior means are always interior points, so pts has at least
    // three entries. End pieces go through p = c t^m (mirrored at 1) with m >= 1/shape, so
    // a density that is singular at the boundary becomes bounded.
    const double left = pts[1], right = pts[pts.size() - 2];
    const double m0 = std::max(1.0, std::ceil(1.0 / x.a));
    const double m1 = std::max(1.0, std::ceil(1.0 / x.b));
    auto head = [&](double t) {
        const double p = left * std::pow(t, m0);
        return p > 0.0 ? integrand(p) * left * m0 * std::pow(t, m0 - 1.0) : 0.0;
    };
    // Written in q = 1 - p so the density is not evaluated at a rounded p.
    auto tail = [&](double t) {
        const double q = (1.0 - right) * std::pow(t, m1);
        if (!(q > 0.0)) return 0.0;
        const double v = boost::math::ibeta_derivative(x.b, x.a, q) * boost::math::ibetac(w.b, w.a, q);
        if (!std::isfinite(v)) throw NumericError("non-finite beta integrand");
        return v * (1.0 - right) * m1 * std::pow(t, m1 - 1.0);
    };
    integral += integrate_abs(head, 0.0, 1.0, piece_tol, 30);
    integral += integrate_abs(tail, 0.0, 1.0, piece_tol, 30);
    if (!std::isfinite(integral)) throw NumericError("non-finite beta superiority integral");
    return std::clamp(1.0 - integral, 0.0, 1.0);
}

}  // namespace mqr

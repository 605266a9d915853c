#pragma once

// Moment generating function of the absorption time T from initial state 1:
//
//   E_1[e^{theta T}] = (a - theta)/a - 1 / ((a/q) e^{-a/q} bargamma(-theta/q, -a/q)),
//
// finite exactly for theta < theta* (the denominator's bargamma factor has
// its root at theta*, producing the simple pole that defines the survival
// rate).  The special case theta = 0 gives 1, and the derivative at 0 is the
// mean absorption time (e^{a/q} - 1)/a.
//
// Near theta = 0 the bargamma factor individually blows up (pole at s = 0)
// while the MGF stays regular, so the formula is organized around
// bargamma(s, x) = 1/s + R(s, x) with the regular part R summed separately;
// no pole guard is needed on this path.

#include <cmath>
#include <string>

#include "mminf/errors.hpp"
#include "mminf/model.hpp"
#include "mminf/solver.hpp"
#include "mminf/special.hpp"

namespace mminf {

struct MgfPoint {
    double theta = 0.0;
    double value = 0.0;
    double abs_error_estimate = 0.0;
};

/// Evaluation closer to theta* than this (in units of q) is refused: the
/// result would be pure cancellation noise against the pole.
inline constexpr double kMgfSingularityGuard = 1e-9;

namespace detail {

/// Regular part of bargamma at s: R(s, x) = sum_{k>=1} (-x)^k / ((k+s) k!),
/// so bargamma(s, x) = 1/s + R(s, x).  Valid for any s > -1 (including s in
/// the pole guard band around 0, which is the point of splitting it off).
inline CoreResult bargamma_regular_part(long double s, long double x, long double tol) {
    const long double ax = std::fabs(x);
    long double term = -x / (1.0L + s);  // k = 1
    long double sum = term, comp = 0.0L;
    long double sum_abs = std::fabs(term);
    long double pk = ax;  // |x|^k / k!
    int k = 1;
    while (true) {
        const long double pk1 = pk * ax / (k + 1.0L);
        if (ax < k + 2.0L) {
            const long double d = min_abs_shift(s, k + 1);
            const long double bound = pk1 / (d * (1.0L - ax / (k + 2.0L)));
            if (bound <= tol) return CoreResult{sum, bound + 1e-19L * sum_abs, k};
        }
        if (k + 1 >= kMaxSeriesTerms)
            throw convergence_error("bargamma regular part: tolerance not reached");
        term *= (-x) / (k + 1.0L) * ((k + s) / (k + 1.0L + s));
        pk = pk1;
        ++k;
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        sum_abs += std::fabs(term);
    }
}

}  // namespace detail

/// E_1[T] = (e^{a/q} - 1)/a, exact closed form.
inline double mean_absorption_time(const ModelParams& p) {
    make_params(p.a, p.q);
    if (p.a / p.q > kMaxAbsArgument)
        throw domain_error("mean_absorption_time: a/q exceeds the overflow bound 700");
    return std::expm1(p.a / p.q) / p.a;
}

/// MGF at theta given a precomputed survival rate theta_star.
/// Domain: theta in (-inf, theta* - 1e-9 q); theta >= theta* is a domain
/// error, the guard band below it a near_singularity_error.
inline MgfPoint mgf_absorption_with_rate(const ModelParams& p, double theta,
                                         double theta_star, double tol = 1e-12) {
    make_params(p.a, p.q);
    if (!std::isfinite(theta)) throw parameter_error("theta must be finite");
    if (!(tol > 0.0)) throw parameter_error("tol must be > 0");
    if (theta >= theta_star)
        throw domain_error("mgf_absorption: theta = " + std::to_string(theta) +
                           " is at or beyond the survival rate theta* = " +
                           std::to_string(theta_star) + "; the transform diverges there");
    if (theta > theta_star - kMgfSingularityGuard * p.q)
        throw near_singularity_error(
            "mgf_absorption: theta is within 1e-9 q of theta*; the value would be "
            "cancellation noise");
    if (theta == 0.0) return MgfPoint{0.0, 1.0, 0.0};

    const long double alpha = static_cast<long double>(p.a) / p.q;
    if (alpha > kMaxAbsArgument)
        throw domain_error("mgf_absorption: a/q exceeds the overflow bound 700");
    const long double u = static_cast<long double>(theta) / p.q;
    const long double s = -u;

    detail::CoreResult reg =
        detail::bargamma_regular_part(s, -alpha, static_cast<long double>(tol));
    const long double inv_s = 1.0L / s;
    const long double gbar = inv_s + reg.value;
    const long double pref = alpha * std::exp(-alpha);
    const long double denom = pref * gbar;

    const long double value = (alpha - u) / alpha - 1.0L / denom;

    // Error budget: series truncation plus cancellation round-off in
    // 1/s + R, amplified by d(1/D)/dD = 1/D^2.
    const long double gbar_err =
        reg.abs_error + 1e-19L * (std::fabs(inv_s) + std::fabs(reg.value));
    const long double err = pref * gbar_err / (denom * denom) + 1e-18L * std::fabs(value);

    return MgfPoint{theta, static_cast<double>(value), static_cast<double>(err)};
}

/// MGF at theta; solves for theta* internally (series route, tol 1e-12).
inline MgfPoint mgf_absorption(const ModelParams& p, double theta, double tol = 1e-12) {
    const SurvivalRate rate = solve_theta_star_series(p, 1e-12);
    return mgf_absorption_with_rate(p, theta, rate.theta, tol);
}

}  // namespace mminf

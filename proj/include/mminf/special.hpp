#pragma once

// The two special functions at the heart of the survival-rate problem, plus
// the integral identity linking them.
//
//   bargamma(s, x)   = sum_{k>=0} (-x)^k / ((k+s) k!)
//                    = x^{-s} * gamma_lower(s, x) when s > 0, x > 0,
//                      and the meromorphic continuation elsewhere
//                      (simple poles at s = 0, -1, -2, ...).
//
//   big_f(s, x)      = -x * Integral_0^1 (1-y)^s e^{xy} dy   (s > -1)
//
//   identity:  big_f(s, x) = 1 - s e^x bargamma(s, x)
//
// The identity is the certification backbone: bargamma is summed as a
// series, big_f is integrated by quadrature, and their agreement is an
// end-to-end check of both code paths.  Residuals are formed in extended
// precision: near s ~ -0.75, x ~ 10 both sides reach ~4.5e5, so a double
// subtraction alone would eat the 1e-10 certification budget.

#include <cmath>
#include <string>

#include "mminf/errors.hpp"
#include "mminf/quadrature.hpp"

namespace mminf {

/// Value with an a-posteriori absolute error estimate and work counter.
struct EvalResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int terms_or_nodes_used = 0;  // series terms or quadrature nodes
};

// Evaluation guards (see README "Numerical policies").
inline constexpr double kPoleGuard = 1e-8;      // min distance from a pole of bargamma
inline constexpr int kMaxSeriesTerms = 10000;   // series term budget
inline constexpr double kMaxAbsArgument = 700;  // |x| cap: e^|x| must stay representable

namespace detail {

struct CoreResult {
    long double value = 0.0L;
    long double abs_error = 0.0L;
    int work = 0;
};

/// Distance from s to the nearest pole of bargamma (the nonpositive integers).
inline long double pole_distance(long double s) {
    if (s >= 0.0L) return s;  // nearest pole is 0
    const long double j = std::nearbyint(-s);
    return std::fabs(s + j);
}

/// min over integers j >= j_lo of |j + s|.
inline long double min_abs_shift(long double s, long j_lo) {
    long double best = std::fabs(static_cast<long double>(j_lo) + s);
    const long double jstar = -s;
    const long j1 = static_cast<long>(std::floor(jstar));
    for (long j : {j1, j1 + 1}) {
        if (j >= j_lo) best = std::min(best, std::fabs(static_cast<long double>(j) + s));
    }
    return best;
}

/// Series evaluation of bargamma with a rigorous tail bound.
///
/// Terms follow the recurrence t_{k+1} = t_k * (-x)/(k+1) * (k+s)/(k+1+s),
/// t_0 = 1/s.  After summing through index k the remainder is bounded by
///   |x|^{k+1}/(k+1)!  *  1 / (d * (1 - |x|/(k+2))),   d = min_{j>k} |j+s|,
/// valid once k+2 > |x|.  Summation is compensated, in long double.
inline CoreResult bargamma_core(long double s, long double x, long double tol) {
    const long double ax = std::fabs(x);
    long double term = 1.0L / s;  // k = 0
    long double sum = term, comp = 0.0L;
    long double sum_abs = std::fabs(term);
    long double p = 1.0L;  // |x|^k / k!
    int k = 0;

    while (true) {
        const long double pk1 = p * ax / (k + 1.0L);
        if (ax < k + 2.0L) {
            const long double d = min_abs_shift(s, k + 1);
            const long double bound = pk1 / (d * (1.0L - ax / (k + 2.0L)));
            if (bound <= tol) {
                const long double roundoff = 1e-19L * sum_abs;
                return CoreResult{sum, bound + roundoff, k + 1};
            }
        }
        if (k + 1 >= kMaxSeriesTerms)
            throw convergence_error("bargamma series: tolerance " + std::to_string((double)tol) +
                                    " not reached within " + std::to_string(kMaxSeriesTerms) +
                                    " terms");
        term *= (-x) / (k + 1.0L) * ((k + s) / (k + 1.0L + s));
        p = pk1;
        ++k;
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        sum_abs += std::fabs(term);
    }
}

/// Quadrature evaluation of big_f.  For s < 0 the endpoint singularity of
/// (1-y)^s at y = 1 is removed by u = (1-y)^{s+1}:
///   big_f(s,x) = -x e^x/(s+1) * Integral_0^1 e^{-x u^{1/(s+1)}} du.
/// For s >= 0 the direct integrand is already continuous.
inline CoreResult big_f_core(long double s, long double x, long double tol) {
    if (s < 0.0L) {
        const long double pref = -x * std::exp(x) / (s + 1.0L);
        const long double qtol = tol / std::max(1.0L, std::fabs(pref));
        auto integrand = [s, x](long double u) {
            return std::exp(-x * std::pow(u, 1.0L / (s + 1.0L)));
        };
        // For s near -1 the integrand departs from 1 only in a layer of
        // width O(s+1) at u = 1; seed panels so the rule samples it.
        QuadResult r = integrate_adaptive(integrand, 0.0L, 1.0L, qtol,
                                          edge_layer_cuts(0.0L, 1.0L, s + 1.0L));
        return CoreResult{pref * r.value, std::fabs(pref) * r.abs_error, r.nodes_used};
    }
    const long double qtol = tol / std::max(1.0L, std::fabs(x));
    auto integrand = [s, x](long double y) {
        return std::pow(1.0L - y, s) * std::exp(x * y);
    };
    QuadResult r = integrate_adaptive(integrand, 0.0L, 1.0L, qtol);
    return CoreResult{-x * r.value, std::fabs(x) * r.abs_error, r.nodes_used};
}

inline void check_common(double x, double tol) {
    if (!std::isfinite(x))
        throw parameter_error("argument x must be finite");
    if (std::fabs(x) > kMaxAbsArgument)
        throw domain_error("argument |x| exceeds the supported bound " +
                           std::to_string(kMaxAbsArgument) + " (got " + std::to_string(x) + ")");
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw parameter_error("tolerance must be finite and > 0");
}

}  // namespace detail

/// bargamma(s, x) by series summation.  s may be any real kept at least
/// kPoleGuard away from the poles {0, -1, -2, ...}; |x| <= 700.
inline EvalResult bargamma_series(double s, double x, double tol) {
    detail::check_common(x, tol);
    if (!std::isfinite(s)) throw parameter_error("argument s must be finite");
    if (detail::pole_distance(s) < kPoleGuard)
        throw domain_error("bargamma: s = " + std::to_string(s) +
                           " is within " + std::to_string(kPoleGuard) +
                           " of a pole (nonpositive integer)");
    detail::CoreResult r = detail::bargamma_core(s, x, static_cast<long double>(tol));
    return EvalResult{static_cast<double>(r.value), static_cast<double>(r.abs_error), r.work};
}

/// x^{-s} gamma_lower(s, x) for s > 0, x > 0, by quadrature with the
/// substitution t = x u^{1/s} (absorbs the t^{s-1} endpoint singularity):
///   = (1/s) * Integral_0^1 e^{-x u^{1/s}} du.
inline EvalResult gamma_lower_scaled(double s, double x, double tol) {
    detail::check_common(x, tol);
    if (!std::isfinite(s)) throw parameter_error("argument s must be finite");
    if (s <= 0.0) throw domain_error("gamma_lower_scaled requires s > 0, got " + std::to_string(s));
    if (x <= 0.0) throw domain_error("gamma_lower_scaled requires x > 0, got " + std::to_string(x));
    const long double ls = s, lx = x;
    auto integrand = [ls, lx](long double u) {
        return std::exp(-lx * std::pow(u, 1.0L / ls));
    };
    const long double qtol = static_cast<long double>(tol) * std::min(1.0L, ls);
    // Small s confines the integrand's variation to a layer of width O(s)
    // at u = 1; seed panels there so it is not skipped.
    detail::QuadResult r = detail::integrate_adaptive(integrand, 0.0L, 1.0L, qtol,
                                                      detail::edge_layer_cuts(0.0L, 1.0L, ls));
    return EvalResult{static_cast<double>(r.value / ls),
                      static_cast<double>(r.abs_error / ls), r.nodes_used};
}

/// big_f(s, x) for s > -1, |x| <= 700.
inline EvalResult big_f(double s, double x, double tol) {
    detail::check_common(x, tol);
    if (!std::isfinite(s)) throw parameter_error("argument s must be finite");
    if (s <= -1.0)
        throw domain_error("big_f requires s > -1, got " + std::to_string(s));
    detail::CoreResult r = detail::big_f_core(s, x, static_cast<long double>(tol));
    return EvalResult{static_cast<double>(r.value), static_cast<double>(r.abs_error), r.work};
}

/// | big_f(s,x) - (1 - s e^x bargamma(s,x)) |, the two sides evaluated by
/// their independent code paths (quadrature vs series) and differenced in
/// extended precision before rounding.
inline double identity_residual(double s, double x, double tol) {
    detail::check_common(x, tol);
    if (!std::isfinite(s)) throw parameter_error("argument s must be finite");
    if (s <= -1.0)
        throw domain_error("identity_residual requires s > -1, got " + std::to_string(s));
    if (std::fabs(s) < kPoleGuard)
        throw domain_error("identity_residual: s is within the pole guard of 0");

    const long double ls = s, lx = x, ltol = tol;
    detail::CoreResult lhs = detail::big_f_core(ls, lx, ltol);

    const long double scale = std::max(1.0L, std::fabs(ls) * std::exp(lx));
    long double gtol = ltol / scale;
    gtol = std::max(gtol, 1e-17L);
    detail::CoreResult g = detail::bargamma_core(ls, lx, gtol);

    const long double rhs = 1.0L - ls * std::exp(lx) * g.value;
    return static_cast<double>(std::fabs(lhs.value - rhs));
}

}  // namespace mminf

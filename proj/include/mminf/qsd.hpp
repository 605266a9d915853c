#pragma once

// Quasi-stationary distributions (QSD) of the absorbed M/M/inf queue.
//
// For 0 < theta <= theta* the stationarity equations have a probability
// solution nu on {1, 2, ...} determined by the three-term recurrence
//
//   nu(1)   = theta / q
//   nu(2)   = nu(1) (a + q - theta) / (2 q)
//   nu(j+1) = ((a + j q - theta) nu(j) - a nu(j-1)) / ((j+1) q)
//
// which sums to 1 automatically because theta = q nu(1).  The minimal QSD
// (theta = theta*, the Yaglom limit) decays faster than geometrically; for
// theta < theta* the tail is only polynomial, k^{-1-theta/q}.  A theta above
// theta* drives some entry negative, which is how the recurrence detects it.
//
// The same distribution is reachable through its generating function
//
//  g(s) = 1 + (1-s)^{theta/q} e^{as/q} (-1 + (a/q) Integral_0^s (1-x)^{-theta/q} e^{-ax/q} dx),
//
// either pointwise by quadrature or as Taylor coefficients; the recurrence
// and the coefficient route cross-check each other.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mminf/errors.hpp"
#include "mminf/model.hpp"
#include "mminf/quadrature.hpp"
#include "mminf/solver.hpp"

namespace mminf {

inline constexpr long kMaxQsdEntries = 100000;   // recurrence budget
inline constexpr long kMaxGfCoefficients = 10000;  // O(n^2) coefficient budget

struct QsdVector {
    double theta = 0.0;
    std::vector<double> probs;       // probs[j-1] = nu(j), j = 1..truncation_n
    long truncation_n = 0;
    double tail_mass_estimate = 0.0;  // geometric-ratio estimate of the dropped mass
};

struct GeneratingFunctionPoint {
    double s = 0.0;
    double value = 0.0;
    double abs_error_estimate = 0.0;
};

namespace detail {

inline double geometric_tail(const std::vector<double>& nu) {
    const std::size_t n = nu.size();
    if (n < 2 || nu[n - 1] <= 0.0 || nu[n - 2] <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    double r = nu[n - 1] / nu[n - 2];
    r = std::min(r, 0.999);
    return nu[n - 1] * r / (1.0 - r);
}

}  // namespace detail

/// Stationarity recurrence, truncated at the first N >= 2 with
/// nu(N) < eps_tail and nu(N) < nu(N-1).  Entries below -eps_tail throw
/// invalid_theta_error (theta exceeds theta*); a negative within eps_tail of
/// zero is truncation noise and terminates the expansion instead.
inline QsdVector qsd_recurrence(const ModelParams& p, double theta, double eps_tail = 1e-14,
                                long max_n = kMaxQsdEntries) {
    make_params(p.a, p.q);
    if (!(theta > 0.0) || !(theta < p.q))
        throw parameter_error("qsd_recurrence requires 0 < theta < q, got theta = " +
                              std::to_string(theta));
    if (!(eps_tail > 0.0) || !(eps_tail < 1.0))
        throw parameter_error("eps_tail must lie in (0, 1)");
    if (max_n < 2 || max_n > kMaxQsdEntries)
        throw parameter_error("max_n must lie in [2, " + std::to_string(kMaxQsdEntries) + "]");

    const long double alpha = static_cast<long double>(p.a) / p.q;
    const long double u = static_cast<long double>(theta) / p.q;

    std::vector<long double> nu;
    nu.reserve(64);
    nu.push_back(u);
    nu.push_back(u * (alpha + 1.0L - u) / 2.0L);

    auto done = [&](std::size_t n) {
        return nu[n - 1] < static_cast<long double>(eps_tail) && nu[n - 1] < nu[n - 2];
    };

    while (!done(nu.size())) {
        const long j = static_cast<long>(nu.size());  // nu(j) is the last entry
        if (j >= max_n)
            throw convergence_error("qsd_recurrence: tail threshold not reached within " +
                                    std::to_string(max_n) +
                                    " entries (theta far below theta* gives a polynomial "
                                    "tail; raise eps_tail)");
        const long double next =
            ((alpha + j - u) * nu[j - 1] - alpha * nu[j - 2]) / (j + 1.0L);
        if (next < 0.0L) {
            if (std::fabs(next) <= static_cast<long double>(eps_tail)) break;
            throw invalid_theta_error(
                "qsd_recurrence: entry nu(" + std::to_string(j + 1) +
                    ") is negative; theta = " + std::to_string(theta) +
                    " exceeds the survival rate theta*",
                j + 1);
        }
        nu.push_back(next);
    }

    QsdVector out;
    out.theta = theta;
    out.truncation_n = static_cast<long>(nu.size());
    out.probs.reserve(nu.size());
    for (long double v : nu) out.probs.push_back(static_cast<double>(v));
    out.tail_mass_estimate = detail::geometric_tail(out.probs);
    return out;
}

/// Generating function g(s) for s in [0, 1), any 0 < theta < q (also above
/// theta*, where g(s) > 1 near s = 1 witnesses the contradiction).
/// The inner integral uses the substitution v = (1-x)^{1-theta/q}:
///   Integral_0^s = (e^{-alpha}/(1-u)) Integral_{(1-s)^{1-u}}^{1} e^{alpha v^{1/(1-u)}} dv.
inline GeneratingFunctionPoint generating_function(const ModelParams& p, double theta,
                                                   double s, double tol = 1e-12) {
    make_params(p.a, p.q);
    if (!(theta > 0.0) || !(theta < p.q))
        throw parameter_error("generating_function requires 0 < theta < q");
    if (!(s >= 0.0) || !(s < 1.0))
        throw parameter_error("generating_function requires s in [0, 1), got " +
                              std::to_string(s));
    if (!(tol > 0.0)) throw parameter_error("tol must be > 0");
    if (s == 0.0) return GeneratingFunctionPoint{0.0, 0.0, 0.0};

    const long double alpha = static_cast<long double>(p.a) / p.q;
    const long double u = static_cast<long double>(theta) / p.q;
    const long double pw = 1.0L - u;
    const long double ls = s;

    auto integrand = [alpha, pw](long double v) {
        return std::exp(alpha * std::pow(v, 1.0L / pw));
    };
    const long double v_lo = std::pow(1.0L - ls, pw);
    const long double inner_pref = std::exp(-alpha) / pw * alpha;
    const long double outer_pref = std::pow(1.0L - ls, u) * std::exp(alpha * ls);
    const long double qtol =
        static_cast<long double>(tol) / std::max(1.0L, outer_pref * inner_pref);
    // As theta -> q the integrand varies only within O(1-u) of v = 1; seed
    // panels in that layer so the rule cannot miss it.
    detail::QuadResult r = detail::integrate_adaptive(
        integrand, v_lo, 1.0L, qtol, detail::edge_layer_cuts(v_lo, 1.0L, pw));

    const long double value = 1.0L + outer_pref * (-1.0L + inner_pref * r.value);
    const long double err = outer_pref * inner_pref * r.abs_error + 1e-18L;
    return GeneratingFunctionPoint{s, static_cast<double>(value), static_cast<double>(err)};
}

/// First n Taylor coefficients of g around s = 0 (these are nu(1)..nu(n)),
/// by power-series composition:
///   g = 1 + A(s) E(s) (-1 + alpha J(s)),  A = (1-s)^u, E = e^{alpha s},
///   J' = (1-s)^{-u} e^{-alpha s},  J(0) = 0.
/// The constant coefficient cancels to zero exactly.
inline QsdVector qsd_from_gf(const ModelParams& p, double theta, long n) {
    make_params(p.a, p.q);
    if (!(theta > 0.0) || !(theta < p.q))
        throw parameter_error("qsd_from_gf requires 0 < theta < q");
    if (n < 1 || n > kMaxGfCoefficients)
        throw parameter_error("qsd_from_gf: n must lie in [1, " +
                              std::to_string(kMaxGfCoefficients) + "]");

    const std::size_t m = static_cast<std::size_t>(n) + 1;  // coefficients 0..n
    const long double alpha = static_cast<long double>(p.a) / p.q;
    const long double u = static_cast<long double>(theta) / p.q;

    // Binomial series (1-s)^{+-u} and exponentials e^{+-alpha s}.
    std::vector<long double> A(m), B(m), E(m), Em(m);
    A[0] = B[0] = E[0] = Em[0] = 1.0L;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        A[k + 1] = A[k] * (static_cast<long double>(k) - u) / (k + 1.0L);
        B[k + 1] = B[k] * (static_cast<long double>(k) + u) / (k + 1.0L);
        E[k + 1] = E[k] * alpha / (k + 1.0L);
        Em[k + 1] = Em[k] * (-alpha) / (k + 1.0L);
    }

    auto cauchy = [m](const std::vector<long double>& f, const std::vector<long double>& g) {
        std::vector<long double> h(m, 0.0L);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; i + j < m; ++j) h[i + j] += f[i] * g[j];
        return h;
    };

    std::vector<long double> C = cauchy(B, Em);  // J'
    std::vector<long double> J(m, 0.0L);
    for (std::size_t k = 0; k + 1 < m; ++k) J[k + 1] = C[k] / (k + 1.0L);

    std::vector<long double> inner(m, 0.0L);
    inner[0] = -1.0L;
    for (std::size_t k = 1; k < m; ++k) inner[k] = alpha * J[k];

    std::vector<long double> G = cauchy(cauchy(A, E), inner);

    QsdVector out;
    out.theta = theta;
    out.truncation_n = n;
    out.probs.reserve(n);
    for (std::size_t k = 1; k < m; ++k) out.probs.push_back(static_cast<double>(G[k]));
    out.tail_mass_estimate = detail::geometric_tail(out.probs);
    return out;
}

/// The Yaglom limit: minimal QSD at theta = theta* (series root).
inline QsdVector yaglom_reference(const ModelParams& p, double eps_tail = 1e-14,
                                  double solve_tol = 1e-12) {
    SurvivalRate rate = solve_theta_star_series(p, solve_tol);
    return qsd_recurrence(p, rate.theta, eps_tail);
}

}  // namespace mminf

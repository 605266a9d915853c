#pragma once

// The exponential survival rate theta* of the absorbed M/M/inf queue, by two
// independent characterizations:
//
//   series route:    theta* is the unique root in (0, q) of
//                    f(theta) = bargamma(-theta/q, -a/q)
//
//   integral route:  theta* is the unique fixed point in (0, q) of
//                    map(theta) = (a/q) Integral_0^1 (1-x)^{-theta/q} e^{-ax/q} dx = 1,
//                    strictly increasing in theta.
//
// Both are solved by a bracketed hybrid (false position alternated with
// bisection) on the normalized variable u = theta/q in (0, 1).  Agreement of
// the two roots is the library's cross-certification of its series and
// quadrature engines.

#include <cmath>
#include <string>

#include "mminf/errors.hpp"
#include "mminf/model.hpp"
#include "mminf/special.hpp"

namespace mminf {

enum class SolveMethod { series_root, integral_fixed_point };

struct SurvivalRate {
    double theta = 0.0;          // the computed rate, original time units
    SolveMethod method = SolveMethod::series_root;
    double residual = 0.0;       // |characteristic| at the returned theta
    double bracket_width = 0.0;  // final bracket width, original time units
};

struct MonotoneMapValue {
    double theta = 0.0;
    double value = 0.0;  // map(theta); equals 1 - e^{-a/q} at theta = 0
};

struct EquivalenceReport {
    SurvivalRate series;
    SurvivalRate integral;
    double difference = 0.0;  // series.theta - integral.theta
    double tol = 0.0;
    bool pass = false;
};

namespace detail {

inline constexpr double kBracketMargin = 1e-6;  // initial offset from u in {0,1}
inline constexpr int kMaxSolveIterations = 200;

/// map(theta) on the normalized model (q = 1), u = theta in [0, 1).
/// The substitution v = (1-x)^{1-u} removes the endpoint singularity:
///   map(u) = (alpha e^{-alpha} / (1-u)) * Integral_0^1 e^{alpha v^{1/(1-u)}} dv.
inline CoreResult monotone_map_core(long double alpha, long double u, long double tol) {
    const long double p = 1.0L - u;
    const long double pref = alpha * std::exp(-alpha) / p;
    auto integrand = [alpha, p](long double v) {
        return std::exp(alpha * std::pow(v, 1.0L / p));
    };
    // The map is pref * integral, so the integral may be loose by tol/pref.
    // When that lands below the quadrature's round-off floor (large alpha
    // makes pref tiny against an integral of size ~e^alpha), the engine
    // stops at the floor and reports the achieved error.
    const long double qtol = tol / pref;
    // As u -> 1 the integrand flattens to 1 except in a layer of width O(p)
    // at v = 1 that holds essentially the whole excess mass; seed panels
    // there or a single rule application never samples it.
    QuadResult r = integrate_adaptive(integrand, 0.0L, 1.0L, qtol,
                                      edge_layer_cuts(0.0L, 1.0L, p));
    return CoreResult{pref * r.value, pref * r.abs_error, r.nodes_used};
}

/// Bracketed root refinement: false position alternated with bisection.
/// Requires f(lo) < 0 < f(hi); stops when the bracket is narrower than xtol.
struct RootEstimate {
    long double root, froot, width;
    int evals;
};

template <class F>
RootEstimate refine_root(F&& f, long double lo, long double hi, long double flo,
                         long double fhi, long double xtol) {
    int evals = 0;
    for (int it = 0; hi - lo > xtol; ++it) {
        if (it >= kMaxSolveIterations)
            throw convergence_error("root refinement: bracket did not reach tolerance");
        long double mid;
        if (it % 2 == 0) {
            mid = 0.5L * (lo + hi);
        } else {
            mid = lo - flo * (hi - lo) / (fhi - flo);
            const long double w = hi - lo;
            mid = std::min(std::max(mid, lo + 0.01L * w), hi - 0.01L * w);
        }
        const long double fm = f(mid);
        ++evals;
        if (fm == 0.0L) {
            return RootEstimate{mid, 0.0L, 0.0L, evals};
        } else if (fm < 0.0L) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    const long double root = 0.5L * (lo + hi);
    const long double fr = f(root);
    return RootEstimate{root, fr, hi - lo, evals + 1};
}

}  // namespace detail

/// bargamma(-theta/q, -a/q): negative below theta*, positive above.
/// Requires 0 < theta < q with theta/q outside the pole guard.
inline double series_characteristic(const ModelParams& p, double theta, double tol = 1e-13) {
    make_params(p.a, p.q);
    if (!(theta > 0.0) || !(theta < p.q))
        throw parameter_error("series_characteristic requires 0 < theta < q, got theta = " +
                              std::to_string(theta));
    return bargamma_series(-theta / p.q, -p.a / p.q, tol).value;
}

/// map(theta) for 0 <= theta < q, strictly increasing in theta.
inline MonotoneMapValue integral_characteristic(const ModelParams& p, double theta,
                                                double tol = 1e-13) {
    make_params(p.a, p.q);
    if (!(theta >= 0.0) || !(theta < p.q))
        throw parameter_error("integral_characteristic requires 0 <= theta < q, got theta = " +
                              std::to_string(theta));
    detail::CoreResult r = detail::monotone_map_core(
        static_cast<long double>(p.a) / p.q, static_cast<long double>(theta) / p.q,
        static_cast<long double>(tol));
    return MonotoneMapValue{theta, static_cast<double>(r.value)};
}

/// theta* as the root of the series characteristic.  tol is an absolute
/// tolerance on the normalized root theta*/q.
inline SurvivalRate solve_theta_star_series(const ModelParams& p, double tol = 1e-12) {
    make_params(p.a, p.q);
    if (!(tol > 0.0) || !std::isfinite(tol)) throw parameter_error("tol must be finite and > 0");
    const long double alpha = static_cast<long double>(p.a) / p.q;
    const long double eval_tol = std::min(1e-13L, static_cast<long double>(tol));
    auto f = [alpha, eval_tol](long double u) {
        return detail::bargamma_core(-u, -alpha, eval_tol).value;
    };

    long double hi = 1.0L - detail::kBracketMargin;
    long double fhi = f(hi);
    if (!(fhi > 0.0L))
        throw bracket_error("series solve: characteristic not positive at theta = (1-1e-6) q");

    // The root can sit far below the default margin when a/q is large
    // (theta*/q ~ 4e-8 already at a/q = 20), so shrink the lower end
    // geometrically.  The floor keeps s = -u clear of the pole guard.
    const long double floor_u = 1.5L * kPoleGuard;
    long double lo = detail::kBracketMargin;
    long double flo = f(lo);
    while (flo >= 0.0L) {
        if (lo <= floor_u)
            throw bracket_error(
                "series solve: root lies below the evaluable range theta/q > 1.5e-8 "
                "(a/q too large)");
        hi = lo;
        fhi = flo;
        lo = std::max(0.1L * lo, floor_u);
        flo = f(lo);
    }

    auto out = detail::refine_root(f, lo, hi, flo, fhi,
                                   static_cast<long double>(tol));
    return SurvivalRate{static_cast<double>(out.root * p.q), SolveMethod::series_root,
                        static_cast<double>(std::fabs(out.froot)),
                        static_cast<double>(out.width * p.q)};
}

/// theta* as the fixed point of the monotone map.  tol is an absolute
/// tolerance on the normalized root theta*/q.
inline SurvivalRate solve_theta_star_integral(const ModelParams& p, double tol = 1e-12) {
    make_params(p.a, p.q);
    if (!(tol > 0.0) || !std::isfinite(tol)) throw parameter_error("tol must be finite and > 0");
    const long double alpha = static_cast<long double>(p.a) / p.q;
    const long double eval_tol = std::min(1e-13L, static_cast<long double>(tol));
    auto g = [alpha, eval_tol](long double u) {
        return detail::monotone_map_core(alpha, u, eval_tol).value - 1.0L;
    };

    const long double lo = 0.0L;  // map(0) = 1 - e^{-alpha} < 1 always
    const long double flo = g(lo);
    if (!(flo < 0.0L))
        throw bracket_error("integral solve: map(0) - 1 not negative");
    const long double hi = 1.0L - detail::kBracketMargin;
    const long double fhi = g(hi);
    if (!(fhi > 0.0L))
        throw bracket_error("integral solve: map not above 1 at theta = (1-1e-6) q");

    auto out = detail::refine_root(g, lo, hi, flo, fhi,
                                   static_cast<long double>(tol));
    return SurvivalRate{static_cast<double>(out.root * p.q),
                        SolveMethod::integral_fixed_point,
                        static_cast<double>(std::fabs(out.froot)),
                        static_cast<double>(out.width * p.q)};
}

/// Solve by both routes and compare.  Passes when the two roots agree to
/// 4 * tol * q (each bracket alone contributes up to tol * q).
inline EquivalenceReport certify_equivalence(const ModelParams& p, double tol = 1e-12) {
    EquivalenceReport rep;
    rep.series = solve_theta_star_series(p, tol);
    rep.integral = solve_theta_star_integral(p, tol);
    rep.difference = rep.series.theta - rep.integral.theta;
    rep.tol = tol;
    rep.pass = std::fabs(rep.difference) <= 4.0 * tol * p.q;
    return rep;
}

}  // namespace mminf

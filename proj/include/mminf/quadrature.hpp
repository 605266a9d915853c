#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature on finite intervals.
//
// This is the single quadrature engine behind every integral in the library.
// Panels are bisected greedily (worst absolute-error panel first) until the
// summed error estimate meets the caller's absolute tolerance.  All
// arithmetic is extended precision (long double): several downstream
// identities must certify residuals near 1e-12 against values of magnitude
// ~1e5, which plain double cannot express after rounding.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "mminf/errors.hpp"

namespace mminf::detail {

// QUADPACK dqk15 abscissae/weights, 33 significant digits.
// kGkNodes holds the nonnegative Kronrod abscissae; odd indices (1,3,5,7)
// are the embedded 7-point Gauss rule.
inline constexpr long double kGkNodes[8] = {
    0.991455371120812639206854697526329L,
    0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L,
    0.741531185599394439863864773280788L,
    0.586087235467691130294144838258730L,
    0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L,
    0.000000000000000000000000000000000L,
};

inline constexpr long double kKronrodWeights[8] = {
    0.022935322010529224963732008058970L,
    0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L,
    0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L,
    0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L,
    0.209482141084727828012999174891714L,
};

inline constexpr long double kGaussWeights[4] = {
    0.129484966168869693270611432679082L,
    0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L,
    0.417959183673469387755102040816327L,
};

struct QuadResult {
    long double value = 0.0L;
    long double abs_error = 0.0L;
    int nodes_used = 0;
    // True when abs_error is dominated by arithmetic round-off rather than
    // rule truncation; such an estimate cannot shrink under subdivision.
    bool roundoff_limited = false;
};

/// One (G7,K15) application on [lo,hi].  Error estimate follows QUADPACK's
/// rescaling of |K15 - G7| by the integrand's deviation integral.
template <class F>
QuadResult gk15_panel(F&& f, long double lo, long double hi) {
    const long double center = 0.5L * (lo + hi);
    const long double half = 0.5L * (hi - lo);

    long double fv[15];
    fv[7] = static_cast<long double>(f(center));
    for (int j = 0; j < 7; ++j) {
        const long double dx = half * kGkNodes[j];
        fv[j] = static_cast<long double>(f(center - dx));
        fv[14 - j] = static_cast<long double>(f(center + dx));
    }
    for (int j = 0; j < 15; ++j) {
        if (!std::isfinite(static_cast<double>(fv[j])))
            throw convergence_error("quadrature integrand evaluated to a non-finite value");
    }

    long double resk = kKronrodWeights[7] * fv[7];
    long double resabs = std::fabs(resk);
    for (int j = 0; j < 7; ++j) {
        const long double sum = fv[j] + fv[14 - j];
        resk += kKronrodWeights[j] * sum;
        resabs += kKronrodWeights[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
    }
    long double resg = kGaussWeights[3] * fv[7];
    for (int j = 0; j < 3; ++j)
        resg += kGaussWeights[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);

    const long double reskh = 0.5L * resk;
    long double resasc = kKronrodWeights[7] * std::fabs(fv[7] - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kKronrodWeights[j] *
                  (std::fabs(fv[j] - reskh) + std::fabs(fv[14 - j] - reskh));

    resk *= half;
    resg *= half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);

    long double err = std::fabs(resk - resg);
    if (resasc != 0.0L && err != 0.0L)
        err = resasc * std::min(1.0L, std::pow(200.0L * err / resasc, 1.5L));
    const long double eps_floor = resabs * 50.0L * 1e-19L;  // long double round-off floor
    const bool floored = err <= eps_floor;
    err = std::max(err, eps_floor);

    return QuadResult{resk, err, 15, floored};
}

/// Interior breakpoints packing initial panels into a boundary layer of
/// width O(p) below `edge`.  Integrands like e^{c v^{1/p}} with small p vary
/// only inside (edge - ~64 p, edge]; on a single panel [lo, edge] every
/// GK15 node lands outside that layer (the outermost abscissa is ~0.9915),
/// so the rule would report a tiny error while missing the spike entirely.
inline std::vector<long double> edge_layer_cuts(long double lo, long double edge,
                                                long double p) {
    std::vector<long double> cuts;
    for (long double tau : {64.0L, 32.0L, 16.0L, 8.0L, 4.0L, 2.0L, 1.0L, 0.5L}) {
        const long double v = edge - p * tau;
        if (v > lo && v < edge) cuts.push_back(v);
    }
    return cuts;
}

/// Adaptive bisection driven by per-panel error estimates.  Returns the
/// integral with a (conservative) absolute error bound; throws
/// convergence_error if abs_tol is unreachable within max_panels panels.
/// A tolerance below the round-off floor of the integrand is not an error:
/// refinement stops once every remaining panel is round-off limited, and the
/// achieved (larger) error is reported honestly.  `interior` (ascending,
/// strictly inside (lo, hi)) forces the initial partition through known
/// integrand features that a single rule application would overlook.
template <class F>
QuadResult integrate_adaptive(F&& f, long double lo, long double hi, long double abs_tol,
                              const std::vector<long double>& interior = {},
                              int max_panels = 2000) {
    if (!(hi >= lo)) throw parameter_error("integration bounds must satisfy lo <= hi");
    if (hi == lo) return QuadResult{0.0L, 0.0L, 0};

    struct Panel {
        long double lo, hi, value, err;
        bool floored;
    };
    std::vector<Panel> panels;
    int nodes = 0;
    long double seg_lo = lo;
    for (std::size_t i = 0; i <= interior.size(); ++i) {
        const long double seg_hi = (i < interior.size()) ? interior[i] : hi;
        if (!(seg_hi > seg_lo) || seg_hi > hi)
            throw parameter_error("interior breakpoints must ascend strictly within "
                                  "the integration interval");
        QuadResult r = gk15_panel(f, seg_lo, seg_hi);
        panels.push_back(Panel{seg_lo, seg_hi, r.value, r.abs_error, r.roundoff_limited});
        nodes += r.nodes_used;
        seg_lo = seg_hi;
    }

    while (true) {
        long double total_err = 0.0L;
        std::size_t worst = panels.size();  // worst subdividable panel
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_err += panels[i].err;
            if (panels[i].floored || panels[i].err == 0.0L) continue;
            if (worst == panels.size() || panels[i].err > panels[worst].err) worst = i;
        }
        if (total_err <= abs_tol || worst == panels.size()) break;
        if (static_cast<int>(panels.size()) >= max_panels)
            throw convergence_error(
                "adaptive quadrature: tolerance not reached within panel budget");

        const Panel p = panels[worst];
        const long double mid = 0.5L * (p.lo + p.hi);
        if (mid <= p.lo || mid >= p.hi)
            throw convergence_error(
                "adaptive quadrature: panel too narrow to subdivide further");
        QuadResult left = gk15_panel(f, p.lo, mid);
        QuadResult right = gk15_panel(f, mid, p.hi);
        nodes += left.nodes_used + right.nodes_used;
        panels[worst] =
            Panel{p.lo, mid, left.value, left.abs_error, left.roundoff_limited};
        panels.push_back(
            Panel{mid, p.hi, right.value, right.abs_error, right.roundoff_limited});
    }

    // Compensated summation of panel contributions.
    long double sum = 0.0L, comp = 0.0L, err = 0.0L;
    bool all_floored = true;
    for (const Panel& p : panels) {
        const long double y = p.value - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err += p.err;
        all_floored = all_floored && p.floored;
    }
    return QuadResult{sum, err, nodes, all_floored && err > abs_tol};
}

}  // namespace mminf::detail

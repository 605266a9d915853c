#pragma once

// Parameters and transition rates of the M/M/inf queue absorbed at zero.
//
// State k >= 1 jumps to k+1 at rate a (arrivals) and to k-1 at rate k*q
// (each of the k customers departs independently at rate q).  State 0 is
// absorbing.  Every quantity in the library scales as theta(c*a, c*q) =
// c * theta(a, q), so internally computations normalize q to 1.

#include <cmath>
#include <string>

#include "mminf/errors.hpp"

namespace mminf {

struct ModelParams {
    double a = 1.0;  // arrival rate, > 0
    double q = 1.0;  // per-customer departure rate, > 0
};

/// Validate and return model parameters; throws parameter_error naming the
/// offending field when a rate is non-finite or non-positive.
inline ModelParams make_params(double a, double q) {
    if (!std::isfinite(a) || a <= 0.0)
        throw parameter_error("model parameter 'a' must be finite and > 0, got " +
                              std::to_string(a));
    if (!std::isfinite(q) || q <= 0.0)
        throw parameter_error("model parameter 'q' must be finite and > 0, got " +
                              std::to_string(q));
    return ModelParams{a, q};
}

/// Total outflow rate a + k*q from transient state k (k >= 0; state 0 is
/// absorbing and has outflow 0).
inline double rate_out_of(const ModelParams& p, long k) {
    if (k < 0) throw parameter_error("state index must be >= 0, got " + std::to_string(k));
    if (k == 0) return 0.0;
    return p.a + static_cast<double>(k) * p.q;
}

struct NormalizedParams {
    ModelParams params;  // q == 1
    double scale;        // original q; multiply normalized rates by this
};

/// Rescale time so the departure rate is 1: (a, q) -> (a/q, 1) with scale q.
inline NormalizedParams normalize(const ModelParams& p) {
    return NormalizedParams{ModelParams{p.a / p.q, 1.0}, p.q};
}

}  // namespace mminf

#pragma once

// Exact continuous-time Monte Carlo of the absorbed M/M/inf queue, plus the
// two estimators used to validate the analytic modules: the empirical
// survival-rate fit and the conditional state histogram at a probe time.
//
// Determinism contract: with a fixed SimConfig the full TrajectoryStats is
// identical for every worker count, because each trajectory owns a
// counter-based stream (see rng.hpp) and results are assembled in
// trajectory-index order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "mminf/errors.hpp"
#include "mminf/model.hpp"
#include "mminf/rng.hpp"

namespace mminf {

struct SimConfig {
    ModelParams params;
    long n_trajectories = 100000;
    long initial_state = 1;
    double t_max = 200.0;          // censoring horizon
    std::uint64_t seed = 42;
    std::vector<double> probe_times;  // nondecreasing, within [0, t_max]
    long max_events = 10000000;    // per-trajectory event budget
    int n_workers = 0;             // 0 = hardware count, capped by QSD_MMINF_THREADS
};

struct TrajectoryStats {
    SimConfig config;
    std::vector<double> absorption_times;  // == t_max where censored
    std::vector<std::uint8_t> censored;
    long n_censored = 0;
    // states_at[p] = states of trajectories still alive at probe p,
    // in trajectory-index order.
    std::vector<std::vector<std::int32_t>> states_at;
};

struct SurvivalFit {
    double rate = 0.0;
    double std_error = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int n_points = 0;
};

struct ConditionalHistogram {
    double probe_time = 0.0;
    long n_survivors = 0;
    std::vector<double> probs;   // probs[k-1] = P(state == k | alive), k = 1..k_max
    double overflow_mass = 0.0;  // P(state > k_max | alive)
};

namespace detail {

inline void validate_config(const SimConfig& c) {
    make_params(c.params.a, c.params.q);
    if (c.n_trajectories < 1)
        throw parameter_error("n_trajectories must be >= 1");
    if (c.initial_state < 0)
        throw parameter_error("initial_state must be >= 0");
    if (!(c.t_max > 0.0) || !std::isfinite(c.t_max))
        throw parameter_error("t_max must be finite and > 0");
    if (c.max_events < 1)
        throw parameter_error("max_events must be >= 1");
    if (c.n_workers < 0)
        throw parameter_error("n_workers must be >= 0 (0 = auto)");
    double prev = 0.0;
    for (double t : c.probe_times) {
        if (!(t >= prev) || t > c.t_max)
            throw parameter_error("probe_times must be nondecreasing within [0, t_max]");
        prev = t;
    }
}

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("QSD_MMINF_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || cap < 1)
            throw parameter_error("QSD_MMINF_THREADS must be a positive integer, got '" +
                                  std::string(env) + "'");
        n = std::min<long>(n, cap);
    }
    return n;
}

/// Simulate one trajectory.  Probe states are written into row[0..np)
/// (-1 = absorbed before the probe).  Returns {absorption_or_censor_time,
/// censored_flag}; throws nothing, signals a blown event budget via the
/// bool& runaway out-parameter.
inline std::pair<double, bool> run_one(const SimConfig& cfg, std::uint64_t traj,
                                       std::int32_t* row, bool& runaway) {
    const double a = cfg.params.a, q = cfg.params.q;
    const std::size_t np = cfg.probe_times.size();
    for (std::size_t p = 0; p < np; ++p) row[p] = -1;

    long k = cfg.initial_state;
    if (k == 0) return {0.0, false};

    PhiloxStream rng(cfg.seed, traj);
    double t = 0.0;
    std::size_t pi = 0;
    for (long events = 0; events < cfg.max_events; ++events) {
        const double rate = a + static_cast<double>(k) * q;
        const double t_next = t + rng.next_exponential(rate);

        if (t_next > cfg.t_max) {  // censored: state holds through t_max
            while (pi < np) row[pi++] = static_cast<std::int32_t>(k);
            return {cfg.t_max, true};
        }
        // The state over [t, t_next) is k; probes are right-continuous, so
        // a probe exactly at t_next sees the post-jump state.
        while (pi < np && cfg.probe_times[pi] < t_next)
            row[pi++] = static_cast<std::int32_t>(k);

        k += (rng.next_double() * rate < a) ? 1 : -1;
        t = t_next;
        if (k == 0) return {t, false};
    }
    runaway = true;
    return {t, false};
}

}  // namespace detail

/// Run the full ensemble.  Deterministic for fixed config, any worker count.
inline TrajectoryStats run(const SimConfig& cfg) {
    detail::validate_config(cfg);
    const long n = cfg.n_trajectories;
    const std::size_t np = cfg.probe_times.size();
    const int workers = detail::resolve_workers(cfg.n_workers);

    std::vector<double> times(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> cens(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> rows(static_cast<std::size_t>(n) * np);
    std::vector<std::uint8_t> runaway_flags(static_cast<std::size_t>(n), 0);

    auto work = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            bool runaway = false;
            const auto [t, c] = detail::run_one(cfg, static_cast<std::uint64_t>(i),
                                                rows.data() + static_cast<std::size_t>(i) * np,
                                                runaway);
            times[static_cast<std::size_t>(i)] = t;
            cens[static_cast<std::size_t>(i)] = c ? 1 : 0;
            runaway_flags[static_cast<std::size_t>(i)] = runaway ? 1 : 0;
        }
    };

    if (workers <= 1 || n < 2) {
        work(0, n);
    } else {
        const long chunk = (n + workers - 1) / workers;
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            const long lo = static_cast<long>(w) * chunk;
            const long hi = std::min<long>(lo + chunk, n);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    for (long i = 0; i < n; ++i) {
        if (runaway_flags[static_cast<std::size_t>(i)])
            throw runaway_trajectory_error(
                "trajectory " + std::to_string(i) + " exceeded max_events = " +
                    std::to_string(cfg.max_events),
                i);
    }

    TrajectoryStats out;
    out.config = cfg;
    out.absorption_times = std::move(times);
    out.censored = std::move(cens);
    out.n_censored = static_cast<long>(
        std::count(out.censored.begin(), out.censored.end(), std::uint8_t{1}));
    out.states_at.resize(np);
    for (std::size_t p = 0; p < np; ++p) {
        auto& col = out.states_at[p];
        for (long i = 0; i < n; ++i) {
            const std::int32_t s = rows[static_cast<std::size_t>(i) * np + p];
            if (s >= 0) col.push_back(s);
        }
    }
    return out;
}

/// Least-squares slope of -log(empirical survival) over an evenly spaced
/// grid in [t_lo, t_hi].  Requires at least 50 survivors at t_hi so every
/// grid point is populated.
inline SurvivalFit fit_survival_rate(const TrajectoryStats& stats, double t_lo, double t_hi,
                                     int n_points = 25) {
    if (!(t_lo >= 0.0) || !(t_hi > t_lo) || t_hi > stats.config.t_max)
        throw parameter_error("fit window must satisfy 0 <= t_lo < t_hi <= t_max");
    if (n_points < 2) throw parameter_error("fit needs at least 2 grid points");

    std::vector<double> sorted(stats.absorption_times);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    auto survivors = [&](double t) {
        return static_cast<double>(sorted.end() -
                                   std::upper_bound(sorted.begin(), sorted.end(), t));
    };
    if (survivors(t_hi) < 50.0)
        throw statistics_error("fewer than 50 survivors at the end of the fit window; "
                               "shorten the window or add trajectories");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs(static_cast<std::size_t>(n_points)),
        ys(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        const double t = t_lo + (t_hi - t_lo) * j / (n_points - 1);
        const double y = -std::log(survivors(t) / n);
        xs[static_cast<std::size_t>(j)] = t;
        ys[static_cast<std::size_t>(j)] = y;
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const double m = n_points;
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;

    double ss_res = 0.0;
    for (int j = 0; j < n_points; ++j) {
        const double r = ys[static_cast<std::size_t>(j)] -
                         (intercept + slope * xs[static_cast<std::size_t>(j)]);
        ss_res += r * r;
    }
    const double var_slope =
        (n_points > 2) ? (ss_res / (m - 2.0)) * (m / denom) : 0.0;

    return SurvivalFit{slope, std::sqrt(std::max(var_slope, 0.0)), t_lo, t_hi, n_points};
}

/// Distribution of the state among survivors at one of the configured probe
/// times.  Requires >= 200 survivors there.
inline ConditionalHistogram conditional_histogram(const TrajectoryStats& stats,
                                                  double probe_time, int k_max) {
    if (k_max < 1) throw parameter_error("k_max must be >= 1");
    const auto& probes = stats.config.probe_times;
    std::size_t p = probes.size();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (probes[i] == probe_time) {
            p = i;
            break;
        }
    }
    if (p == probes.size())
        throw parameter_error("probe_time " + std::to_string(probe_time) +
                              " is not one of the configured probe times");
    const auto& states = stats.states_at[p];
    const long n_surv = static_cast<long>(states.size());
    if (n_surv < 200)
        throw statistics_error("only " + std::to_string(n_surv) +
                               " survivors at t = " + std::to_string(probe_time) +
                               "; need >= 200 for a conditional histogram");

    ConditionalHistogram h;
    h.probe_time = probe_time;
    h.n_survivors = n_surv;
    h.probs.assign(static_cast<std::size_t>(k_max), 0.0);
    long overflow = 0;
    for (std::int32_t s : states) {
        if (s >= 1 && s <= k_max)
            h.probs[static_cast<std::size_t>(s - 1)] += 1.0;
        else if (s > k_max)
            ++overflow;
    }
    for (double& v : h.probs) v /= static_cast<double>(n_surv);
    h.overflow_mass = static_cast<double>(overflow) / static_cast<double>(n_surv);
    return h;
}

/// Total variation distance between a conditional histogram and a QSD,
/// comparing states 1..k_max plus the lumped mass beyond k_max.
template <class QsdLike>
double total_variation(const ConditionalHistogram& h, const QsdLike& qsd) {
    const std::size_t k_max = h.probs.size();
    double tv = 0.0, nu_head = 0.0;
    for (std::size_t k = 0; k < k_max; ++k) {
        const double nu_k = (k < qsd.probs.size()) ? qsd.probs[k] : 0.0;
        nu_head += nu_k;
        tv += std::fabs(h.probs[k] - nu_k);
    }
    const double nu_beyond = std::max(0.0, 1.0 - nu_head);
    tv += std::fabs(h.overflow_mass - nu_beyond);
    return 0.5 * tv;
}

}  // namespace mminf

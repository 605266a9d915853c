// qsd_mminf: survival rate, quasi-stationary distribution, absorption-time
// transform, and Monte Carlo validation for the M/M/inf queue absorbed at 0.
//
// Subcommands: theta, qsd, laplace, simulate, verify.
// stdout carries the machine-readable payload (JSON or CSV); stderr carries
// diagnostics.  Exit codes: 0 success, 2 bad parameters, 3 numerical
// (domain / convergence / certification), 4 insufficient statistics.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mminf/mminf.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParameter = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitStatistics = 4;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json base_record(const std::string& command) {
    json j;
    j["schema_version"] = mminf::kSchemaVersion;
    j["version"] = mminf::kVersionString;
    j["command"] = command;
    return j;
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

void emit_csv(const std::vector<std::string>& comments, const std::string& header,
              const std::vector<std::vector<std::string>>& rows) {
    for (const auto& c : comments) std::cout << "# " << c << "\n";
    std::cout << header << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            std::cout << (i ? "," : "") << r[i];
        std::cout << "\n";
    }
}

struct CommonOpts {
    double a = 1.0;
    double q = 1.0;
    double tol = 1e-12;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_tol = true) {
    cmd->add_option("--a", c.a, "arrival rate a > 0")->capture_default_str();
    cmd->add_option("--q", c.q, "per-customer departure rate q > 0")->capture_default_str();
    if (with_tol)
        cmd->add_option("--tol", c.tol, "solver / evaluation tolerance")->capture_default_str();
    cmd->add_option("--format", c.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

// ---------------------------------------------------------------- theta ---

int cmd_theta(const CommonOpts& c) {
    const auto params = mminf::make_params(c.a, c.q);
    const auto rep = mminf::certify_equivalence(params, c.tol);

    if (c.format == "csv") {
        emit_csv({},
                 "field,value",
                 {{"theta_series", fmt_double(rep.series.theta)},
                  {"residual_series", fmt_double(rep.series.residual)},
                  {"bracket_width_series", fmt_double(rep.series.bracket_width)},
                  {"theta_integral", fmt_double(rep.integral.theta)},
                  {"residual_integral", fmt_double(rep.integral.residual)},
                  {"bracket_width_integral", fmt_double(rep.integral.bracket_width)},
                  {"difference", fmt_double(rep.difference)},
                  {"tol", fmt_double(rep.tol)},
                  {"pass", rep.pass ? "1" : "0"}});
    } else {
        json j = base_record("theta");
        j["params"] = {{"a", c.a}, {"q", c.q}};
        j["payload"] = {
            {"series",
             {{"theta", rep.series.theta},
              {"residual", rep.series.residual},
              {"bracket_width", rep.series.bracket_width}}},
            {"integral",
             {{"theta", rep.integral.theta},
              {"residual", rep.integral.residual},
              {"bracket_width", rep.integral.bracket_width}}},
            {"difference", rep.difference},
            {"tol", rep.tol},
            {"pass", rep.pass}};
        emit_json(j);
    }
    if (!rep.pass) {
        std::cerr << "certification failed: |difference| = " << std::fabs(rep.difference)
                  << " exceeds 4*tol*q = " << 4.0 * c.tol * c.q << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// ------------------------------------------------------------------ qsd ---

int cmd_qsd(const CommonOpts& c, std::optional<double> theta, bool minimal, long n,
            double eps_tail, long max_n) {
    const auto params = mminf::make_params(c.a, c.q);
    if (theta && minimal)
        throw mminf::parameter_error("qsd: --theta and --minimal are mutually exclusive");
    if (n < 1 || n > mminf::kMaxGfCoefficients)
        throw mminf::parameter_error("qsd: --n must lie in [1, 10000]");

    double th;
    bool solved = false;
    if (theta) {
        th = *theta;
    } else {
        th = mminf::solve_theta_star_series(params, c.tol).theta;
        solved = true;
    }

    const auto rec = mminf::qsd_recurrence(params, th, eps_tail, max_n);
    const auto gf = mminf::qsd_from_gf(params, th, n);

    auto rec_at = [&](long k) {
        return (k <= rec.truncation_n) ? rec.probs[static_cast<std::size_t>(k - 1)] : 0.0;
    };
    double max_disc = 0.0;
    for (long k = 1; k <= n; ++k)
        max_disc = std::max(max_disc,
                            std::fabs(rec_at(k) - gf.probs[static_cast<std::size_t>(k - 1)]));

    double head = 0.0;
    for (double x : rec.probs) head += x;

    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (long k = 1; k <= n; ++k) {
            const double r = rec_at(k), g = gf.probs[static_cast<std::size_t>(k - 1)];
            rows.push_back({std::to_string(k), fmt_double(r), fmt_double(g),
                            fmt_double(std::fabs(r - g))});
        }
        emit_csv({"theta=" + fmt_double(th),
                  "theta_was_solved=" + std::string(solved ? "1" : "0"),
                  "eps_tail=" + fmt_double(eps_tail),
                  "truncation_n=" + std::to_string(rec.truncation_n),
                  "tail_mass_estimate=" + fmt_double(rec.tail_mass_estimate),
                  "head_mass=" + fmt_double(head),
                  "max_discrepancy=" + fmt_double(max_disc)},
                 "k,nu_recurrence,nu_gf,abs_diff", rows);
    } else {
        json j = base_record("qsd");
        j["params"] = {{"a", c.a}, {"q", c.q}};
        json probs_rec = json::array(), probs_gf = json::array();
        for (long k = 1; k <= n; ++k) {
            probs_rec.push_back(rec_at(k));
            probs_gf.push_back(gf.probs[static_cast<std::size_t>(k - 1)]);
        }
        j["payload"] = {{"theta", th},
                        {"theta_was_solved", solved},
                        {"n", n},
                        {"eps_tail", eps_tail},
                        {"truncation_n", rec.truncation_n},
                        {"tail_mass_estimate", rec.tail_mass_estimate},
                        {"head_mass", head},
                        {"max_discrepancy", max_disc},
                        {"probs_recurrence", probs_rec},
                        {"probs_gf", probs_gf}};
        emit_json(j);
    }
    return kExitOk;
}

// -------------------------------------------------------------- laplace ---

int cmd_laplace(const CommonOpts& c, std::vector<double> thetas) {
    const auto params = mminf::make_params(c.a, c.q);
    const double theta_star = mminf::solve_theta_star_series(params, 1e-12).theta;
    const double mean = mminf::mean_absorption_time(params);

    if (thetas.empty()) {
        for (double f : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) thetas.push_back(f * theta_star);
    }

    struct Point {
        double theta;
        double value = 0.0;
        double err = 0.0;
        std::string status = "ok";
    };
    std::vector<Point> pts;
    int n_ok = 0;
    for (double th : thetas) {
        Point pt;
        pt.theta = th;
        try {
            const auto m = mminf::mgf_absorption_with_rate(params, th, theta_star, c.tol);
            pt.value = m.value;
            pt.err = m.abs_error_estimate;
            ++n_ok;
        } catch (const mminf::near_singularity_error&) {
            pt.status = "near_singularity";
        } catch (const mminf::domain_error&) {
            pt.status = "domain_error";
        }
        pts.push_back(pt);
    }

    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : pts)
            rows.push_back({fmt_double(p.theta), fmt_double(p.value), fmt_double(p.err),
                            p.status});
        emit_csv({"theta_star=" + fmt_double(theta_star),
                  "mean_absorption_time=" + fmt_double(mean)},
                 "theta,value,abs_error_estimate,status", rows);
    } else {
        json j = base_record("laplace");
        j["params"] = {{"a", c.a}, {"q", c.q}};
        json jpts = json::array();
        for (const auto& p : pts) {
            json jp = {{"theta", p.theta}, {"status", p.status}};
            if (p.status == "ok") {
                jp["value"] = p.value;
                jp["abs_error_estimate"] = p.err;
            }
            jpts.push_back(jp);
        }
        j["payload"] = {{"theta_star", theta_star},
                        {"mean_absorption_time", mean},
                        {"points", jpts}};
        emit_json(j);
    }
    if (n_ok == 0 && !pts.empty()) {
        std::cerr << "no requested theta was inside the transform's domain\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// ------------------------------------------------------------- simulate ---

int cmd_simulate(const CommonOpts& c, long n, long initial, double t_max,
                 std::uint64_t seed, std::vector<double> probes, long max_events,
                 int k_max) {
    const auto params = mminf::make_params(c.a, c.q);
    const double theta_hat = mminf::solve_theta_star_series(params, 1e-12).theta;

    if (probes.empty()) {
        const double lo = 5.0 / theta_hat, hi = 30.0 / theta_hat;
        for (int i = 0; i < 6; ++i) {
            const double t = lo + (hi - lo) * i / 5.0;
            if (t <= t_max) probes.push_back(t);
        }
    }
    std::sort(probes.begin(), probes.end());

    mminf::SimConfig cfg;
    cfg.params = params;
    cfg.n_trajectories = n;
    cfg.initial_state = initial;
    cfg.t_max = t_max;
    cfg.seed = seed;
    cfg.probe_times = probes;
    cfg.max_events = max_events;

    const auto stats = mminf::run(cfg);

    // Sample mean absorption time (biased low if anything was censored).
    double mean_sample = 0.0;
    for (double t : stats.absorption_times) mean_sample += t;
    mean_sample /= static_cast<double>(n);
    const double mean_pred = mminf::mean_absorption_time(params);

    // MGF spot check at theta = 0.5 * theta_hat.
    const double th_check = 0.5 * theta_hat;
    double mgf_sample = 0.0;
    for (double t : stats.absorption_times) mgf_sample += std::exp(th_check * t);
    mgf_sample /= static_cast<double>(n);
    const double mgf_pred =
        mminf::mgf_absorption_with_rate(params, th_check, theta_hat).value;

    // Survival-rate fit over [5/theta_hat, min(30/theta_hat, last time with
    // >= 50 survivors)].
    std::optional<mminf::SurvivalFit> fit;
    std::string fit_skip_reason;
    {
        std::vector<double> sorted(stats.absorption_times);
        std::sort(sorted.begin(), sorted.end());
        const double t_lo = 5.0 / theta_hat;
        double t_hi = 30.0 / theta_hat;
        if (n >= 50) {
            const double t50 = sorted[static_cast<std::size_t>(n - 50)];
            t_hi = std::min(t_hi, std::nextafter(t50, 0.0));
        } else {
            t_hi = 0.0;
        }
        t_hi = std::min(t_hi, t_max);
        if (t_hi > t_lo) {
            try {
                fit = mminf::fit_survival_rate(stats, t_lo, t_hi);
            } catch (const mminf::statistics_error& e) {
                fit_skip_reason = e.what();
            }
        } else {
            fit_skip_reason = "fewer than 50 survivors past t = 5/theta_hat";
        }
    }

    // Conditional histogram at the latest probe with >= 200 survivors,
    // against the minimal QSD.
    std::optional<mminf::ConditionalHistogram> hist;
    double tv = 0.0;
    std::string tv_skip_reason = "no probe has >= 200 survivors";
    for (std::size_t p = probes.size(); p-- > 0;) {
        if (static_cast<long>(stats.states_at[p].size()) >= 200) {
            hist = mminf::conditional_histogram(stats, probes[p], k_max);
            const auto yag = mminf::qsd_recurrence(params, theta_hat);
            tv = mminf::total_variation(*hist, yag);
            tv_skip_reason.clear();
            break;
        }
    }

    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows = {
            {"theta_hat", fmt_double(theta_hat)},
            {"n", std::to_string(n)},
            {"seed", std::to_string(seed)},
            {"n_censored", std::to_string(stats.n_censored)},
            {"mean_time_sample", fmt_double(mean_sample)},
            {"mean_time_predicted", fmt_double(mean_pred)},
            {"mgf_theta", fmt_double(th_check)},
            {"mgf_sample", fmt_double(mgf_sample)},
            {"mgf_predicted", fmt_double(mgf_pred)},
        };
        if (fit) {
            rows.push_back({"fit_rate", fmt_double(fit->rate)});
            rows.push_back({"fit_std_error", fmt_double(fit->std_error)});
            rows.push_back({"fit_window_lo", fmt_double(fit->window_lo)});
            rows.push_back({"fit_window_hi", fmt_double(fit->window_hi)});
        } else {
            rows.push_back({"fit_skipped", fit_skip_reason});
        }
        if (hist) {
            rows.push_back({"tv_probe_time", fmt_double(hist->probe_time)});
            rows.push_back({"tv_n_survivors", std::to_string(hist->n_survivors)});
            rows.push_back({"tv", fmt_double(tv)});
        } else {
            rows.push_back({"tv_skipped", tv_skip_reason});
        }
        emit_csv({}, "field,value", rows);
    } else {
        json j = base_record("simulate");
        j["params"] = {{"a", c.a}, {"q", c.q}};
        json payload = {
            {"theta_hat", theta_hat},
            {"n", n},
            {"initial_state", initial},
            {"t_max", t_max},
            {"seed", seed},
            {"probe_times", probes},
            {"n_censored", stats.n_censored},
            {"mean_time", {{"sample", mean_sample}, {"predicted", mean_pred}}},
            {"mgf_check",
             {{"theta", th_check}, {"sample", mgf_sample}, {"predicted", mgf_pred}}}};
        if (fit) {
            payload["fit"] = {{"rate", fit->rate},
                              {"std_error", fit->std_error},
                              {"window", {fit->window_lo, fit->window_hi}},
                              {"n_points", fit->n_points}};
        } else {
            payload["fit"] = nullptr;
            payload["fit_skip_reason"] = fit_skip_reason;
        }
        if (hist) {
            payload["tv"] = {{"probe_time", hist->probe_time},
                             {"n_survivors", hist->n_survivors},
                             {"k_max", k_max},
                             {"value", tv}};
        } else {
            payload["tv"] = nullptr;
            payload["tv_skip_reason"] = tv_skip_reason;
        }
        j["payload"] = payload;
        emit_json(j);
    }
    return kExitOk;
}

// --------------------------------------------------------------- verify ---

struct GridSpec {
    double s_min = -0.95, s_max = 5.0;
    int ns = 30;
    double x_min = -10.0, x_max = 10.0;
    int nx = 30;
};

// "--grid-spec smin:smax:ns,xmin:xmax:nx"; an axis with n = 1 degenerates
// to the single point at its minimum.
GridSpec parse_grid_spec(const std::string& spec) {
    GridSpec g;
    const auto comma = spec.find(',');
    if (comma == std::string::npos)
        throw mminf::parameter_error("grid-spec must be 'smin:smax:ns,xmin:xmax:nx'");
    auto parse_axis = [](const std::string& axis, double& lo, double& hi, int& n) {
        const auto c1 = axis.find(':');
        const auto c2 = axis.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw mminf::parameter_error("grid-spec axis must be 'min:max:count'");
        try {
            lo = std::stod(axis.substr(0, c1));
            hi = std::stod(axis.substr(c1 + 1, c2 - c1 - 1));
            n = std::stoi(axis.substr(c2 + 1));
        } catch (const std::exception&) {
            throw mminf::parameter_error("grid-spec axis has non-numeric fields: " + axis);
        }
        if (n < 1 || !(hi >= lo))
            throw mminf::parameter_error("grid-spec axis needs max >= min and count >= 1");
    };
    parse_axis(spec.substr(0, comma), g.s_min, g.s_max, g.ns);
    parse_axis(spec.substr(comma + 1), g.x_min, g.x_max, g.nx);
    return g;
}

int cmd_verify(const CommonOpts& c, const GridSpec& g, double gate, bool default_grid) {
    struct Point {
        double s, x, residual;
        std::string status;
    };
    std::vector<Point> pts;
    double max_residual = 0.0;
    double argmax_s = 0.0, argmax_x = 0.0;
    int n_ok = 0, n_skipped = 0;

    for (int i = 0; i < g.ns; ++i) {
        // The default grid opens the s range at -0.95 (the identity needs
        // s > -1 with margin) and closes it at 5.
        double s;
        if (default_grid)
            s = g.s_min + (g.s_max - g.s_min) * (i + 1) / g.ns;
        else
            s = (g.ns == 1) ? g.s_min : g.s_min + (g.s_max - g.s_min) * i / (g.ns - 1);
        for (int jx = 0; jx < g.nx; ++jx) {
            const double x =
                (g.nx == 1) ? g.x_min : g.x_min + (g.x_max - g.x_min) * jx / (g.nx - 1);
            Point p{s, x, 0.0, "ok"};
            try {
                p.residual = mminf::identity_residual(s, x, c.tol);
                ++n_ok;
                if (p.residual > max_residual) {
                    max_residual = p.residual;
                    argmax_s = s;
                    argmax_x = x;
                }
            } catch (const mminf::domain_error&) {
                p.status = "domain_error";
                ++n_skipped;
            }
            pts.push_back(p);
        }
    }
    // Vacuously true when every point fell in the pole band: per-point
    // domain entries are in-band report material, not a fatal error.
    const bool pass = max_residual <= gate;

    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : pts)
            rows.push_back({fmt_double(p.s), fmt_double(p.x), fmt_double(p.residual),
                            p.status});
        emit_csv({"max_residual=" + fmt_double(max_residual),
                  "gate=" + fmt_double(gate),
                  "pass=" + std::string(pass ? "1" : "0")},
                 "s,x,residual,status", rows);
    } else {
        json j = base_record("verify");
        json failing = json::array();
        for (const auto& p : pts) {
            if (p.status == "ok" && p.residual > gate)
                failing.push_back({{"s", p.s}, {"x", p.x}, {"residual", p.residual}});
        }
        j["payload"] = {{"grid",
                         {{"s_min", g.s_min},
                          {"s_max", g.s_max},
                          {"ns", g.ns},
                          {"x_min", g.x_min},
                          {"x_max", g.x_max},
                          {"nx", g.nx},
                          {"s_open_at_min", default_grid}}},
                        {"tol", c.tol},
                        {"n_evaluated", n_ok},
                        {"n_skipped_domain", n_skipped},
                        {"max_residual", max_residual},
                        {"argmax", {{"s", argmax_s}, {"x", argmax_x}}},
                        {"gate", gate},
                        {"failing_points", failing},
                        {"pass", pass}};
        emit_json(j);
    }
    if (!pass) {
        std::cerr << "identity verification failed: max residual " << max_residual
                  << " exceeds gate " << gate << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Survival rate, quasi-stationary distribution, and absorption-time "
                 "transform of the M/M/inf queue absorbed at 0"};
    app.require_subcommand(1);

    CommonOpts c_theta, c_qsd, c_laplace, c_sim, c_verify;

    auto* theta_cmd = app.add_subcommand(
        "theta", "solve theta* by both characterizations and certify agreement");
    add_common(theta_cmd, c_theta);

    auto* qsd_cmd = app.add_subcommand(
        "qsd", "quasi-stationary distribution by recurrence and generating function");
    add_common(qsd_cmd, c_qsd);
    std::optional<double> qsd_theta;
    bool qsd_minimal = false;
    long qsd_n = 50;
    double qsd_eps_tail = 1e-14;
    long qsd_max_n = mminf::kMaxQsdEntries;
    qsd_cmd->add_option("--theta", qsd_theta, "rate parameter (default: solved theta*)");
    qsd_cmd->add_flag("--minimal", qsd_minimal,
                      "use the minimal QSD (theta = theta*; the default when --theta "
                      "is absent)");
    qsd_cmd->add_option("--n", qsd_n, "entries to emit and cross-check")
        ->capture_default_str();
    qsd_cmd->add_option("--eps-tail", qsd_eps_tail, "recurrence truncation threshold")
        ->capture_default_str();
    qsd_cmd->add_option("--max-n", qsd_max_n, "recurrence entry budget")
        ->capture_default_str();

    auto* laplace_cmd = app.add_subcommand(
        "laplace", "absorption-time MGF on a theta grid (default fractions of theta*)");
    add_common(laplace_cmd, c_laplace);
    std::vector<double> laplace_thetas;
    laplace_cmd
        ->add_option("--theta-grid,--theta", laplace_thetas,
                     "explicit theta values (default: {0, .25, .5, .75, .9, .99} theta*)")
        ->delimiter(',');

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo validation run");
    add_common(sim_cmd, c_sim, /*with_tol=*/false);
    long sim_n = 100000, sim_initial = 1, sim_max_events = 10000000;
    double sim_t_max = 200.0;
    std::uint64_t sim_seed = 42;
    std::vector<double> sim_probes;
    int sim_k_max = 15;
    sim_cmd->add_option("--n", sim_n, "number of trajectories")->capture_default_str();
    sim_cmd->add_option("--initial", sim_initial, "initial state")->capture_default_str();
    sim_cmd->add_option("--t-max", sim_t_max, "censoring horizon")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "random seed")->capture_default_str();
    sim_cmd->add_option("--probes", sim_probes,
                        "probe times (default: 6 points on [5,30]/theta_hat)")
        ->delimiter(',');
    sim_cmd->add_option("--max-events", sim_max_events, "per-trajectory event budget")
        ->capture_default_str();
    sim_cmd->add_option("--k-max", sim_k_max, "histogram cutoff state")
        ->capture_default_str();

    auto* verify_cmd = app.add_subcommand(
        "verify", "certify the series/quadrature identity on an (s, x) grid");
    add_common(verify_cmd, c_verify);
    std::string v_grid_spec;
    double v_gate = 1e-10;
    verify_cmd->add_option("--grid-spec", v_grid_spec,
                           "smin:smax:ns,xmin:xmax:nx (default -0.95:5:30,-10:10:30 "
                           "with the s range open at -0.95)");
    verify_cmd->add_option("--gate", v_gate, "max allowed residual")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitParameter;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (theta_cmd->parsed()) return cmd_theta(c_theta);
        if (qsd_cmd->parsed())
            return cmd_qsd(c_qsd, qsd_theta, qsd_minimal, qsd_n, qsd_eps_tail, qsd_max_n);
        if (laplace_cmd->parsed()) return cmd_laplace(c_laplace, laplace_thetas);
        if (sim_cmd->parsed())
            return cmd_simulate(c_sim, sim_n, sim_initial, sim_t_max, sim_seed, sim_probes,
                                sim_max_events, sim_k_max);
        if (verify_cmd->parsed()) {
            const bool default_grid = v_grid_spec.empty();
            const GridSpec g = default_grid ? GridSpec{} : parse_grid_spec(v_grid_spec);
            return cmd_verify(c_verify, g, v_gate, default_grid);
        }
    } catch (const mminf::parameter_error& e) {
        json j = base_record(cmd);
        j["error"] = {{"type", "parameter"}, {"message", e.what()}};
        emit_json(j);
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const mminf::invalid_theta_error& e) {
        json j = base_record(cmd);
        j["error"] = {{"type", "invalid_theta"},
                      {"message", e.what()},
                      {"index", e.index()}};
        emit_json(j);
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const mminf::statistics_error& e) {
        json j = base_record(cmd);
        j["error"] = {{"type", "statistics"}, {"message", e.what()}};
        emit_json(j);
        std::cerr << "statistics error: " << e.what() << "\n";
        return kExitStatistics;
    } catch (const mminf::domain_error& e) {
        json j = base_record(cmd);
        j["error"] = {{"type", "domain"}, {"message", e.what()}};
        emit_json(j);
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const mminf::runaway_trajectory_error& e) {
        json j = base_record(cmd);
        j["error"] = {{"type", "runaway_trajectory"},
                      {"message", e.what()},
                      {"trajectory", e.trajectory()}};
        emit_json(j);
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const mminf::convergence_error& e) {
        json j = base_record(cmd);
        j["error"] = {{"type", "convergence"}, {"message", e.what()}};
        emit_json(j);
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// cli.hpp — configuration-driven experiment runner.
//
// A run is described by a JSON config with a versioned schema; unknown keys
// are rejected.  Subcommands: simulate | jacobi | conjugate | blowup |
// curvature | inequality | distance | identities.  Every run writes
// manifest.json echoing the fully resolved configuration and seed, plus
// per-experiment CSV/JSON artifacts.  Outputs are byte-deterministic for a
// fixed (config, seed).
//
// Exit codes: 2 config/validation failure (nothing written), 1 numeric
// failure (non-finite state), 0 otherwise — blowup termination is a result,
// reported in the manifest, not an error.

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "wunsch/blowup.hpp"
#include "wunsch/curvature.hpp"
#include "wunsch/distance.hpp"
#include "wunsch/errors.hpp"
#include "wunsch/geodesic.hpp"
#include "wunsch/inequalities.hpp"
#include "wunsch/io.hpp"
#include "wunsch/jacobi.hpp"

namespace wunsch {

inline constexpr const char* config_schema_id = "wunschlab/1";

struct RunConfig {
    std::string subcommand;
    MetricKind kind = MetricKind::mu_half();
    int grid_n = 256;
    double dt = 1e-3;
    double horizon = 1.0;
    int record_stride = 10;
    ordered_json initial = "cos1";
    std::vector<double> probes;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out = "out";

    // subcommand-specific blocks (validated per subcommand)
    ordered_json extra = ordered_json::object();

    ordered_json resolved() const;
};

namespace detail {

inline void require_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline MetricKind parse_metric(const ordered_json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "mu_half") return MetricKind::mu_half();
        if (s == "full_half") return MetricKind::full_half();
        if (s == "homogeneous_half") return MetricKind::homogeneous_half();
        throw ConfigError("metric: unknown name '" + s + "'");
    }
    if (j.is_object()) {
        require_keys(j, {"homogeneous_s"}, "metric");
        const double s = j.at("homogeneous_s").get<double>();
        if (s == 0.0) return MetricKind::homogeneous_s0();
        return MetricKind::homogeneous_s(s);
    }
    throw ConfigError("metric: expected a name or {\"homogeneous_s\": s}");
}

inline ordered_json metric_json(const MetricKind& k) {
    switch (k.variant()) {
        case MetricKind::Variant::MuHalf: return "mu_half";
        case MetricKind::Variant::FullHalf: return "full_half";
        case MetricKind::Variant::HomogeneousHalf: return "homogeneous_half";
        case MetricKind::Variant::HomogeneousS: return ordered_json{{"homogeneous_s", k.s()}};
    }
    return "mu_half";
}

inline PeriodicField initial_field(const ordered_json& spec, const GridSpec& g) {
    if (spec.is_string()) {
        const std::string s = spec.get<std::string>();
        if (s == "rotation") return PeriodicField::constant(g, 1.0);
        if (s == "neg_sin")
            return PeriodicField::sample(g, [](double x) { return -std::sin(x); });
        if (s == "cos1") return PeriodicField::sample(g, [](double x) { return std::cos(x); });
        throw ConfigError("initial: unknown preset '" + s + "'");
    }
    if (spec.is_object()) {
        require_keys(spec, {"modes"}, "initial");
        PeriodicField f = PeriodicField::zero(g);
        for (const auto& row : spec.at("modes")) {
            if (!row.is_array() || row.size() != 3)
                throw ConfigError("initial.modes: entries are [n, amplitude, phase]");
            const int n = row[0].get<int>();
            const double amp = row[1].get<double>(), phase = row[2].get<double>();
            f = f + PeriodicField::harmonic(g, n, amp, phase);
        }
        return f;
    }
    throw ConfigError("initial: expected a preset name or {\"modes\": [...]}");
}

// deterministic order-preserving work pool: slot i is computed by exactly
// one worker, results land by index
template <typename F>
void parallel_for(int n, int threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) f(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace detail

inline ordered_json RunConfig::resolved() const {
    ordered_json j;
    j["schema"] = config_schema_id;
    j["subcommand"] = subcommand;
    j["metric"] = detail::metric_json(kind);
    j["grid_n"] = grid_n;
    j["dt"] = dt;
    j["horizon"] = horizon;
    j["record_stride"] = record_stride;
    j["initial"] = initial;
    j["probes"] = probes;
    j["seed"] = seed;
    j["threads"] = threads;
    j["out"] = out;
    if (!extra.empty()) j[subcommand] = extra;
    return j;
}

inline RunConfig parse_config(const ordered_json& j) {
    static const std::set<std::string> subs = {"simulate",  "jacobi",     "conjugate",
                                               "blowup",    "curvature",  "inequality",
                                               "distance",  "identities"};
    RunConfig cfg;
    std::set<std::string> allowed = {"schema",        "subcommand", "metric", "grid_n",
                                     "dt",            "horizon",    "record_stride",
                                     "initial",       "probes",     "seed",   "threads",
                                     "out"};
    // a single subcommand-specific block keyed by the subcommand name
    if (j.contains("subcommand") && j.at("subcommand").is_string())
        allowed.insert(j.at("subcommand").get<std::string>());
    detail::require_keys(j, allowed, "config");

    if (!j.contains("schema") || j.at("schema") != config_schema_id)
        throw ConfigError("config: schema must be '" + std::string(config_schema_id) + "'");
    if (!j.contains("subcommand")) throw ConfigError("config: missing subcommand");
    cfg.subcommand = j.at("subcommand").get<std::string>();
    if (!subs.count(cfg.subcommand))
        throw ConfigError("config: unknown subcommand '" + cfg.subcommand + "'");

    if (j.contains("metric")) cfg.kind = detail::parse_metric(j.at("metric"));
    if (j.contains("grid_n")) cfg.grid_n = j.at("grid_n").get<int>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<double>();
    if (j.contains("record_stride")) cfg.record_stride = j.at("record_stride").get<int>();
    if (j.contains("initial")) cfg.initial = j.at("initial");
    if (j.contains("probes")) cfg.probes = j.at("probes").get<std::vector<double>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains(cfg.subcommand)) cfg.extra = j.at(cfg.subcommand);

    if (cfg.grid_n < 8 || cfg.grid_n % 2 != 0)
        throw ConfigError("config: grid_n must be even and at least 8");
    if (cfg.dt <= 0.0 || cfg.horizon <= 0.0)
        throw ConfigError("config: dt and horizon must be positive");
    if (cfg.record_stride < 1) throw ConfigError("config: record_stride must be >= 1");
    if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");

    // validate the field spec early so bad configs fail before any output
    detail::initial_field(cfg.initial, GridSpec(cfg.grid_n));
    return cfg;
}

// ── subcommand runners ───────────────────────────────────────────────────────

namespace detail {

inline SolverConfig solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.kind = cfg.kind;
    sc.grid_n = cfg.grid_n;
    sc.dt = cfg.dt;
    sc.horizon = cfg.horizon;
    sc.record_stride = cfg.record_stride;
    return sc;
}

inline void manifest_status(ordered_json& m, const GeodesicTrajectory& traj) {
    m["status"] = to_string(traj.status);
    if (traj.status != RunStatus::Completed) {
        m["t_star_bracket"] = {traj.t_last_good, traj.t_first_bad};
        m["final_min_eta_x"] = traj.final_min_eta_x;
    }
}

inline int run_simulate(const RunConfig& cfg, const std::filesystem::path& dir,
                        ordered_json& manifest) {
    const GridSpec g(cfg.grid_n);
    auto traj = integrate_euler(solver_config(cfg), initial_field(cfg.initial, g));
    manifest_status(manifest, traj);

    std::vector<double> t, mean_om, min_ex, sup_om, sup_ux, cons;
    for (const auto& s : traj.snapshots) {
        t.push_back(s.t);
        mean_om.push_back(s.diag.mean_omega);
        min_ex.push_back(s.diag.min_eta_x);
        sup_om.push_back(s.diag.sup_omega);
        sup_ux.push_back(s.diag.sup_ux);
        cons.push_back(s.diag.conservation_residual);
    }
    write_series_csv(dir / "mean_omega.csv", "mean_omega", t, mean_om);
    write_series_csv(dir / "min_eta_x.csv", "min_eta_x", t, min_ex);
    write_series_csv(dir / "sup_omega.csv", "sup_omega", t, sup_om);
    write_series_csv(dir / "sup_ux.csv", "sup_ux", t, sup_ux);
    write_series_csv(dir / "conservation_residual.csv", "conservation_residual", t, cons);
    write_field_csv(dir / "u0.csv", traj.u0);
    write_json(dir / "u0_spectrum.json", field_spectrum_json(traj.u0));
    if (!traj.snapshots.empty()) write_field_csv(dir / "u_final.csv", traj.snapshots.back().u);
    return traj.status == RunStatus::NonFinite ? 1 : 0;
}

inline int run_jacobi(const RunConfig& cfg, const std::filesystem::path& dir,
                      ordered_json& manifest) {
    require_keys(cfg.extra, {"max_mode"}, "jacobi");
    const int max_mode = cfg.extra.value("max_mode", 8);
    const GridSpec g(cfg.grid_n);
    const PeriodicField u0 = initial_field(cfg.initial, g);
    auto traj = integrate_euler(solver_config(cfg), u0);
    manifest_status(manifest, traj);
    if (traj.status != RunStatus::Completed) return traj.status == RunStatus::NonFinite ? 1 : 0;

    const bool rotation = cfg.initial.is_string() && cfg.initial.get<std::string>() == "rotation";
    std::vector<PeriodicField> seeds;
    std::vector<std::string> labels;
    seeds.push_back(PeriodicField::constant(g, 1.0));
    labels.push_back("const");
    for (int n = 1; n <= max_mode; ++n) {
        seeds.push_back(PeriodicField::harmonic(g, n, 1.0, 0.0));
        labels.push_back("cos" + std::to_string(n));
        seeds.push_back(PeriodicField::harmonic(g, n, 1.0, -pi / 2));
        labels.push_back("sin" + std::to_string(n));
    }
    auto sols = jacobi_integrate_many(cfg.kind, traj, seeds);

    std::vector<std::vector<std::string>> rows;
    const double T = traj.snapshots.back().t;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const double sup_end = sols[i].v.back().sup_norm();
        std::vector<std::string> row{labels[i], fmt17(T), fmt17(sup_end)};
        if (rotation) {
            // closed-form endpoint: |v(T)| = |sin T| per mode, c₀·T for the mean
            const double closed = (labels[i] == "const") ? T : std::abs(std::sin(T));
            row.push_back(fmt17(closed));
            row.push_back(fmt17(std::abs(sup_end - closed)));
        }
        rows.push_back(std::move(row));
    }
    std::vector<std::string> header{"mode", "T", "sup_v_end"};
    if (rotation) {
        header.push_back("closed_sup_v_end");
        header.push_back("abs_err");
    }
    write_table_csv(dir / "jacobi_modes.csv", header, rows);
    return 0;
}

inline int run_conjugate(const RunConfig& cfg, const std::filesystem::path& dir,
                         ordered_json& manifest) {
    require_keys(cfg.extra, {"a", "b", "eps_ladder"}, "conjugate");
    const double a = cfg.extra.value("a", 0.0);
    const double b = cfg.extra.value("b", cfg.horizon);
    std::vector<double> ladder{0.1, 0.05, 0.025};
    if (cfg.extra.contains("eps_ladder"))
        ladder = cfg.extra.at("eps_ladder").get<std::vector<double>>();

    const GridSpec g(cfg.grid_n);
    auto traj = integrate_euler(solver_config(cfg), initial_field(cfg.initial, g));
    manifest_status(manifest, traj);
    if (traj.status != RunStatus::Completed) return traj.status == RunStatus::NonFinite ? 1 : 0;

    std::vector<double> probes = cfg.probes.empty() ? std::vector<double>{0.0} : cfg.probes;
    std::vector<std::string> header{"x0", "a", "b", "lhs", "threshold", "satisfied"};
    for (double e : ladder) header.push_back("I_eps_" + fmt17(e));
    std::vector<std::vector<std::string>> rows;
    for (double x0 : probes) {
        auto rep = conjugate_criterion(traj, x0, a, b);
        std::vector<std::string> row{fmt17(x0),        fmt17(a),
                                     fmt17(b),         fmt17(rep.lhs),
                                     fmt17(rep.threshold), rep.satisfied ? "1" : "0"};
        for (double e : ladder) {
            auto [tf, path] = build_test_field(traj, x0, a, b, e);
            row.push_back(fmt17(index_form(cfg.kind, traj, path, a, b, x0).value));
        }
        rows.push_back(std::move(row));
    }
    write_table_csv(dir / "conjugate_scan.csv", header, rows);
    return 0;
}

inline int run_blowup(const RunConfig& cfg, const std::filesystem::path& dir,
                      ordered_json& manifest) {
    require_keys(cfg.extra, {}, "blowup");
    const GridSpec g(cfg.grid_n);
    auto outcome = detect_blowup(solver_config(cfg), initial_field(cfg.initial, g), cfg.probes);
    const auto& rep = outcome.report;
    manifest_status(manifest, outcome.traj);

    ordered_json rj;
    rj["status"] = to_string(rep.status);
    rj["t_star_bracket"] = {rep.t_last_good, rep.t_first_bad};
    rj["min_eta_x"] = rep.min_eta_x;
    rj["x_star"] = rep.x_star;
    rj["omega0_at_xstar"] = rep.omega0_at_xstar;
    rj["bkm_omega"] = rep.bkm_omega;
    rj["bkm_ux"] = rep.bkm_ux;
    rj["min_F"] = rep.min_F;
    rj["localized"] = rep.localized;
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks)
        checks.push_back(ordered_json{{"x0", c.x0},
                                      {"omega0", c.omega0_at},
                                      {"u0_prime", c.u0_prime},
                                      {"bound", c.bound},
                                      {"applicable", c.applicable},
                                      {"satisfied", c.satisfied}});
    rj["theorem_checks"] = checks;
    write_json(dir / "blowup_report.json", rj);

    std::vector<double> t, min_ex, sup_om, bkm_om, bkm_ux, minf;
    double rom = 0.0, rux = 0.0;
    const auto& snaps = outcome.traj.snapshots;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        if (i > 0) {
            const double h = snaps[i].t - snaps[i - 1].t;
            rom += 0.5 * h * (snaps[i - 1].diag.sup_omega + snaps[i].diag.sup_omega);
            rux += 0.5 * h * (snaps[i - 1].diag.sup_ux + snaps[i].diag.sup_ux);
        }
        t.push_back(snaps[i].t);
        min_ex.push_back(snaps[i].diag.min_eta_x);
        sup_om.push_back(snaps[i].diag.sup_omega);
        bkm_om.push_back(rom);
        bkm_ux.push_back(rux);
        if (i < rep.min_F_snapshots.size()) minf.push_back(rep.min_F_snapshots[i]);
    }
    write_series_csv(dir / "min_eta_x.csv", "min_eta_x", t, min_ex);
    write_series_csv(dir / "sup_omega.csv", "sup_omega", t, sup_om);
    write_series_csv(dir / "bkm_omega_running.csv", "bkm_omega_running", t, bkm_om);
    write_series_csv(dir / "bkm_ux_running.csv", "bkm_ux_running", t, bkm_ux);
    if (minf.size() == t.size()) write_series_csv(dir / "min_F.csv", "min_F", t, minf);
    return rep.status == RunStatus::NonFinite ? 1 : 0;
}

inline int run_curvature(const RunConfig& cfg, const std::filesystem::path& dir,
                         ordered_json& manifest) {
    require_keys(cfg.extra, {"family", "s", "pairs", "n_fixed", "m_range"}, "curvature");
    const std::string family = cfg.extra.value("family", "mu_half_table");
    const double s = cfg.extra.value("s", 1.0);
    MetricKind kind = MetricKind::mu_half();
    CurvatureFamily fam = CurvatureFamily::mu_half_table();
    if (family == "homogeneous_s") {
        kind = (s == 0.0) ? MetricKind::homogeneous_s0() : MetricKind::homogeneous_s(s);
        fam = CurvatureFamily::homogeneous_s(s);
    } else if (family != "mu_half_table") {
        throw ConfigError("curvature.family: 'mu_half_table' or 'homogeneous_s'");
    }

    std::vector<std::vector<std::string>> rows;
    auto add_row = [&](int m, int n, const std::string& label, double num,
                       std::optional<double> closed) {
        std::vector<std::string> row{std::to_string(m), std::to_string(n), fam.name(), label,
                                     fmt17(num)};
        row.push_back(closed ? fmt17(*closed) : "");
        row.push_back(closed ? fmt17(num / *closed) : "");
        rows.push_back(std::move(row));
    };

    const GridSpec g(cfg.grid_n);
    if (cfg.extra.value("pairs", std::string("default")) == "default" &&
        !cfg.extra.contains("m_range")) {
        const int pairs[][2] = {{1, 2}, {1, 3}, {2, 3}, {2, 5}};
        for (auto& p : pairs) {
            auto sinm = PeriodicField::harmonic(g, p[0], 1.0, -pi / 2);
            auto sinn = PeriodicField::harmonic(g, p[1], 1.0, -pi / 2);
            const double num = sectional_curvature(kind, sinm, sinn).K;
            std::optional<double> closed;
            try {
                closed = closed_form_K(fam, PairType::SinSin, p[0], p[1]);
            } catch (const OrderViolation&) {
            }
            add_row(p[0], p[1], "sin/sin", num, closed);
        }
        if (family == "mu_half_table") {
            // the mixed same-mode plane carries the negative direction
            auto s1 = PeriodicField::harmonic(g, 1, 1.0, -pi / 2);
            auto c1 = PeriodicField::harmonic(g, 1, 1.0, 0.0);
            add_row(1, 1, "sin/cos", sectional_curvature(kind, s1, c1).K,
                    closed_form_K(fam, PairType::SinCos, 1, 1));
        }
    } else {
        const int n_fixed = cfg.extra.value("n_fixed", 2);
        std::vector<int> m_range = cfg.extra.value("m_range", std::vector<int>{3, 4, 5, 6});
        auto scan = curvature_scan(kind, n_fixed, m_range, family == "mu_half_table", cfg.grid_n);
        for (const auto& r : scan.rows)
            add_row(r.m, r.n, r.pair, r.K_numeric, r.K_closed);
        manifest["sign_census"] = {{"negative", scan.negative_count},
                                   {"positive", scan.positive_count}};
    }
    write_table_csv(dir / "curvature_scan.csv",
                    {"m", "n", "family", "pair", "K_numeric", "K_closed", "ratio"}, rows);
    return 0;
}

inline int run_inequality(const RunConfig& cfg, const std::filesystem::path& dir,
                          ordered_json& manifest) {
    require_keys(cfg.extra, {"trials", "p_values", "max_mode"}, "inequality");
    const int trials = cfg.extra.value("trials", 100);
    const int max_mode = cfg.extra.value("max_mode", 32);
    std::vector<double> ps{0.5, 1.0, 2.0, 3.0, 4.0};
    if (cfg.extra.contains("p_values")) ps = cfg.extra.at("p_values").get<std::vector<double>>();

    const GridSpec g(cfg.grid_n);
    ordered_json summary = ordered_json::array();
    for (double p : ps) {
        std::vector<double> mins(trials), discs(trials);
        parallel_for(trials, cfg.threads, [&](int i) {
            auto f = random_field(g, cfg.seed + 1000 * static_cast<std::uint64_t>(p * 10) + i,
                                  {.max_mode = max_mode, .amplitude = 0.7, .decay = 2.5,
                                   .zero_mean = false});
            auto a = gp_direct(f, p);
            auto b = gp_series(f, p);
            discs[i] = (a - b).sup_norm();
            double m = b.samples()[0];
            for (double v : b.samples()) m = std::min(m, v);
            mins[i] = m;
        });
        double min_over = mins[0], max_disc = 0.0;
        for (int i = 0; i < trials; ++i) {
            min_over = std::min(min_over, mins[i]);
            max_disc = std::max(max_disc, discs[i]);
        }
        summary.push_back(ordered_json{{"p", p},
                                       {"trials", trials},
                                       {"min_over_trials", min_over},
                                       {"max_route_discrepancy", max_disc},
                                       {"seed", cfg.seed}});
    }
    write_json(dir / "inequality_summary.json", summary);
    manifest["p_values"] = ps;
    return 0;
}

inline int run_distance(const RunConfig& cfg, const std::filesystem::path& dir,
                        ordered_json& manifest) {
    require_keys(cfg.extra, {"lambda", "theta_star", "ladder"}, "distance");
    const double lambda = cfg.extra.value("lambda", 0.9);
    const double theta_star = cfg.extra.value("theta_star", 1.0);
    std::vector<double> ladder{4.0, 16.0, 64.0, 256.0};
    if (cfg.extra.contains("ladder"))
        ladder = cfg.extra.at("ladder").get<std::vector<double>>();

    std::vector<EnergyReport> reps(ladder.size());
    parallel_for(static_cast<int>(ladder.size()), cfg.threads, [&](int i) {
        ShortcutOptions opt;
        opt.grid_n = std::max(cfg.grid_n, 2048);
        reps[i] = shortcut_run(ladder[i], lambda, theta_star, opt);
    });
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reps)
        rows.push_back({fmt17(r.n_param), fmt17(r.norm2), fmt17(r.t_end), fmt17(r.energy),
                        fmt17(r.endpoint_error), r.horizon_exceeded ? "1" : "0"});
    write_table_csv(dir / "distance_ladder.csv",
                    {"N_param", "norm2", "T_end", "E", "endpoint_error", "horizon_exceeded"},
                    rows);
    manifest["lambda"] = lambda;
    manifest["theta_star"] = theta_star;
    return 0;
}

inline int run_identities(const RunConfig& cfg, const std::filesystem::path& dir,
                          ordered_json& manifest) {
    require_keys(cfg.extra, {"trials", "max_mode"}, "identities");
    const int trials = cfg.extra.value("trials", 100);
    const int max_mode = cfg.extra.value("max_mode", 64);
    const GridSpec g(cfg.grid_n);
    std::vector<double> hh(trials), iso(trials), prod(trials), selfp(trials);
    parallel_for(trials, cfg.threads, [&](int i) {
        auto f = random_field(g, cfg.seed + i, {.max_mode = max_mode, .zero_mean = false});
        auto f0 = f - PeriodicField::constant(g, mean(f));
        hh[i] = (hilbert(hilbert(f)) + f0).sup_norm();
        iso[i] = std::abs(hilbert(f).l2_norm() - f0.l2_norm());
        auto h = random_field(g, cfg.seed + 100000 + i, {.max_mode = max_mode});
        prod[i] = product_identity_residual(f0, h);
        selfp[i] = product_identity_residual(f0, f0);
    });
    auto maxv = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    };
    ordered_json j{{"trials", trials},
                   {"seed", cfg.seed},
                   {"max_mode", max_mode},
                   {"max_hh_residual", maxv(hh)},
                   {"max_isometry_residual", maxv(iso)},
                   {"max_product_formula_residual", maxv(prod)},
                   {"max_self_pair_residual", maxv(selfp)}};
    write_json(dir / "identities_summary.json", j);
    manifest["trials"] = trials;
    return 0;
}

} // namespace detail

// Runs one configured experiment; returns the process exit code.
inline int run(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    ordered_json manifest;
    manifest["config"] = cfg.resolved();

    int code = 0;
    if (cfg.subcommand == "simulate") code = detail::run_simulate(cfg, dir, manifest);
    else if (cfg.subcommand == "jacobi") code = detail::run_jacobi(cfg, dir, manifest);
    else if (cfg.subcommand == "conjugate") code = detail::run_conjugate(cfg, dir, manifest);
    else if (cfg.subcommand == "blowup") code = detail::run_blowup(cfg, dir, manifest);
    else if (cfg.subcommand == "curvature") code = detail::run_curvature(cfg, dir, manifest);
    else if (cfg.subcommand == "inequality") code = detail::run_inequality(cfg, dir, manifest);
    else if (cfg.subcommand == "distance") code = detail::run_distance(cfg, dir, manifest);
    else if (cfg.subcommand == "identities") code = detail::run_identities(cfg, dir, manifest);
    else throw ConfigError("unknown subcommand " + cfg.subcommand);

    manifest["exit_code"] = code;
    write_json(dir / "manifest.json", manifest);
    return code;
}

// argv-style entry point used by the binary and by the tests
inline int run_cli(const std::vector<std::string>& args) {
    std::string config_path, out_override, sub_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;

    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        auto need_value = [&](const char* flag) -> const std::string& {
            if (i + 1 >= args.size())
                throw ConfigError(std::string(flag) + " requires a value");
            return args[++i];
        };
        if (a == "--config") config_path = need_value("--config");
        else if (a == "--out") out_override = need_value("--out");
        else if (a == "--seed") seed_override = std::stoull(need_value("--seed"));
        else if (a == "--threads") threads_override = std::stoi(need_value("--threads"));
        else if (a == "--subcommand") sub_override = need_value("--subcommand");
        else throw ConfigError("unknown flag '" + a + "'");
    }
    if (config_path.empty()) throw ConfigError("--config PATH is required");

    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!sub_override.empty()) j["subcommand"] = sub_override;
    RunConfig cfg = parse_config(j);
    if (!out_override.empty()) cfg.out = out_override;
    if (seed_override) cfg.seed = *seed_override;
    if (threads_override) cfg.threads = *threads_override;
    return run(cfg);
}

} // namespace wunsch

// geodesic.hpp — the Euler–Arnold flow on Diff(S¹) in three formulations.
//
//  (1) momentum form (primary integrator):
//        ω_t + uω_x + 2ωu_x = 0,  ω = Au,  u = A⁻¹ω,
//      advanced together with the Lagrangian data
//        η_t = u∘η,   ∂_t log η_x = u_x∘η,
//      so the conservation law η_x²·(ω∘η) = ω₀ is available as an
//      accuracy gauge at every snapshot.
//
//  (2) Ebin's first-order form:  η_t = A_η⁻¹((Au₀)/η_x²)
//      with A_η⁻¹ = R_η ∘ A⁻¹ ∘ R_{η⁻¹}.
//
//  (3) second-order spray form:  η_tt = S_η(η_t),
//      S(u) = A⁻¹{A(u u_x) − u(Au)_x − 2(Au)u_x},  S_η(v) = S(v∘η⁻¹)∘η.
//
// Time stepping is classical fixed-step RK4.  Blowup is a result, not an
// error: collapse of min η_x below a threshold (default 1e−3) terminates
// the run with status Blowup and a bracket [t_last_good, t_first_bad];
// an ‖ω‖_∞ cap triggers step halving (bounded number) before giving up.

#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "wunsch/diffeo.hpp"
#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"
#include "wunsch/metric.hpp"

namespace wunsch {

enum class RunStatus { Completed, Blowup, NonFinite };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::Blowup: return "blowup";
        case RunStatus::NonFinite: return "nonfinite";
    }
    return "?";
}

struct SolverConfig {
    MetricKind kind = MetricKind::mu_half();
    int grid_n = 256;
    double dt = 1e-3;
    double horizon = 1.0;
    int record_stride = 1;
    double blowup_omega_cap = 1e5; // ‖ω‖_∞ above this triggers dt halving
    int max_halvings = 8;
    double min_eta_x = 1e-3;       // blowup declared below this

    void validate() const {
        if (dt <= 0.0) throw std::invalid_argument("SolverConfig: dt must be positive");
        if (horizon <= 0.0) throw std::invalid_argument("SolverConfig: horizon must be positive");
        if (record_stride < 1) throw std::invalid_argument("SolverConfig: record_stride >= 1");
    }
};

// ── right-hand sides ─────────────────────────────────────────────────────────

// ω̇ = −(uω_x + 2ωu_x), u = A⁻¹ω, quadratic terms dealiased (2/3 rule)
inline PeriodicField euler_rhs(const MetricKind& kind, const PeriodicField& omega) {
    const PeriodicField u = inertia_invert(kind, omega);
    return -1.0 * (product_dealiased(u, derivative(omega)) +
                   2.0 * product_dealiased(omega, derivative(u)));
}

// Eulerian acceleration u_t = −ad_u^⊤u = −A⁻¹(2(Au)u_x + u(Au)_x)
inline PeriodicField eulerian_acceleration(const MetricKind& kind, const PeriodicField& u) {
    const PeriodicField au = inertia_apply(kind, u);
    return -1.0 * inertia_invert(kind, product_dealiased(2.0 * au, derivative(u)) +
                                           product_dealiased(u, derivative(au)));
}

// η_t = (A⁻¹[((Au₀)/η_x²)∘η⁻¹])∘η, as a field over the Lagrangian labels.
inline PeriodicField ebin_rhs(const MetricKind& kind, const Diffeo& eta,
                              const PeriodicField& u0,
                              const std::vector<double>* warm_inverse = nullptr) {
    if (kind.degenerate())
        throw DegenerateKindError("ebin_rhs: not defined for degenerate inertia operators");
    require_same_grid(eta.grid(), u0.grid(), "ebin_rhs");
    const PeriodicField au0 = inertia_apply(kind, u0);
    std::vector<double> w(eta.grid().n);
    for (int j = 0; j < eta.grid().n; ++j) {
        const double ex = eta.deriv().samples()[j];
        w[j] = au0.samples()[j] / (ex * ex);
    }
    const Diffeo inv = invert_diffeo(eta, warm_inverse);
    const PeriodicField pulled = compose(PeriodicField::from_samples(eta.grid(), std::move(w)), inv);
    return compose(inertia_invert(kind, pulled), eta);
}

// spray S(u) = A⁻¹{A(uu_x) − u(Au)_x − 2(Au)u_x} at the identity
inline PeriodicField spray(const MetricKind& kind, const PeriodicField& u) {
    const PeriodicField ux = derivative(u);
    const PeriodicField au = inertia_apply(kind, u);
    const PeriodicField bracket = inertia_apply(kind, product_dealiased(u, ux)) -
                                  product_dealiased(u, derivative(au)) -
                                  2.0 * product_dealiased(au, ux);
    return inertia_invert(kind, bracket);
}

// S_η(v) = S(v∘η⁻¹)∘η
inline PeriodicField spray_rhs(const MetricKind& kind, const Diffeo& eta, const PeriodicField& v,
                               const std::vector<double>* warm_inverse = nullptr) {
    if (kind.degenerate())
        throw DegenerateKindError("spray_rhs: not defined for degenerate inertia operators");
    require_same_grid(eta.grid(), v.grid(), "spray_rhs");
    const Diffeo inv = invert_diffeo(eta, warm_inverse);
    return compose(spray(kind, compose(v, inv)), eta);
}

// ── trajectory ───────────────────────────────────────────────────────────────

struct SnapshotDiagnostics {
    double mean_omega = 0.0;
    double min_eta_x = 0.0;
    double sup_omega = 0.0;
    double sup_ux = 0.0;
    double conservation_residual = 0.0;
};

struct Snapshot {
    double t = 0.0;
    PeriodicField u, omega;
    Diffeo eta;
    PeriodicField eta_x; // ∫-advanced exp(log η_x), the conservation gauge
    SnapshotDiagnostics diag;
};

struct GeodesicTrajectory {
    MetricKind kind = MetricKind::mu_half();
    SolverConfig config;
    PeriodicField u0, omega0;
    std::vector<Snapshot> snapshots;
    RunStatus status = RunStatus::Completed;
    double t_last_good = 0.0;  // meaningful for Blowup/NonFinite
    double t_first_bad = 0.0;
    // state of the Lagrangian stretching at the final integrated time; kept
    // separately because near collapse the displacement interpolant may stop
    // being a storable diffeomorphism while log η_x remains meaningful
    double final_time = 0.0;
    double final_min_eta_x = 1.0;
    int argmin_node = 0;

    std::vector<double> times() const {
        std::vector<double> t(snapshots.size());
        for (std::size_t i = 0; i < snapshots.size(); ++i) t[i] = snapshots[i].t;
        return t;
    }

    std::size_t index_at(double t, double tol = 1e-9) const {
        for (std::size_t i = 0; i < snapshots.size(); ++i)
            if (std::abs(snapshots[i].t - t) <= tol) return i;
        throw std::invalid_argument("GeodesicTrajectory: no snapshot at t = " + std::to_string(t));
    }
};

// max over nodes of |η_x²·(ω∘η) − ω₀| at a stored snapshot
inline double conservation_residual(const GeodesicTrajectory& traj, std::size_t t_index) {
    const Snapshot& s = traj.snapshots.at(t_index);
    const PeriodicField omega_along = compose(s.omega, s.eta);
    double worst = 0.0;
    for (int j = 0; j < s.u.size(); ++j) {
        const double ex = s.eta_x.samples()[j];
        worst = std::max(worst,
                         std::abs(ex * ex * omega_along.samples()[j] - traj.omega0.samples()[j]));
    }
    return worst;
}

namespace detail {

struct EulerState {
    std::vector<double> omega; // samples
    std::vector<double> p;     // displacement samples
    std::vector<double> logex; // log η_x samples
};

inline EulerState axpy(const EulerState& y, double a, const EulerState& d) {
    EulerState out = y;
    for (std::size_t i = 0; i < out.omega.size(); ++i) {
        out.omega[i] += a * d.omega[i];
        out.p[i] += a * d.p[i];
        out.logex[i] += a * d.logex[i];
    }
    return out;
}

inline EulerState euler_state_rhs(const MetricKind& kind, const GridSpec& g, const EulerState& y) {
    const PeriodicField omega = PeriodicField::from_samples(g, y.omega);
    const PeriodicField u = inertia_invert(kind, omega);
    const PeriodicField omega_dot = -1.0 * (product_dealiased(u, derivative(omega)) +
                                            2.0 * product_dealiased(omega, derivative(u)));
    const PeriodicField ux = derivative(u);
    EulerState d;
    d.omega = omega_dot.samples();
    d.p.resize(g.n);
    d.logex.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double yj = g.node(j) + y.p[j];
        d.p[j] = u.evaluate(yj);
        d.logex[j] = ux.evaluate(yj);
    }
    return d;
}

inline EulerState rk4_step(const MetricKind& kind, const GridSpec& g, const EulerState& y,
                           double h) {
    const EulerState k1 = euler_state_rhs(kind, g, y);
    const EulerState k2 = euler_state_rhs(kind, g, axpy(y, 0.5 * h, k1));
    const EulerState k3 = euler_state_rhs(kind, g, axpy(y, 0.5 * h, k2));
    const EulerState k4 = euler_state_rhs(kind, g, axpy(y, h, k3));
    EulerState out = y;
    for (std::size_t i = 0; i < out.omega.size(); ++i) {
        out.omega[i] += h / 6.0 * (k1.omega[i] + 2 * k2.omega[i] + 2 * k3.omega[i] + k4.omega[i]);
        out.p[i] += h / 6.0 * (k1.p[i] + 2 * k2.p[i] + 2 * k3.p[i] + k4.p[i]);
        out.logex[i] += h / 6.0 * (k1.logex[i] + 2 * k2.logex[i] + 2 * k3.logex[i] + k4.logex[i]);
    }
    return out;
}

inline bool state_finite(const EulerState& y) {
    for (double v : y.omega) if (!std::isfinite(v)) return false;
    for (double v : y.p) if (!std::isfinite(v)) return false;
    for (double v : y.logex) if (!std::isfinite(v)) return false;
    return true;
}

inline double min_logex(const EulerState& y) {
    double m = y.logex[0];
    for (double v : y.logex) m = std::min(m, v);
    return m;
}

} // namespace detail

inline GeodesicTrajectory integrate_euler(const SolverConfig& cfg, const PeriodicField& u0) {
    cfg.validate();
    if (u0.size() != cfg.grid_n)
        throw GridMismatch("integrate_euler: u0 does not live on the configured grid");
    if (cfg.kind.degenerate() && std::abs(u0.mean()) > mean_gauge_tolerance(u0))
        throw DegenerateMeanError("integrate_euler: degenerate kind requires mean-zero u0");

    const GridSpec g = u0.grid();
    GeodesicTrajectory traj;
    traj.kind = cfg.kind;
    traj.config = cfg;
    traj.u0 = u0;
    traj.omega0 = inertia_apply(cfg.kind, u0);

    detail::EulerState y;
    y.omega = traj.omega0.samples();
    y.p.assign(g.n, 0.0);
    y.logex.assign(g.n, 0.0);

    auto try_record = [&](double t, const detail::EulerState& s) -> bool {
        PeriodicField omega = PeriodicField::from_samples(g, s.omega);
        PeriodicField u = inertia_invert(cfg.kind, omega);
        PeriodicField p = PeriodicField::from_samples(g, s.p);
        std::optional<Diffeo> eta;
        try {
            eta = Diffeo::from_displacement(p);
        } catch (const NotADiffeo&) {
            return false; // displacement interpolant degenerated; skip storing
        }
        std::vector<double> ex(g.n);
        for (int j = 0; j < g.n; ++j) ex[j] = std::exp(s.logex[j]);
        PeriodicField eta_x = PeriodicField::from_samples(g, std::move(ex));

        Snapshot snap{t, u, omega, *eta, eta_x, {}};
        snap.diag.mean_omega = omega.mean();
        snap.diag.min_eta_x = std::exp(detail::min_logex(s));
        snap.diag.sup_omega = omega.sup_norm();
        snap.diag.sup_ux = derivative(u).sup_norm();
        const PeriodicField omega_along = compose(omega, *eta);
        double worst = 0.0;
        for (int j = 0; j < g.n; ++j)
            worst = std::max(worst, std::abs(eta_x.samples()[j] * eta_x.samples()[j] *
                                                 omega_along.samples()[j] -
                                             traj.omega0.samples()[j]));
        snap.diag.conservation_residual = worst;
        traj.snapshots.push_back(std::move(snap));
        return true;
    };

    auto note_final = [&](double t, const detail::EulerState& s) {
        traj.final_time = t;
        double m = s.logex[0];
        int arg = 0;
        for (int j = 0; j < g.n; ++j)
            if (s.logex[j] < m) { m = s.logex[j]; arg = j; }
        traj.final_min_eta_x = std::exp(m);
        traj.argmin_node = arg;
    };

    try_record(0.0, y);

    double t = 0.0;
    double dt_cur = cfg.dt;
    int halvings = 0;
    int since_record = 0;
    const double t_end = cfg.horizon;

    while (t < t_end * (1.0 - 1e-14) && t_end - t > 1e-15) {
        const double h = std::min(dt_cur, t_end - t);
        detail::EulerState ynext = detail::rk4_step(cfg.kind, g, y, h);

        if (!detail::state_finite(ynext)) {
            traj.status = RunStatus::NonFinite;
            traj.t_last_good = t;
            traj.t_first_bad = t + h;
            note_final(t, y);
            return traj;
        }

        double sup_omega = 0.0;
        for (double v : ynext.omega) sup_omega = std::max(sup_omega, std::abs(v));
        if (sup_omega > cfg.blowup_omega_cap && halvings < cfg.max_halvings) {
            dt_cur *= 0.5;
            ++halvings;
            continue; // retry the step from the same state
        }

        t += h;
        y = std::move(ynext);
        ++since_record;

        const double min_ex = std::exp(detail::min_logex(y));
        if (min_ex < cfg.min_eta_x || sup_omega > cfg.blowup_omega_cap) {
            traj.status = RunStatus::Blowup;
            traj.t_last_good = t - h;
            traj.t_first_bad = t;
            try_record(t, y); // keep the crossing state when it is still storable
            note_final(t, y);
            return traj;
        }

        if (since_record >= cfg.record_stride) {
            if (try_record(t, y)) since_record = 0;
        }
    }

    if (since_record != 0 || traj.snapshots.back().t < t_end * (1.0 - 1e-14))
        try_record(t, y);
    note_final(t, y);
    traj.status = RunStatus::Completed;
    return traj;
}

// ── alternative formulations, returning the flow η(t) ────────────────────────

struct FlowPath {
    std::vector<double> times;
    std::vector<Diffeo> etas;
    std::vector<PeriodicField> eta_x; // exp of the advanced log η_x
    RunStatus status = RunStatus::Completed;
};

inline FlowPath integrate_ebin(const SolverConfig& cfg, const PeriodicField& u0) {
    cfg.validate();
    const GridSpec g = u0.grid();
    std::vector<double> p(g.n, 0.0);
    std::vector<double> warm(g.n, 0.0);
    FlowPath path;
    auto eta_of = [&](const std::vector<double>& q) {
        return Diffeo::from_displacement(PeriodicField::from_samples(g, q));
    };
    auto rhs = [&](const std::vector<double>& q) {
        return ebin_rhs(cfg.kind, eta_of(q), u0, &warm).samples();
    };
    auto shifted = [&](const std::vector<double>& q, double a, const std::vector<double>& d) {
        std::vector<double> out(q);
        for (int j = 0; j < g.n; ++j) out[j] += a * d[j];
        return out;
    };
    double t = 0.0;
    int since_record = cfg.record_stride; // record initial state
    const int steps = static_cast<int>(std::ceil(cfg.horizon / cfg.dt - 1e-12));
    for (int step = 0; step <= steps; ++step) {
        if (since_record >= cfg.record_stride || step == steps) {
            path.times.push_back(t);
            path.etas.push_back(eta_of(p));
            path.eta_x.push_back(path.etas.back().deriv());
            since_record = 0;
        }
        if (step == steps) break;
        const double h = std::min(cfg.dt, cfg.horizon - t);
        const auto k1 = rhs(p);
        const auto k2 = rhs(shifted(p, 0.5 * h, k1));
        const auto k3 = rhs(shifted(p, 0.5 * h, k2));
        const auto k4 = rhs(shifted(p, h, k3));
        for (int j = 0; j < g.n; ++j)
            p[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
        // warm-start the next inversion from the latest inverse displacement
        warm = invert_diffeo(eta_of(p), &warm).displacement().samples();
        t += h;
        ++since_record;
    }
    return path;
}

inline FlowPath integrate_spray(const SolverConfig& cfg, const PeriodicField& u0) {
    cfg.validate();
    const GridSpec g = u0.grid();
    std::vector<double> p(g.n, 0.0), v = u0.samples(), warm(g.n, 0.0);
    FlowPath path;
    auto eta_of = [&](const std::vector<double>& q) {
        return Diffeo::from_displacement(PeriodicField::from_samples(g, q));
    };
    struct D { std::vector<double> dp, dv; };
    auto rhs = [&](const std::vector<double>& q, const std::vector<double>& w) {
        D d;
        d.dp = w;
        d.dv = spray_rhs(cfg.kind, eta_of(q), PeriodicField::from_samples(g, w), &warm).samples();
        return d;
    };
    auto shifted = [&](const std::vector<double>& a, double s, const std::vector<double>& b) {
        std::vector<double> out(a);
        for (int j = 0; j < g.n; ++j) out[j] += s * b[j];
        return out;
    };
    double t = 0.0;
    int since_record = cfg.record_stride;
    const int steps = static_cast<int>(std::ceil(cfg.horizon / cfg.dt - 1e-12));
    for (int step = 0; step <= steps; ++step) {
        if (since_record >= cfg.record_stride || step == steps) {
            path.times.push_back(t);
            path.etas.push_back(eta_of(p));
            path.eta_x.push_back(path.etas.back().deriv());
            since_record = 0;
        }
        if (step == steps) break;
        const double h = std::min(cfg.dt, cfg.horizon - t);
        const D k1 = rhs(p, v);
        const D k2 = rhs(shifted(p, 0.5 * h, k1.dp), shifted(v, 0.5 * h, k1.dv));
        const D k3 = rhs(shifted(p, 0.5 * h, k2.dp), shifted(v, 0.5 * h, k2.dv));
        const D k4 = rhs(shifted(p, h, k3.dp), shifted(v, h, k3.dv));
        for (int j = 0; j < g.n; ++j) {
            p[j] += h / 6.0 * (k1.dp[j] + 2 * k2.dp[j] + 2 * k3.dp[j] + k4.dp[j]);
            v[j] += h / 6.0 * (k1.dv[j] + 2 * k2.dv[j] + 2 * k3.dv[j] + k4.dv[j]);
        }
        warm = invert_diffeo(eta_of(p), &warm).displacement().samples();
        t += h;
        ++since_record;
    }
    return path;
}

// Advance η, log η_x under a snapshot sequence of velocity fields, linear
// time interpolation between snapshots.  Records at the snapshot times.
inline FlowPath lagrangian_flow(const std::vector<double>& times,
                                const std::vector<PeriodicField>& u_series, double dt) {
    if (times.size() != u_series.size() || times.size() < 2)
        throw std::invalid_argument("lagrangian_flow: need matching times and fields");
    const GridSpec g = u_series.front().grid();
    std::vector<PeriodicField> ux_series;
    ux_series.reserve(u_series.size());
    for (const auto& u : u_series) ux_series.push_back(derivative(u));

    auto velocity_at = [&](double t, double y, bool deriv) {
        // locate the bracketing snapshots (times need not be uniform)
        auto it = std::upper_bound(times.begin(), times.end(), t);
        std::size_t i = (it == times.begin()) ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
        i = std::min(i, times.size() - 2);
        const double ta = times[i], tb = times[i + 1];
        const double th = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
        const auto& fa = deriv ? ux_series[i] : u_series[i];
        const auto& fb = deriv ? ux_series[i + 1] : u_series[i + 1];
        return (1.0 - th) * fa.evaluate(y) + th * fb.evaluate(y);
    };

    std::vector<double> p(g.n, 0.0), logex(g.n, 0.0);
    FlowPath path;
    auto try_record = [&](double t) -> bool {
        try {
            Diffeo eta = Diffeo::from_displacement(PeriodicField::from_samples(g, p));
            std::vector<double> ex(g.n);
            for (int j = 0; j < g.n; ++j) ex[j] = std::exp(logex[j]);
            path.times.push_back(t);
            path.etas.push_back(std::move(eta));
            path.eta_x.push_back(PeriodicField::from_samples(g, std::move(ex)));
            return true;
        } catch (const NotADiffeo&) {
            path.status = RunStatus::Blowup;
            return false;
        }
    };

    if (!try_record(times.front())) return path;
    double t = times.front();
    std::size_t next_rec = 1;
    const double t_end = times.back();
    while (t < t_end - 1e-14) {
        const double h = std::min(dt, times[next_rec] - t);
        auto stage = [&](double tt, const std::vector<double>& q, std::vector<double>& dp,
                         std::vector<double>& dl) {
            dp.resize(g.n);
            dl.resize(g.n);
            for (int j = 0; j < g.n; ++j) {
                const double yj = g.node(j) + q[j];
                dp[j] = velocity_at(tt, yj, false);
                dl[j] = velocity_at(tt, yj, true);
            }
        };
        std::vector<double> k1p, k1l, k2p, k2l, k3p, k3l, k4p, k4l, tmp(g.n);
        stage(t, p, k1p, k1l);
        for (int j = 0; j < g.n; ++j) tmp[j] = p[j] + 0.5 * h * k1p[j];
        stage(t + 0.5 * h, tmp, k2p, k2l);
        for (int j = 0; j < g.n; ++j) tmp[j] = p[j] + 0.5 * h * k2p[j];
        stage(t + 0.5 * h, tmp, k3p, k3l);
        for (int j = 0; j < g.n; ++j) tmp[j] = p[j] + h * k3p[j];
        stage(t + h, tmp, k4p, k4l);
        for (int j = 0; j < g.n; ++j) {
            p[j] += h / 6.0 * (k1p[j] + 2 * k2p[j] + 2 * k3p[j] + k4p[j]);
            logex[j] += h / 6.0 * (k1l[j] + 2 * k2l[j] + 2 * k3l[j] + k4l[j]);
        }
        t += h;
        if (std::abs(t - times[next_rec]) < 1e-12) {
            if (!try_record(t)) return path;
            if (next_rec + 1 < times.size()) ++next_rec;
        }
    }
    return path;
}

} // namespace wunsch

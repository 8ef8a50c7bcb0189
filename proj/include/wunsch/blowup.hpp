// blowup.hpp — blowup criteria, the Lagrangian reduction, and §-style
// energy monitors for the Wunsch equation.
//
// For mean-zero solutions the Lagrangian stretching obeys
//
//     η_xtt(t,x) = ω₀(x)²/η_x³ − F(t, η(t,x))·η_x,
//     F = −u u_xx − H(u H u_xx)  (pointwise positive; F = g₂ of the
//                                 inequality family),
//
// i.e. per particle the Ermakov–Pinney equation r″ + Ω(t)²r = c²/r³ with
// c = ω₀(x) and Ω² = F∘η.  Zero angular momentum (ω₀(x₀) = 0) with
// u₀′(x₀) < 0 forces r to reach zero before 1/|u₀′(x₀)|.
//
// The BKM-style criterion monitors ∫‖ω‖_∞ dt (and ∫‖u_x‖_∞ dt), with the
// localized variant ∫|ω(t, η(t,x₀))| dt = |ω₀(x₀)| ∫ η_x(τ,x₀)⁻² dτ per
// probe particle, and the H² energy identity
//     d/dt ∫u_xx² = −3∫u_x ω_x² − 2∫u_x u_xx²
// is checked by centered differences across snapshots.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"
#include "wunsch/geodesic.hpp"
#include "wunsch/inequalities.hpp"

namespace wunsch {

// F = −u u_xx − H(u H u_xx), evaluated alias-free on a doubled grid.
inline PeriodicField forcing_F(const PeriodicField& u) {
    if (std::abs(u.mean()) > 1e-9 * std::max(1.0, u.sup_norm()))
        throw MeanNotZero("forcing_F: requires mean-zero velocity");
    const GridSpec big(2 * u.size());
    const PeriodicField ub = pad_to(u, big);
    const PeriodicField uxx = derivative(derivative(ub));
    auto pw = [&big](const PeriodicField& a, const PeriodicField& b) {
        std::vector<double> s(big.n);
        for (int j = 0; j < big.n; ++j) s[j] = a.samples()[j] * b.samples()[j];
        return PeriodicField::from_samples(big, std::move(s));
    };
    const PeriodicField combo = -1.0 * pw(ub, uxx) - hilbert(pw(ub, hilbert(uxx)));
    return restrict_to(combo, u.grid());
}

// sign-exact evaluation through the tail-sum series (F = g₂ identically)
inline PeriodicField forcing_F_series(const PeriodicField& u) { return gp_series(u, 2.0); }

// sup-norm of u_tx + u_x² + u u_xx − ω² + F with all products alias-free
inline double velocity_derivative_residual(const MetricKind& kind, const PeriodicField& u) {
    const GridSpec big(2 * u.size());
    const PeriodicField ub = pad_to(u, big);
    auto pw = [&big](const PeriodicField& a, const PeriodicField& b) {
        std::vector<double> s(big.n);
        for (int j = 0; j < big.n; ++j) s[j] = a.samples()[j] * b.samples()[j];
        return PeriodicField::from_samples(big, std::move(s));
    };
    const PeriodicField omega = inertia_apply(kind, ub);
    const PeriodicField ut =
        -1.0 * inertia_invert(kind, pw(ub, derivative(omega)) + 2.0 * pw(omega, derivative(ub)));
    const PeriodicField ux = derivative(ub);
    const PeriodicField uxx = derivative(ux);
    const PeriodicField f = -1.0 * pw(ub, uxx) - hilbert(pw(ub, hilbert(uxx)));
    const PeriodicField res = derivative(ut) + pw(ux, ux) + pw(ub, uxx) - pw(omega, omega) + f;
    return res.sup_norm();
}

// ── Ermakov–Pinney per-particle reduction ───────────────────────────────────

struct ErmakovState {
    int node = 0;
    double c = 0.0; // conserved angular constant ω₀(x)
    std::vector<double> times;
    std::vector<double> r, rprime;
    std::vector<double> omega2; // forcing trace Ω²(t) = F(t, η(t,x))
    std::optional<double> zero_time; // first time r reaches zero, if it does
};

// integrates r″ = c²/r³ − Ω(t)² r for the particle at grid node `node`,
// with Ω² sampled from the Eulerian run at the snapshots and interpolated
// linearly; same step size as the trajectory.
inline ErmakovState ermakov_flow(const GeodesicTrajectory& traj, int node) {
    if (std::abs(traj.u0.mean()) > 1e-9 * std::max(1.0, traj.u0.sup_norm()))
        throw MeanNotZero("ermakov_flow: requires a mean-zero trajectory");
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 2) throw std::invalid_argument("ermakov_flow: too few snapshots");
    const GridSpec& g = traj.u0.grid();
    if (node < 0 || node >= g.n) throw std::invalid_argument("ermakov_flow: node out of range");

    ErmakovState st;
    st.node = node;
    st.c = traj.omega0.samples()[node];

    // forcing trace along the particle, from the stored Eulerian fields
    std::vector<double> tsnap(snaps.size());
    st.omega2.resize(snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        tsnap[i] = snaps[i].t;
        const double pos = g.node(node) + snaps[i].eta.displacement().samples()[node];
        st.omega2[i] = forcing_F_series(snaps[i].u).evaluate(pos);
    }
    auto omega2_at = [&](double t) {
        auto it = std::upper_bound(tsnap.begin(), tsnap.end(), t);
        std::size_t i = (it == tsnap.begin()) ? 0 : static_cast<std::size_t>(it - tsnap.begin()) - 1;
        i = std::min(i, tsnap.size() - 2);
        const double th = std::clamp((t - tsnap[i]) / (tsnap[i + 1] - tsnap[i]), 0.0, 1.0);
        return (1.0 - th) * st.omega2[i] + th * st.omega2[i + 1];
    };

    double r = 1.0;
    double v = derivative(traj.u0).samples()[node]; // r′(0) = u₀′(x)
    double t = tsnap.front();
    const double c2 = st.c * st.c;
    auto acc = [&](double tt, double rr) { return c2 / (rr * rr * rr) - omega2_at(tt) * rr; };

    std::size_t next = 0;
    const double dt = traj.config.dt;
    while (true) {
        if (next < tsnap.size() && t >= tsnap[next] - 1e-12) {
            st.times.push_back(tsnap[next]);
            st.r.push_back(r);
            st.rprime.push_back(v);
            ++next;
        }
        if (next >= tsnap.size()) break;
        const double h = std::min(dt, tsnap[next] - t);
        // classical RK4 on (r, r′)
        const double k1r = v, k1v = acc(t, r);
        const double k2r = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, r + 0.5 * h * k1r);
        const double k3r = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, r + 0.5 * h * k2r);
        const double k4r = v + h * k3v, k4v = acc(t + h, r + h * k3r);
        const double rn = r + h / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r);
        const double vn = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        if (!(rn > 0.0)) {
            // linear bracket of the zero crossing
            st.zero_time = t + h * r / std::max(r - rn, 1e-300);
            break;
        }
        r = rn;
        v = vn;
        t += h;
    }
    return st;
}

// ── BKM integrals ────────────────────────────────────────────────────────────

struct BkmIntegrals {
    double int_sup_omega = 0.0;
    double int_sup_ux = 0.0;
    std::vector<double> localized; // ∫|ω(t, η(t,x₀))| dt per probe
};

inline BkmIntegrals bkm_integrals(const GeodesicTrajectory& traj,
                                  const std::vector<double>& probes = {}) {
    const auto& snaps = traj.snapshots;
    BkmIntegrals out;
    out.localized.assign(probes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
        const double h = snaps[i + 1].t - snaps[i].t;
        out.int_sup_omega += 0.5 * h * (snaps[i].diag.sup_omega + snaps[i + 1].diag.sup_omega);
        out.int_sup_ux += 0.5 * h * (snaps[i].diag.sup_ux + snaps[i + 1].diag.sup_ux);
    }
    for (std::size_t p = 0; p < probes.size(); ++p) {
        auto value = [&](std::size_t i) {
            const double pos = probes[p] + snaps[i].eta.displacement().evaluate(probes[p]);
            return std::abs(snaps[i].omega.evaluate(pos));
        };
        double prev = value(0);
        for (std::size_t i = 1; i < snaps.size(); ++i) {
            const double cur = value(i);
            out.localized[p] += 0.5 * (snaps[i].t - snaps[i - 1].t) * (prev + cur);
            prev = cur;
        }
    }
    return out;
}

// ── H² energy identity ───────────────────────────────────────────────────────

// RHS of d/dt ∫u_xx² = −3∫u_x ω_x² − 2∫u_x u_xx²  at a snapshot
inline double h2_identity_rhs(const Snapshot& s) {
    const PeriodicField ux = derivative(s.u);
    const PeriodicField uxx = derivative(ux);
    const PeriodicField wx = derivative(s.omega);
    return -3.0 * integral_triple(ux, wx, wx) - 2.0 * integral_triple(ux, uxx, uxx);
}

// |centered-difference d/dt ∫u_xx² − RHS| at an interior snapshot
inline double h2_identity_residual(const GeodesicTrajectory& traj, std::size_t t_index) {
    const auto& snaps = traj.snapshots;
    if (t_index == 0 || t_index + 1 >= snaps.size())
        throw std::invalid_argument("h2_identity_residual: need an interior snapshot");
    auto enstrophy = [&](std::size_t i) {
        const PeriodicField uxx = derivative(derivative(snaps[i].u));
        return integral_product(uxx, uxx);
    };
    const double dq = (enstrophy(t_index + 1) - enstrophy(t_index - 1)) /
                      (snaps[t_index + 1].t - snaps[t_index - 1].t);
    return std::abs(dq - h2_identity_rhs(snaps[t_index]));
}

// ── logarithmic interpolation diagnostic ─────────────────────────────────────

// ‖Hf‖_∞ / ((1 + log₊‖f′‖_{L²})(‖f‖_∞ + 1)); finiteness diagnostic only
inline double log_sobolev_ratio(const PeriodicField& f) {
    const PeriodicField fx = derivative(f);
    const double fpl2 = fx.l2_norm();
    if (fpl2 < 1e-14 * std::max(1.0, f.sup_norm()))
        throw ConstantField("log_sobolev_ratio: field is constant");
    const double logp = std::max(0.0, std::log(fpl2));
    return hilbert(f).sup_norm() / ((1.0 + logp) * (f.sup_norm() + 1.0));
}

// ── blowup orchestration ─────────────────────────────────────────────────────

struct TheoremCheck {
    double x0 = 0.0;
    double omega0_at = 0.0;
    double u0_prime = 0.0;
    double bound = 0.0;    // 1/|u₀′(x₀)|
    bool applicable = false; // |ω₀(x₀)| ≤ 1e−8 and u₀′(x₀) < 0
    bool satisfied = false;  // detected T* below the bound
};

struct BlowupReport {
    RunStatus status = RunStatus::Completed;
    double t_last_good = 0.0, t_first_bad = 0.0; // T* bracket when status = Blowup
    double min_eta_x = 1.0;
    double x_star = 0.0;          // argmin particle of η_x
    double omega0_at_xstar = 0.0;
    double bkm_omega = 0.0, bkm_ux = 0.0;
    std::vector<double> localized;       // per probe
    std::vector<double> min_F_snapshots; // min_x F(u(t)) per snapshot (series route)
    double min_F = 0.0;
    std::vector<TheoremCheck> checks;
};

struct BlowupOutcome {
    BlowupReport report;
    GeodesicTrajectory traj;
};

inline BlowupOutcome detect_blowup(const SolverConfig& cfg, const PeriodicField& u0,
                                   const std::vector<double>& probes) {
    BlowupOutcome out;
    out.traj = integrate_euler(cfg, u0);
    const GeodesicTrajectory& traj = out.traj;
    BlowupReport& rep = out.report;

    rep.status = traj.status;
    rep.t_last_good = traj.t_last_good;
    rep.t_first_bad = traj.t_first_bad;
    rep.min_eta_x = traj.final_min_eta_x;
    rep.x_star = u0.grid().node(traj.argmin_node);
    rep.omega0_at_xstar = traj.omega0.samples()[traj.argmin_node];

    const auto bkm = bkm_integrals(traj, probes);
    rep.bkm_omega = bkm.int_sup_omega;
    rep.bkm_ux = bkm.int_sup_ux;
    rep.localized = bkm.localized;

    rep.min_F_snapshots.reserve(traj.snapshots.size());
    const bool mean_zero = std::abs(u0.mean()) <= 1e-9 * std::max(1.0, u0.sup_norm());
    if (mean_zero) {
        double global = std::numeric_limits<double>::infinity();
        for (const auto& s : traj.snapshots) {
            const auto f = forcing_F_series(s.u);
            double m = f.samples()[0];
            for (double v : f.samples()) m = std::min(m, v);
            rep.min_F_snapshots.push_back(m);
            global = std::min(global, m);
        }
        rep.min_F = global;
    }

    const PeriodicField u0x = derivative(u0);
    for (double x0 : probes) {
        TheoremCheck chk;
        chk.x0 = x0;
        chk.omega0_at = traj.omega0.evaluate(x0);
        chk.u0_prime = u0x.evaluate(x0);
        chk.applicable = mean_zero && std::abs(chk.omega0_at) <= 1e-8 && chk.u0_prime < 0.0;
        if (chk.applicable) {
            chk.bound = 1.0 / std::abs(chk.u0_prime);
            chk.satisfied = (traj.status == RunStatus::Blowup) && (traj.t_first_bad < chk.bound);
        }
        rep.checks.push_back(chk);
    }
    return out;
}

} // namespace wunsch

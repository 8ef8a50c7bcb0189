// distance.hpp — the vanishing-geodesic-distance shortcut experiment and
// the base-point normalization invariance of the homogeneous norms.
//
// The traveling-wave field u_N(t,x) = λ f_N(t − x), 0 ≤ λ < 1, transports
// every particle forward; because ‖f_N‖²_{μH^{1/2}} can be made small with
// ‖f_N‖_∞ = 1, the path reaches a fixed rotation with energy
// E = λ²·T_end·‖f_N‖² that shrinks along the spike ladder.  The profile
// f_N is the truncated logarithmic spike
//
//     f(x) = clamp(log(π/d(x)) / log(N), 0, 1),   d = distance to 0 on S¹,
//
// sampled and band-limited, then renormalized to sup = 1 (points have zero
// H^{1/2} capacity, so the norm decays as the spike sharpens; the decay
// rate is measured, not asserted).

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "wunsch/diffeo.hpp"
#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"
#include "wunsch/metric.hpp"

namespace wunsch {

inline PeriodicField spike_field(double n_param, const GridSpec& g) {
    if (n_param < 2.0) throw std::invalid_argument("spike_field: N must be at least 2");
    const double logn = std::log(n_param);
    std::vector<double> s(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double d = std::abs(std::remainder(g.node(j), two_pi));
        s[j] = (d == 0.0) ? 1.0 : std::clamp(std::log(pi / d) / logn, 0.0, 1.0);
    }
    PeriodicField f = PeriodicField::from_samples(g, std::move(s));
    return (1.0 / f.sup_norm()) * f; // sup renormalized to exactly 1
}

struct EnergyReport {
    double n_param = 0.0;
    double lambda = 0.0;
    double theta_star = 0.0;
    double norm2 = 0.0;     // ‖f_N‖²_{μH^{1/2}}
    double sup = 0.0;       // ‖f_N‖_∞ (= 1 by construction)
    double t_end = 0.0;
    double energy = 0.0;    // λ²·T_end·norm²  (right-invariance of the norm)
    double endpoint_error = 0.0; // max_x |η(T_end,x) − x − θ*|
    bool horizon_exceeded = false;
};

struct ShortcutOptions {
    int grid_n = 2048;      // band limit of the spike
    int particles = 512;
    double dt = 2e-3;
    double horizon_cap = 400.0;
    int table_size = 1 << 17; // dense resampling for the advecting profile
};

namespace detail {

// dense periodic table + 4-point Lagrange interpolation of a fixed profile
class ProfileTable {
  public:
    ProfileTable(const PeriodicField& f, int size) : n_(size), values_(size) {
        const GridSpec big(size);
        const PeriodicField dense = pad_to(f, big);
        values_ = dense.samples();
    }

    double operator()(double x) const {
        const double t = x / two_pi * n_;
        double ti = std::floor(t);
        const double th = t - ti;
        const long long i = static_cast<long long>(ti);
        auto at = [&](long long k) {
            long long idx = (i + k) % n_;
            if (idx < 0) idx += n_;
            return values_[static_cast<std::size_t>(idx)];
        };
        const double fm1 = at(-1), f0 = at(0), f1 = at(1), f2 = at(2);
        // cubic Lagrange on the four surrounding nodes
        return fm1 * (-th * (th - 1.0) * (th - 2.0) / 6.0) +
               f0 * ((th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0) +
               f1 * (-(th + 1.0) * th * (th - 2.0) / 2.0) +
               f2 * ((th + 1.0) * th * (th - 1.0) / 6.0);
    }

  private:
    int n_;
    std::vector<double> values_;
};

} // namespace detail

// integrates the flow of u(t,x) = λ·profile(t − x) until every particle has
// advanced by θ*, and reports the travel time and path energy
inline EnergyReport shortcut_run_with_profile(const PeriodicField& profile, double n_param,
                                              double lambda, double theta_star,
                                              const ShortcutOptions& opt = {}) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("shortcut_run: lambda must lie in (0, 1)");
    EnergyReport rep;
    rep.n_param = n_param;
    rep.lambda = lambda;
    rep.theta_star = theta_star;
    rep.norm2 = inner_product(MetricKind::mu_half(), profile, profile);
    rep.sup = profile.sup_norm();

    const detail::ProfileTable table(profile, opt.table_size);
    const int np = opt.particles;
    std::vector<double> x0(np), disp(np, 0.0);
    for (int j = 0; j < np; ++j) x0[j] = two_pi * j / np;

    auto min_disp = [&]() {
        double m = disp[0];
        for (double v : disp) m = std::min(m, v);
        return m;
    };

    double t = 0.0;
    std::vector<double> prev(disp);
    double frac = 1.0;
    while (true) {
        const double cur_min = min_disp();
        if (cur_min >= theta_star) {
            // linear bracket of the crossing inside the last step
            double prev_min = prev[0];
            for (double v : prev) prev_min = std::min(prev_min, v);
            frac = std::clamp((theta_star - prev_min) / std::max(cur_min - prev_min, 1e-300),
                              0.0, 1.0);
            rep.t_end = t - opt.dt * (1.0 - frac);
            break;
        }
        if (t >= opt.horizon_cap) {
            rep.horizon_exceeded = true;
            rep.t_end = t;
            break;
        }
        prev = disp;
        const double h = opt.dt;
        for (int j = 0; j < np; ++j) {
            const double y = x0[j] + disp[j];
            const double k1 = lambda * table(t - y);
            const double k2 = lambda * table(t + 0.5 * h - (y + 0.5 * h * k1));
            const double k3 = lambda * table(t + 0.5 * h - (y + 0.5 * h * k2));
            const double k4 = lambda * table(t + h - (y + h * k3));
            disp[j] += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t += h;
    }

    // displacement spread at the crossing time itself
    double worst = 0.0;
    for (int j = 0; j < np; ++j) {
        const double at_end = rep.horizon_exceeded ? disp[j]
                                                   : prev[j] + frac * (disp[j] - prev[j]);
        worst = std::max(worst, std::abs(at_end - theta_star));
    }
    rep.endpoint_error = worst;
    rep.energy = lambda * lambda * rep.t_end * rep.norm2;
    return rep;
}

inline EnergyReport shortcut_run(double n_param, double lambda, double theta_star,
                                 const ShortcutOptions& opt = {}) {
    return shortcut_run_with_profile(spike_field(n_param, GridSpec(opt.grid_n)), n_param, lambda,
                                     theta_star, opt);
}

// ── base-point normalization invariance ──────────────────────────────────────

// max over interior snapshots of |‖∂_tη̃∘η̃⁻¹‖_{Λ̇^{2s}} − ‖∂_tη∘η⁻¹‖_{Λ̇^{2s}}|
// where η̃(t,x) = η(t,x) − η(t,0); centered differences in time.
inline double basepoint_invariance(const std::vector<double>& times,
                                   const std::vector<Diffeo>& etas, double s) {
    if (times.size() != etas.size() || times.size() < 3)
        throw std::invalid_argument("basepoint_invariance: need at least three snapshots");
    const MetricKind hom = MetricKind::homogeneous_s(s);
    const GridSpec& g = etas.front().grid();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        const double dt = times[i + 1] - times[i - 1];
        std::vector<double> w(g.n);
        for (int j = 0; j < g.n; ++j)
            w[j] = (etas[i + 1].displacement().samples()[j] -
                    etas[i - 1].displacement().samples()[j]) /
                   dt;
        const PeriodicField wfield = PeriodicField::from_samples(g, w);
        const PeriodicField u = compose(wfield, invert_diffeo(etas[i]));

        const double c = etas[i].displacement().evaluate(0.0);
        const double cdot = (etas[i + 1].displacement().evaluate(0.0) -
                             etas[i - 1].displacement().evaluate(0.0)) /
                            dt;
        const Diffeo eta_tilde = Diffeo::from_displacement(
            etas[i].displacement() - PeriodicField::constant(g, c));
        const PeriodicField wt = wfield - PeriodicField::constant(g, cdot);
        const PeriodicField ut = compose(wt, invert_diffeo(eta_tilde));

        worst = std::max(worst, std::abs(metric_norm(hom, ut) - metric_norm(hom, u)));
    }
    return worst;
}

} // namespace wunsch

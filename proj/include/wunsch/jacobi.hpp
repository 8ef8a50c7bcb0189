// jacobi.hpp — adjoint calculus, Jacobi fields, and conjugate points.
//
// Operators on the Lie algebra Vect(S¹) with inertia operator A:
//
//     ad_u v    = v u_x − u v_x
//     ad_u^⊤ v  = A⁻¹(2 u_x·Av + u·(Av)_x)
//     Ad_η v    = (η_x v)∘η⁻¹
//     Ad_η^⊤ v  = A⁻¹[η_x²·(Av)∘η]
//
// The Jacobi equation along a geodesic η(t) with initial velocity u₀, in
// left-translated variables, is solved through the conserved-form variable
// P(t) = Ad^⊤_{η}Ad_{η} w(t):
//
//     dP/dt = −ad^⊤_w u₀,   w = Ad_{η⁻¹}(Ad^⊤_{η⁻¹} P),   dv/dt = w,
//
// which avoids differentiating composition operators in time.  Along the
// rotation geodesic (u₀ ≡ 1, μH^{1/2}) the modes decouple and
//     w_n(t) = c_n e^{−2int/(δ₀(n)+|n|)},
//     v_n(t) = c_n e^{−it·sgn n} sin t  (n ≠ 0),   v₀(t) = c₀ t,
// so η(π) is monoconjugate to the identity of infinite order.
//
// The Morse index form of J = TL_η v on [a,b] is
//     I(J,J) = ∫ ‖Ad_η v̇‖² + ⟨u₀, ad_v v̇⟩ dt,
// and a localized test field v = f(j(t))·g((x−x₀)/ε − k·j(t)) built from
// g(y) = cos³(y/√3) (support |y| ≤ m = √3π/2) makes it negative whenever
//     |ω₀(x₀)|·(j(b) − j(a)) > Rπ,    j(t) = ∫₀ᵗ η_x(τ,x₀)⁻² dτ,
// with R = √((A+B)(B+C))/(2B) = 4/3 for this bump.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"
#include "wunsch/geodesic.hpp"

namespace wunsch {

// ── adjoint operators ────────────────────────────────────────────────────────

inline PeriodicField ad_bracket(const PeriodicField& u, const PeriodicField& v) {
    require_same_grid(u.grid(), v.grid(), "ad_bracket");
    return product_dealiased(v, derivative(u)) - product_dealiased(u, derivative(v));
}

// ad_u^⊤ v; for degenerate kinds the combination must be mean-admissible
// (inertia_invert enforces the gauge).
inline PeriodicField ad_top(const MetricKind& kind, const PeriodicField& u,
                            const PeriodicField& v) {
    require_same_grid(u.grid(), v.grid(), "ad_top");
    const PeriodicField av = inertia_apply(kind, v);
    return inertia_invert(kind, 2.0 * product_dealiased(derivative(u), av) +
                                    product_dealiased(u, derivative(av)));
}

inline PeriodicField Ad_push(const Diffeo& eta, const PeriodicField& v) {
    require_same_grid(eta.grid(), v.grid(), "Ad_push");
    const GridSpec& g = eta.grid();
    std::vector<double> s(g.n);
    for (int j = 0; j < g.n; ++j) s[j] = eta.deriv().samples()[j] * v.samples()[j];
    return compose(PeriodicField::from_samples(g, std::move(s)), invert_diffeo(eta));
}

inline PeriodicField Ad_top(const MetricKind& kind, const Diffeo& eta, const PeriodicField& v) {
    if (kind.degenerate())
        throw DegenerateKindError("Ad_top: not defined for degenerate inertia operators");
    require_same_grid(eta.grid(), v.grid(), "Ad_top");
    const GridSpec& g = eta.grid();
    const PeriodicField pulled = compose(inertia_apply(kind, v), eta);
    std::vector<double> s(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double ex = eta.deriv().samples()[j];
        s[j] = ex * ex * pulled.samples()[j];
    }
    return inertia_invert(kind, PeriodicField::from_samples(g, std::move(s)));
}

// ── Jacobi integration ───────────────────────────────────────────────────────

struct JacobiSolution {
    std::vector<double> times;
    std::vector<PeriodicField> v, w, P;
    std::vector<PeriodicField> J; // η_x·v, the Jacobi field along η
};

namespace detail {

// Per-step geometry shared by all Jacobi runs over one trajectory: the
// snapshot inverses and the midpoint diffeos with their inverses
// (displacements interpolate linearly between snapshots).
struct JacobiWorkspace {
    std::vector<Diffeo> inv;     // per snapshot
    std::vector<Diffeo> mid;     // per step
    std::vector<Diffeo> mid_inv; // per step
};

inline JacobiWorkspace make_jacobi_workspace(const GeodesicTrajectory& traj) {
    JacobiWorkspace ws;
    const auto& snaps = traj.snapshots;
    ws.inv.reserve(snaps.size());
    std::vector<double> warm(snaps.front().eta.grid().n, 0.0);
    for (const auto& s : snaps) {
        ws.inv.push_back(invert_diffeo(s.eta, &warm));
        warm = ws.inv.back().displacement().samples();
    }
    const GridSpec& g = snaps.front().eta.grid();
    ws.mid.reserve(snaps.size() - 1);
    ws.mid_inv.reserve(snaps.size() - 1);
    for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
        std::vector<double> pm(g.n);
        for (int j = 0; j < g.n; ++j)
            pm[j] = 0.5 * (snaps[i].eta.displacement().samples()[j] +
                           snaps[i + 1].eta.displacement().samples()[j]);
        ws.mid.push_back(Diffeo::from_displacement(PeriodicField::from_samples(g, std::move(pm))));
        std::vector<double> wrm = ws.inv[i].displacement().samples();
        ws.mid_inv.push_back(invert_diffeo(ws.mid.back(), &wrm));
    }
    return ws;
}

// w = Ad_{η⁻¹}(Ad^⊤_{η⁻¹} P)
inline PeriodicField recover_w(const MetricKind& kind, const Diffeo& eta, const Diffeo& inv,
                               const PeriodicField& P) {
    const GridSpec& g = eta.grid();
    const PeriodicField t = inertia_invert(
        kind, [&] {
            const PeriodicField pulled = compose(inertia_apply(kind, P), inv);
            std::vector<double> s(g.n);
            for (int j = 0; j < g.n; ++j) {
                const double zx = inv.deriv().samples()[j];
                s[j] = zx * zx * pulled.samples()[j];
            }
            return PeriodicField::from_samples(g, std::move(s));
        }());
    // Ad_push(η⁻¹, t) = (η⁻¹_x·t)∘η
    std::vector<double> s(g.n);
    for (int j = 0; j < g.n; ++j) s[j] = inv.deriv().samples()[j] * t.samples()[j];
    return compose(PeriodicField::from_samples(g, std::move(s)), eta);
}

} // namespace detail

inline JacobiSolution jacobi_integrate(const MetricKind& kind, const GeodesicTrajectory& traj,
                                       const PeriodicField& w0,
                                       const detail::JacobiWorkspace* shared = nullptr) {
    if (kind.degenerate())
        throw DegenerateKindError("jacobi_integrate: requires a non-degenerate inertia operator");
    if (traj.status != RunStatus::Completed)
        throw std::invalid_argument("jacobi_integrate: trajectory did not complete its window");
    if (traj.snapshots.size() < 2)
        throw std::invalid_argument("jacobi_integrate: need at least two snapshots");
    require_same_grid(traj.u0.grid(), w0.grid(), "jacobi_integrate");

    std::optional<detail::JacobiWorkspace> own;
    if (!shared) own = detail::make_jacobi_workspace(traj);
    const detail::JacobiWorkspace& ws = shared ? *shared : *own;

    const GridSpec& g = w0.grid();
    const auto& snaps = traj.snapshots;
    const PeriodicField& u0 = traj.u0;

    JacobiSolution sol;
    PeriodicField P = w0; // Ad^⊤Ad = Id at t = 0
    PeriodicField v = PeriodicField::zero(g);

    auto push = [&](std::size_t i, const PeriodicField& Pcur, const PeriodicField& vcur) {
        const PeriodicField w = detail::recover_w(kind, snaps[i].eta, ws.inv[i], Pcur);
        sol.times.push_back(snaps[i].t);
        sol.P.push_back(Pcur);
        sol.v.push_back(vcur);
        sol.w.push_back(w);
        sol.J.push_back(product_padded(snaps[i].eta.deriv(), vcur));
    };
    push(0, P, v);

    for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
        const double h = snaps[i + 1].t - snaps[i].t;
        auto rhs = [&](const Diffeo& eta, const Diffeo& inv, const PeriodicField& Pc) {
            PeriodicField w = detail::recover_w(kind, eta, inv, Pc);
            PeriodicField dP = -1.0 * ad_top(kind, w, u0);
            return std::pair<PeriodicField, PeriodicField>{std::move(dP), std::move(w)};
        };
        const auto [k1P, k1v] = rhs(snaps[i].eta, ws.inv[i], P);
        const auto [k2P, k2v] = rhs(ws.mid[i], ws.mid_inv[i], P + (0.5 * h) * k1P);
        const auto [k3P, k3v] = rhs(ws.mid[i], ws.mid_inv[i], P + (0.5 * h) * k2P);
        const auto [k4P, k4v] = rhs(snaps[i + 1].eta, ws.inv[i + 1], P + h * k3P);
        P = P + (h / 6.0) * (k1P + 2.0 * k2P + 2.0 * k3P + k4P);
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        push(i + 1, P, v);
    }
    return sol;
}

// shared-geometry batch over several initial variations
inline std::vector<JacobiSolution> jacobi_integrate_many(const MetricKind& kind,
                                                         const GeodesicTrajectory& traj,
                                                         const std::vector<PeriodicField>& w0s) {
    const auto ws = detail::make_jacobi_workspace(traj);
    std::vector<JacobiSolution> out;
    out.reserve(w0s.size());
    for (const auto& w0 : w0s) out.push_back(jacobi_integrate(kind, traj, w0, &ws));
    return out;
}

// closed form along the rotation geodesic of the μH^{1/2} metric
inline std::pair<cplx, cplx> rotation_closed_form(int n, cplx c, double t) {
    if (n == 0) return {c, c * t};
    const double sgn = (n > 0) ? 1.0 : -1.0;
    const cplx w = c * std::polar(1.0, -2.0 * sgn * t);
    const cplx v = c * std::polar(1.0, -sgn * t) * std::sin(t);
    return {w, v};
}

// ── reparametrized time j(t) = ∫₀ᵗ η_x(τ, x₀)⁻² dτ ──────────────────────────

// cumulative trapezoid on the snapshot grid, one value per snapshot
inline std::vector<double> reparam_time(const GeodesicTrajectory& traj, double x0) {
    const auto& snaps = traj.snapshots;
    std::vector<double> j(snaps.size(), 0.0);
    auto integrand = [&](std::size_t i) {
        const double ex = snaps[i].eta_x.evaluate(x0);
        return 1.0 / (ex * ex);
    };
    double prev = integrand(0);
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        const double cur = integrand(i);
        j[i] = j[i - 1] + 0.5 * (snaps[i].t - snaps[i - 1].t) * (prev + cur);
        prev = cur;
    }
    return j;
}

// ── index form ───────────────────────────────────────────────────────────────

struct VariationPath {
    std::vector<double> times;
    std::vector<PeriodicField> v;
    std::vector<PeriodicField> vdot;
};

struct IndexFormReport {
    double value = 0.0;           // I(J,J)
    double richardson_error = 0.0; // |I_h − I_{2h}| / 3
    double delta = 0.0;            // π/(j(b) − j(a))
    std::vector<double> term_ad;   // ‖Ad_η v̇‖² trace
    std::vector<double> term_bracket; // ⟨u₀, ad_v v̇⟩ trace
};

inline IndexFormReport index_form(const MetricKind& kind, const GeodesicTrajectory& traj,
                                  const VariationPath& path, double a, double b,
                                  std::optional<double> x0 = {}) {
    if (kind.degenerate())
        throw DegenerateKindError("index_form: requires a non-degenerate inertia operator");
    if (path.times.size() < 3 || path.times.size() != path.v.size() ||
        path.v.size() != path.vdot.size())
        throw std::invalid_argument("index_form: malformed variation path");
    if (std::abs(path.times.front() - a) > 1e-9 || std::abs(path.times.back() - b) > 1e-9)
        throw std::invalid_argument("index_form: path does not span [a, b]");

    const double scale = std::max({1.0, path.v[path.v.size() / 2].sup_norm()});
    if (path.v.front().sup_norm() > 1e-8 * scale || path.v.back().sup_norm() > 1e-8 * scale)
        throw EndpointNotZero("index_form: variation must vanish at both endpoints");

    const std::size_t ia = traj.index_at(a), ib = traj.index_at(b);
    if (ib - ia + 1 != path.times.size())
        throw std::invalid_argument("index_form: path must be sampled on the trajectory grid");

    IndexFormReport rep;
    rep.term_ad.resize(path.times.size());
    rep.term_bracket.resize(path.times.size());

    std::vector<double> warm(traj.u0.grid().n, 0.0);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        const Snapshot& s = traj.snapshots[ia + k];
        const Diffeo inv = invert_diffeo(s.eta, &warm);
        warm = inv.displacement().samples();
        // Ad_η v̇ = (η_x v̇)∘η⁻¹
        const GridSpec& g = s.eta.grid();
        std::vector<double> prod(g.n);
        for (int j = 0; j < g.n; ++j)
            prod[j] = s.eta.deriv().samples()[j] * path.vdot[k].samples()[j];
        const PeriodicField ad_eta =
            compose(PeriodicField::from_samples(g, std::move(prod)), inv);
        rep.term_ad[k] = inner_product(kind, ad_eta, ad_eta);
        rep.term_bracket[k] =
            inner_product(kind, traj.u0, ad_bracket(path.v[k], path.vdot[k]));
    }

    auto trapz = [&](std::size_t stride) {
        double acc = 0.0;
        std::size_t prev = 0;
        for (std::size_t k = stride; k < path.times.size(); k += stride) {
            const double fa = rep.term_ad[prev] + rep.term_bracket[prev];
            const double fb = rep.term_ad[k] + rep.term_bracket[k];
            acc += 0.5 * (path.times[k] - path.times[prev]) * (fa + fb);
            prev = k;
        }
        // close a ragged tail when the stride does not divide the node count
        if (prev != path.times.size() - 1) {
            const std::size_t k = path.times.size() - 1;
            const double fa = rep.term_ad[prev] + rep.term_bracket[prev];
            const double fb = rep.term_ad[k] + rep.term_bracket[k];
            acc += 0.5 * (path.times[k] - path.times[prev]) * (fa + fb);
        }
        return acc;
    };
    rep.value = trapz(1);
    rep.richardson_error = std::abs(rep.value - trapz(2)) / 3.0;

    if (x0) { // Δ is meaningful for test fields localized at a base point
        const auto jt = reparam_time(traj, *x0);
        rep.delta = pi / (jt[ib] - jt[ia]);
    }
    return rep;
}

// ── localized test field ─────────────────────────────────────────────────────

namespace detail {

inline constexpr double bump_support = 2.7206990463513265; // m = √3·π/2

inline double bump(double y) {
    if (std::abs(y) >= bump_support) return 0.0;
    const double c = std::cos(y / std::sqrt(3.0));
    return c * c * c;
}
inline double bump_d1(double y) {
    if (std::abs(y) >= bump_support) return 0.0;
    const double z = y / std::sqrt(3.0);
    return -std::sqrt(3.0) * std::cos(z) * std::cos(z) * std::sin(z);
}
inline double bump_d2(double y) {
    if (std::abs(y) >= bump_support) return 0.0;
    const double z = y / std::sqrt(3.0);
    const double c = std::cos(z), s = std::sin(z);
    return 2.0 * c * s * s - c * c * c;
}

// composite Simpson on [-m, m]
template <typename F>
double simpson(F&& f, double lo, double hi, int intervals) {
    const double h = (hi - lo) / intervals;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) acc += f(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double principal_angle(double x) {
    double y = std::remainder(x, two_pi);
    return y;
}

} // namespace detail

struct TestField {
    double x0 = 0.0, eps = 0.0, a = 0.0, b = 0.0;
    double support = detail::bump_support; // m
    double A = 0.0, B = 0.0, C = 0.0;      // ∫g², ∫g′², ∫g″²
    double k = 0.0;                        // drift gain 2Bω₀(x₀)/(B+C)
    double R = 0.0;                        // √((A+B)(B+C))/(2B)
    double ja = 0.0, jb = 0.0;             // reparametrized endpoints
};

// bump quadrature constants, shared by the test field and the criterion
struct BumpConstants {
    double A, B, C, R;
};

inline BumpConstants bump_constants() {
    const double m = detail::bump_support;
    const int n = 1 << 16;
    const double A = detail::simpson([](double y) { const double v = detail::bump(y); return v * v; }, -m, m, n);
    const double B = detail::simpson([](double y) { const double v = detail::bump_d1(y); return v * v; }, -m, m, n);
    const double C = detail::simpson([](double y) { const double v = detail::bump_d2(y); return v * v; }, -m, m, n);
    return {A, B, C, std::sqrt((A + B) * (B + C)) / (2.0 * B)};
}

inline std::pair<TestField, VariationPath> build_test_field(const GeodesicTrajectory& traj,
                                                            double x0, double a, double b,
                                                            double eps) {
    const std::size_t ia = traj.index_at(a), ib = traj.index_at(b);
    if (ib <= ia) throw std::invalid_argument("build_test_field: need a < b on the snapshot grid");

    const auto bc = bump_constants();
    TestField tf;
    tf.x0 = x0;
    tf.eps = eps;
    tf.a = a;
    tf.b = b;
    tf.A = bc.A;
    tf.B = bc.B;
    tf.C = bc.C;
    tf.R = bc.R;
    const double omega0_at = traj.omega0.evaluate(x0);
    tf.k = 2.0 * bc.B * omega0_at / (bc.B + bc.C);

    const auto jt = reparam_time(traj, x0);
    tf.ja = jt[ia];
    tf.jb = jt[ib];
    const double jwidth = tf.jb - tf.ja;
    if (jwidth <= 0.0) throw std::invalid_argument("build_test_field: empty window");

    // support must stay inside one period for every t in the window
    double cmax = 0.0;
    for (std::size_t i = ia; i <= ib; ++i) cmax = std::max(cmax, std::abs(tf.k * jt[i]));
    if (eps * (tf.support + cmax) >= pi)
        throw SupportOverflow("build_test_field: bump leaves its period, shrink eps");

    const GridSpec& g = traj.u0.grid();
    VariationPath path;
    for (std::size_t i = ia; i <= ib; ++i) {
        const double s = jt[i];
        const double f = std::sin(pi * (s - tf.ja) / jwidth);
        const double fp = (pi / jwidth) * std::cos(pi * (s - tf.ja) / jwidth);
        const double ex = traj.snapshots[i].eta_x.evaluate(x0);
        const double jprime = 1.0 / (ex * ex);
        const double c = tf.k * s;
        std::vector<double> vs(g.n), vds(g.n);
        for (int jn = 0; jn < g.n; ++jn) {
            const double y = detail::principal_angle(g.node(jn) - x0) / eps - c;
            const double gv = detail::bump(y), gd = detail::bump_d1(y);
            vs[jn] = f * gv;
            vds[jn] = fp * jprime * gv - tf.k * jprime * f * gd;
        }
        path.times.push_back(traj.snapshots[i].t);
        path.v.push_back(PeriodicField::from_samples(g, std::move(vs)));
        path.vdot.push_back(PeriodicField::from_samples(g, std::move(vds)));
    }
    return {tf, path};
}

// ── conjugate criterion ──────────────────────────────────────────────────────

struct ConjugateReport {
    double x0 = 0.0, a = 0.0, b = 0.0;
    double lhs = 0.0;       // |ω₀(x₀)|·(j(b) − j(a))
    double threshold = 0.0; // Rπ with R = 4/3
    bool satisfied = false;
};

inline ConjugateReport conjugate_criterion(const GeodesicTrajectory& traj, double x0, double a,
                                           double b) {
    const std::size_t ia = traj.index_at(a), ib = traj.index_at(b);
    const auto jt = reparam_time(traj, x0);
    ConjugateReport rep;
    rep.x0 = x0;
    rep.a = a;
    rep.b = b;
    rep.lhs = std::abs(traj.omega0.evaluate(x0)) * (jt[ib] - jt[ia]);
    rep.threshold = (4.0 / 3.0) * pi;
    rep.satisfied = rep.lhs > rep.threshold;
    return rep;
}

} // namespace wunsch

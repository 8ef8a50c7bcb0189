// curvature.hpp — sectional curvature of the right-invariant metrics via
// Arnold's formula at the identity:
//
//     K(u,v) = (⟨δ,δ⟩ − 2⟨α,β⟩ − 3⟨α,α⟩ − 4⟨B_u,B_v⟩) / (⟨u,u⟩⟨v,v⟩ − ⟨u,v⟩²),
//
//     2α = ad_u v,   2β = ad_u^⊤v − ad_v^⊤u,   2δ = ad_u^⊤v + ad_v^⊤u,
//     2B_u = ad_u^⊤u,   2B_v = ad_v^⊤v.
//
// The quotient is reported in the circle-averaged pairing (1/2π)∫(Au)v dx:
// with one pairing upstairs and two downstairs this multiplies the raw-∫
// value by 2π, and it is the normalization in which the reference mode
// tables hold exactly, e.g. for μH^{1/2}
//
//     K(sin mx, sin nx) = m(m²+2mn+2n²)/(2n(m+n))   (n > m > 0),
//     K(sin mx, cos mx) = (5m−6)/2,
//
// and the homogeneous Ḣ¹ family is the constant 1/4 (the sphere of radius
// 2).  The report still carries the raw-∫ numerator components, which is
// what the term-by-term reference values quote.
//
// For degenerate kinds the symmetric/antisymmetric combinations are formed
// before inverting A, and the operation fails rather than gauging silently
// when a combination has non-negligible mean.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"
#include "wunsch/jacobi.hpp"
#include "wunsch/metric.hpp"

namespace wunsch {

struct ArnoldTerms {
    PeriodicField alpha, beta, delta, B_u, B_v;
};

namespace detail {

// 2 u_x·Av + u·(Av)_x — the pre-inverse argument of ad_u^⊤ v
inline PeriodicField ad_top_argument(const MetricKind& kind, const PeriodicField& u,
                                     const PeriodicField& v) {
    const PeriodicField av = inertia_apply(kind, v);
    return 2.0 * product_dealiased(derivative(u), av) + product_dealiased(u, derivative(av));
}

} // namespace detail

inline ArnoldTerms arnold_terms(const MetricKind& kind, const PeriodicField& u,
                                const PeriodicField& v) {
    require_same_grid(u.grid(), v.grid(), "arnold_terms");
    const PeriodicField ruv = detail::ad_top_argument(kind, u, v);
    const PeriodicField rvu = detail::ad_top_argument(kind, v, u);
    const PeriodicField ruu = detail::ad_top_argument(kind, u, u);
    const PeriodicField rvv = detail::ad_top_argument(kind, v, v);
    return ArnoldTerms{
        0.5 * ad_bracket(u, v),
        0.5 * inertia_invert(kind, ruv - rvu),
        0.5 * inertia_invert(kind, ruv + rvu),
        0.5 * inertia_invert(kind, ruu),
        0.5 * inertia_invert(kind, rvv),
    };
}

struct CurvatureReport {
    double K = 0.0;           // normalized-pairing sectional curvature
    double dd = 0.0;          // ⟨δ,δ⟩ in the raw ∫ pairing
    double ab = 0.0;          // ⟨α,β⟩
    double aa = 0.0;          // ⟨α,α⟩
    double bb = 0.0;          // ⟨B_u,B_v⟩
    double denominator = 0.0; // ⟨u,u⟩⟨v,v⟩ − ⟨u,v⟩², raw pairing
};

inline CurvatureReport sectional_curvature(const MetricKind& kind, const PeriodicField& u,
                                           const PeriodicField& v) {
    const ArnoldTerms t = arnold_terms(kind, u, v);
    CurvatureReport rep;
    rep.dd = inner_product(kind, t.delta, t.delta);
    rep.ab = inner_product(kind, t.alpha, t.beta);
    rep.aa = inner_product(kind, t.alpha, t.alpha);
    rep.bb = inner_product(kind, t.B_u, t.B_v);
    const double uu = inner_product(kind, u, u);
    const double vv = inner_product(kind, v, v);
    const double uv = inner_product(kind, u, v);
    rep.denominator = uu * vv - uv * uv;
    if (rep.denominator <= 1e-12 * std::max(uu * vv, 1e-300))
        throw DependentPlane("sectional_curvature: plane is numerically degenerate");
    rep.K = two_pi * (rep.dd - 2.0 * rep.ab - 3.0 * rep.aa - 4.0 * rep.bb) / rep.denominator;
    return rep;
}

// ── closed-form reference tables ─────────────────────────────────────────────

enum class PairType { SinSin, SinCos, CosCos };

struct CurvatureFamily {
    enum class Kind { MuHalfTable, HomogeneousS };
    Kind kind = Kind::MuHalfTable;
    double s = 0.0;

    static CurvatureFamily mu_half_table() { return {Kind::MuHalfTable, 0.0}; }
    static CurvatureFamily homogeneous_s(double s) { return {Kind::HomogeneousS, s}; }

    std::string name() const {
        return kind == Kind::MuHalfTable ? "mu_half_table"
                                         : "homogeneous_s(" + std::to_string(s) + ")";
    }
};

// general homogeneous Ḣ^s display for (sin mx, sin nx), n > m > 0
inline double homogeneous_s_display(double s, int m, int n) {
    const double md = m, nd = n;
    const double t1 = std::pow(nd - md, -2.0 * s) *
                      std::pow(std::pow(md, 1 + 2 * s) - 2.0 * std::pow(md, 2 * s) * nd +
                                   2.0 * md * std::pow(nd, 2 * s) - std::pow(nd, 1 + 2 * s),
                               2.0);
    const double t2 = std::pow(md + nd, -2.0 * s) *
                      std::pow(std::pow(md, 1 + 2 * s) + 2.0 * std::pow(md, 2 * s) * nd +
                                   2.0 * md * std::pow(nd, 2 * s) + std::pow(nd, 1 + 2 * s),
                               2.0);
    const double t3 = -4.0 * std::pow(md, 2 * s) * (-md * md + 2.0 * nd * nd);
    const double t4 = 4.0 * std::pow(nd, 2 * s) * (-2.0 * md * md + nd * nd);
    const double t5 = -3.0 * (nd - md) * (nd - md) * std::pow(md + nd, 2 * s);
    const double t6 = -3.0 * (md + nd) * (md + nd) * std::pow(nd - md, 2 * s);
    return (pi / 4.0) * std::pow(nd * md, -2.0 * s) * (t1 + t2 + t3 + t4 + t5 + t6);
}

inline double closed_form_K(const CurvatureFamily& family, PairType pair, int m, int n) {
    if (m <= 0 || n <= 0) throw OrderViolation("closed_form_K: modes must be positive");
    if (family.kind == CurvatureFamily::Kind::MuHalfTable) {
        const double md = m, nd = n;
        if (pair == PairType::SinCos && m == n) return 0.5 * (5.0 * md - 6.0);
        if (pair == PairType::SinCos && m > n)
            return nd * (2.0 * md * md + 2.0 * md * nd + nd * nd) / (2.0 * md * (md + nd));
        if (n > m)
            return md * (md * md + 2.0 * md * nd + 2.0 * nd * nd) / (2.0 * nd * (md + nd));
        throw OrderViolation("closed_form_K: pair falls outside the displayed case");
    }
    // homogeneous family: only the sin/sin table is displayed
    if (pair != PairType::SinSin)
        throw OrderViolation("closed_form_K: homogeneous family displays sin/sin pairs only");
    if (family.s == 0.0) {
        if (m == n) throw OrderViolation("closed_form_K: need distinct modes");
        return 3.0 * pi * (static_cast<double>(m) * m + static_cast<double>(n) * n);
    }
    if (!(n > m)) throw OrderViolation("closed_form_K: displayed case requires n > m");
    return homogeneous_s_display(family.s, m, n);
}

// ── mode-pair scans ──────────────────────────────────────────────────────────

struct CurvatureScanRow {
    int m = 0, n = 0;
    std::string pair;
    double K_numeric = 0.0;
    std::optional<double> K_closed;
    std::optional<double> ratio;
};

struct CurvatureScan {
    std::vector<CurvatureScanRow> rows;
    int negative_count = 0;
    int positive_count = 0;
};

namespace detail {

inline std::optional<CurvatureFamily> family_of(const MetricKind& kind) {
    if (kind == MetricKind::mu_half()) return CurvatureFamily::mu_half_table();
    if (kind.variant() == MetricKind::Variant::HomogeneousS)
        return CurvatureFamily::homogeneous_s(kind.s());
    return std::nullopt;
}

} // namespace detail

// Scans (sin mx, sin n_fixed·x) over m_range, optionally adding the mixed
// same-mode pairs (sin mx, cos mx).  Closed forms are quoted through the
// symmetric valid case (K is symmetric in its arguments); ratios are
// reported, not asserted.
inline CurvatureScan curvature_scan(const MetricKind& kind, int n_fixed,
                                    const std::vector<int>& m_range,
                                    bool include_same_mode = false, int grid_n = 128) {
    const GridSpec g(grid_n);
    const auto family = detail::family_of(kind);
    CurvatureScan scan;
    auto add = [&](int m, int n, PairType pt, const char* label, const PeriodicField& a,
                   const PeriodicField& b) {
        CurvatureScanRow row;
        row.m = m;
        row.n = n;
        row.pair = label;
        row.K_numeric = sectional_curvature(kind, a, b).K;
        if (family) {
            try {
                // symmetric valid case: order the sin/sin modes as (small, large)
                const int lo = std::min(m, n), hi = std::max(m, n);
                row.K_closed = (pt == PairType::SinSin)
                                   ? closed_form_K(*family, pt, lo, hi)
                                   : closed_form_K(*family, pt, m, n);
                row.ratio = row.K_numeric / *row.K_closed;
            } catch (const OrderViolation&) {
            }
        }
        (row.K_numeric < 0.0 ? scan.negative_count : scan.positive_count)++;
        scan.rows.push_back(std::move(row));
    };
    for (int m : m_range) {
        if (m == n_fixed) continue;
        add(m, n_fixed, PairType::SinSin, "sin/sin",
            PeriodicField::harmonic(g, m, 1.0, -pi / 2),
            PeriodicField::harmonic(g, n_fixed, 1.0, -pi / 2));
    }
    if (include_same_mode) {
        for (int m : m_range)
            add(m, m, PairType::SinCos, "sin/cos",
                PeriodicField::harmonic(g, m, 1.0, -pi / 2), PeriodicField::harmonic(g, m, 1.0, 0.0));
    }
    return scan;
}

} // namespace wunsch

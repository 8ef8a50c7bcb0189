// metric.hpp — inertia operators of the right-invariant metrics on Diff(S¹).
//
// Each metric is defined by the Fourier symbol a(n) of its inertia operator A:
//
//     Ḣ^{1/2}  : a(n) = |n|              (degenerate: a(0) = 0)
//     μH^{1/2} : a(n) = δ₀(n) + |n|      (δ₀ = Kronecker indicator of n = 0)
//     H^{1/2}  : a(n) = 1 + |n|
//     Ḣ^s      : a(n) = |n|^{2s}         (degenerate)
//
// with inner product ⟨u, v⟩ = ∫ (Au) v dx.  Degenerate kinds invert on the
// mean-zero gauge slice: inertia_invert returns the unique mean-zero
// preimage and refuses data with non-negligible mean.

#pragma once

#include <cmath>
#include <string>

#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"

namespace wunsch {

class MetricKind {
  public:
    enum class Variant { HomogeneousHalf, MuHalf, FullHalf, HomogeneousS };

    static MetricKind homogeneous_half() { return MetricKind(Variant::HomogeneousHalf, 0.5); }
    static MetricKind mu_half() { return MetricKind(Variant::MuHalf, 0.5); }
    static MetricKind full_half() { return MetricKind(Variant::FullHalf, 0.5); }
    static MetricKind homogeneous_s(double s) {
        if (s <= 0.0) throw std::invalid_argument("MetricKind::homogeneous_s: s must be > 0");
        return MetricKind(Variant::HomogeneousS, s);
    }
    // Burgers-type limit a(n) = |n|⁰ (mean-zero projection), used in the
    // curvature tables. Not constructible through homogeneous_s (s > 0).
    static MetricKind homogeneous_s0() { return MetricKind(Variant::HomogeneousS, 0.0); }

    Variant variant() const { return variant_; }
    double s() const { return s_; }

    double symbol(int n) const {
        const int a = std::abs(n);
        switch (variant_) {
            case Variant::HomogeneousHalf: return static_cast<double>(a);
            case Variant::MuHalf: return (a == 0 ? 1.0 : static_cast<double>(a));
            case Variant::FullHalf: return 1.0 + a;
            case Variant::HomogeneousS:
                return (a == 0) ? 0.0 : std::pow(static_cast<double>(a), 2.0 * s_);
        }
        return 0.0;
    }

    // order of A as a pseudodifferential operator
    double order() const {
        return (variant_ == Variant::HomogeneousS) ? 2.0 * s_ : 1.0;
    }

    bool degenerate() const {
        return variant_ == Variant::HomogeneousHalf || variant_ == Variant::HomogeneousS;
    }

    std::string name() const {
        switch (variant_) {
            case Variant::HomogeneousHalf: return "homogeneous_half";
            case Variant::MuHalf: return "mu_half";
            case Variant::FullHalf: return "full_half";
            case Variant::HomogeneousS: return "homogeneous_s(" + std::to_string(s_) + ")";
        }
        return "?";
    }

    friend bool operator==(const MetricKind& a, const MetricKind& b) {
        return a.variant_ == b.variant_ && a.s_ == b.s_;
    }

  private:
    MetricKind(Variant v, double s) : variant_(v), s_(s) {}
    Variant variant_;
    double s_;
};

// tolerance for "mean considered zero" when a degenerate kind inverts
inline double mean_gauge_tolerance(const PeriodicField& w) {
    return 1e-9 * std::max(1.0, w.sup_norm());
}

inline PeriodicField inertia_apply(const MetricKind& kind, const PeriodicField& u) {
    return u.with_multiplier([&kind](int n) -> cplx { return {kind.symbol(n), 0.0}; });
}

// A⁻¹.  Degenerate kinds: requires |mean(w)| within gauge tolerance and
// returns the mean-zero preimage.
inline PeriodicField inertia_invert(const MetricKind& kind, const PeriodicField& w) {
    if (kind.degenerate() && std::abs(w.mean()) > mean_gauge_tolerance(w))
        throw DegenerateMeanError("inertia_invert(" + kind.name() +
                                  "): field has non-negligible mean " + std::to_string(w.mean()));
    return w.with_multiplier([&kind](int n) -> cplx {
        const double a = kind.symbol(n);
        return (a == 0.0) ? cplx(0.0, 0.0) : cplx(1.0 / a, 0.0);
    });
}

// ⟨u, v⟩ = ∫ (Au) v dx, evaluated exactly from the spectra.
inline double inner_product(const MetricKind& kind, const PeriodicField& u,
                            const PeriodicField& v) {
    require_same_grid(u.grid(), v.grid(), "inner_product");
    const int m = u.grid().max_mode();
    double acc = kind.symbol(0) * u.coeff(0).real() * v.coeff(0).real();
    for (int n = 1; n < m; ++n)
        acc += 2.0 * kind.symbol(n) * (u.coeff(n) * std::conj(v.coeff(n))).real();
    acc += kind.symbol(m) * u.coeff(m).real() * v.coeff(m).real();
    return two_pi * acc;
}

inline double metric_norm(const MetricKind& kind, const PeriodicField& u) {
    return std::sqrt(std::max(0.0, inner_product(kind, u, u)));
}

} // namespace wunsch

// diffeo.hpp — orientation-preserving circle diffeomorphisms.
//
// A Diffeo is stored through its periodic displacement, η(x) = x + p(x),
// which makes η(x + 2π) = η(x) + 2π automatic.  Validity means η_x > 0 at
// every node.  Composition of a field with η evaluates the field's
// trigonometric interpolant at the displaced nodes; inversion solves the
// monotone scalar equation η(y) = x per node with a bisection-safeguarded
// Newton iteration.

#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"

namespace wunsch {

class Diffeo {
  public:
    static Diffeo identity(const GridSpec& g) { return Diffeo(PeriodicField::zero(g)); }

    static Diffeo from_displacement(PeriodicField p) { return Diffeo(std::move(p)); }

    // rotation x ↦ x + θ
    static Diffeo rotation(const GridSpec& g, double theta) {
        return Diffeo(PeriodicField::constant(g, theta));
    }

    const GridSpec& grid() const { return displacement_.grid(); }
    const PeriodicField& displacement() const { return displacement_; }
    const PeriodicField& deriv() const { return eta_x_; } // η_x = 1 + p_x
    double min_deriv() const { return min_eta_x_; }

    double operator()(double x) const { return x + displacement_.evaluate(x); }
    double deriv_at(double x) const { return eta_x_.evaluate(x); }

    // η(x_j) for all nodes
    std::vector<double> node_images() const {
        const GridSpec& g = grid();
        std::vector<double> out(g.n);
        for (int j = 0; j < g.n; ++j) out[j] = g.node(j) + displacement_.samples()[j];
        return out;
    }

  private:
    explicit Diffeo(PeriodicField p)
        : displacement_(std::move(p)),
          eta_x_(PeriodicField::constant(displacement_.grid(), 1.0) + derivative(displacement_)) {
        min_eta_x_ = eta_x_.samples()[0];
        for (double v : eta_x_.samples()) min_eta_x_ = std::min(min_eta_x_, v);
        if (!(min_eta_x_ > 0.0))
            throw NotADiffeo("Diffeo: eta_x is not strictly positive at the nodes (min = " +
                             std::to_string(min_eta_x_) + ")");
    }

    PeriodicField displacement_;
    PeriodicField eta_x_;
    double min_eta_x_ = 0.0;
};

// f ∘ η sampled on the grid of η.
inline PeriodicField compose(const PeriodicField& f, const Diffeo& eta) {
    require_same_grid(f.grid(), eta.grid(), "compose");
    return PeriodicField::from_samples(f.grid(), f.evaluate(eta.node_images()));
}

namespace detail {

// Solve η(y) = target for the monotone lift.  Newton from `guess`,
// bisection fallback on the bracket [lo, hi]; tolerance 1e−12 on the
// residual, 60-iteration cap (monotonicity makes this convergent).
inline double invert_at(const PeriodicField& p, const PeriodicField& px, double target,
                        double lo, double hi, double guess) {
    auto residual = [&](double y) { return y + p.evaluate(y) - target; };
    double y = std::clamp(guess, lo, hi);
    double r = residual(y);
    for (int it = 0; it < 60; ++it) {
        if (std::abs(r) < 1e-13) break;
        if (r > 0.0) hi = y; else lo = y;
        const double deriv = 1.0 + px.evaluate(y);
        double ynext = (deriv > 1e-14) ? y - r / deriv : 0.5 * (lo + hi);
        if (!(ynext > lo && ynext < hi)) ynext = 0.5 * (lo + hi);
        y = ynext;
        r = residual(y);
    }
    return y;
}

} // namespace detail

// η⁻¹ as a Diffeo on the same grid.  `warm` optionally supplies per-node
// starting guesses for the root solve (e.g. the previous step's inverse).
inline Diffeo invert_diffeo(const Diffeo& eta,
                            const std::vector<double>* warm = nullptr) {
    const GridSpec& g = eta.grid();
    const PeriodicField& p = eta.displacement();
    const PeriodicField px = derivative(p);
    double pmin = p.samples()[0], pmax = p.samples()[0];
    for (double v : p.samples()) {
        pmin = std::min(pmin, v);
        pmax = std::max(pmax, v);
    }
    // generous bracket padding: the interpolant can overshoot the samples
    const double pad = 0.5 + 1e-6 * (1.0 + std::abs(pmax) + std::abs(pmin));
    std::vector<double> q(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double x = g.node(j);
        const double guess = warm ? (*warm)[j] + x : x - p.evaluate(x);
        const double y =
            detail::invert_at(p, px, x, x - pmax - pad, x - pmin + pad, guess);
        q[j] = y - x;
    }
    return Diffeo::from_displacement(PeriodicField::from_samples(g, std::move(q)));
}

} // namespace wunsch

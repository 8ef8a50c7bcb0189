// inequalities.hpp — the pointwise Hilbert-transform inequality family
//
//     g_p = H(f·HΛ^p f) + f·Λ^p f ≥ 0,   Λ = H∂_x,  p > 0,
//
// computed by two independent routes:
//
//   direct : the displayed operator combination, evaluated alias-free on a
//            doubled zero-padded grid (exact for band-limited f);
//   series : the tail-sum identity
//            g_p(x) = 2 Σ_{k≥1} [k^p − (k−1)^p] |φ_k(x)|²,
//            φ_k(x) = Σ_{m≥k} c_m e^{imx},
//            built by reverse cumulative summation of the analytic part.
//
// The series route is a sum of nonnegative terms, so it is sign-exact in
// floating point.  Both routes generalize to any nondecreasing symbol Q with
// Q(0) = 0 through g_Q = H(f·H Qf) + f·Qf with increments Q(k) − Q(k−1).

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "wunsch/errors.hpp"
#include "wunsch/fourier.hpp"

namespace wunsch {

namespace detail {

// increments Q(k) − Q(k−1) for k = 1..M; throws NotMonotone on a negative one
inline std::vector<double> symbol_increments(const std::function<double(double)>& q, int m) {
    if (std::abs(q(0.0)) > 1e-14)
        throw std::invalid_argument("symbol must satisfy Q(0) = 0");
    std::vector<double> incr(m + 1, 0.0);
    double prev = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double qk = q(static_cast<double>(k));
        incr[k] = qk - prev;
        if (incr[k] < 0.0)
            throw NotMonotone("symbol is not nondecreasing at k = " + std::to_string(k));
        prev = qk;
    }
    return incr;
}

// analytic-part coefficients: c'_m = ĉ_m for 0 < m < N/2, c'_{N/2} = ĉ_{N/2}/2
// (the real Nyquist cosine splits evenly between ±N/2)
inline std::vector<cplx> analytic_coeffs(const PeriodicField& f) {
    const int m = f.grid().max_mode();
    std::vector<cplx> c(m + 1, cplx(0.0, 0.0));
    for (int n = 1; n < m; ++n) c[n] = f.coeff(n);
    c[m] = 0.5 * f.coeff(m);
    return c;
}

inline PeriodicField series_combination(const PeriodicField& f, const std::vector<double>& incr) {
    const GridSpec& g = f.grid();
    const int m = g.max_mode();
    const auto c = analytic_coeffs(f);
    std::vector<double> out(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double x = g.node(j);
        const cplx zbar(std::cos(x), -std::sin(x)); // z^{-1}
        cplx w = std::polar(1.0, m * x);            // z^k, k = M downwards
        cplx phi(0.0, 0.0);
        double acc = 0.0;
        for (int k = m; k >= 1; --k) {
            phi += c[k] * w;
            acc += incr[k] * std::norm(phi);
            w *= zbar;
        }
        out[j] = 2.0 * acc;
    }
    return PeriodicField::from_samples(g, std::move(out));
}

// H(f·Hg) + f·g evaluated fully on a doubled grid, restricted at the end;
// alias-free for band-limited f, g.
inline PeriodicField bilinear_combination(const PeriodicField& f, const PeriodicField& gfield) {
    const GridSpec big(2 * f.size());
    const PeriodicField fb = pad_to(f, big);
    const PeriodicField gb = pad_to(gfield, big);
    auto pointwise = [&big](const PeriodicField& a, const PeriodicField& b) {
        std::vector<double> s(big.n);
        for (int j = 0; j < big.n; ++j) s[j] = a.samples()[j] * b.samples()[j];
        return PeriodicField::from_samples(big, std::move(s));
    };
    const PeriodicField combo = hilbert(pointwise(fb, hilbert(gb))) + pointwise(fb, gb);
    return restrict_to(combo, f.grid());
}

} // namespace detail

// direct route for a general nondecreasing symbol
inline PeriodicField gq_direct(const PeriodicField& f, const std::function<double(double)>& q) {
    detail::symbol_increments(q, f.grid().max_mode()); // monotonicity check
    const PeriodicField qf = f.with_multiplier([&q](int n) -> cplx {
        return {q(static_cast<double>(n)), 0.0};
    });
    return detail::bilinear_combination(f, qf);
}

// series route for a general nondecreasing symbol
inline PeriodicField gq_series(const PeriodicField& f, const std::function<double(double)>& q) {
    return detail::series_combination(f, detail::symbol_increments(q, f.grid().max_mode()));
}

inline PeriodicField gp_direct(const PeriodicField& f, double p) {
    if (p <= 0.0) throw std::invalid_argument("gp_direct: p must be positive");
    return detail::bilinear_combination(f, lambda_pow(f, p));
}

inline PeriodicField gp_series(const PeriodicField& f, double p) {
    if (p <= 0.0) throw std::invalid_argument("gp_series: p must be positive");
    const int m = f.grid().max_mode();
    std::vector<double> incr(m + 1, 0.0);
    for (int k = 1; k <= m; ++k)
        incr[k] = std::pow(static_cast<double>(k), p) - std::pow(static_cast<double>(k - 1), p);
    return detail::series_combination(f, incr);
}

// The four sign-definite combinations obtained from g_p at p = 1, 2, 3, 4 via
// H² = −1:   −H(ff′)+fHf′,  −H(fHf″)−ff″,  H(ff‴)−fHf‴,  H(fHf⁗)+ff⁗.
struct CorollaryMinima {
    double order1, order2, order3, order4;
};

inline CorollaryMinima corollary_suite(const PeriodicField& f) {
    const GridSpec big(2 * f.size());
    const PeriodicField fb = pad_to(f, big);
    auto pw = [&big](const PeriodicField& a, const PeriodicField& b) {
        std::vector<double> s(big.n);
        for (int j = 0; j < big.n; ++j) s[j] = a.samples()[j] * b.samples()[j];
        return PeriodicField::from_samples(big, std::move(s));
    };
    auto minimum = [](const PeriodicField& a) {
        double m = a.samples()[0];
        for (double v : a.samples()) m = std::min(m, v);
        return m;
    };
    const PeriodicField f1 = derivative(fb);
    const PeriodicField f2 = derivative(f1);
    const PeriodicField f3 = derivative(f2);
    const PeriodicField f4 = derivative(f3);
    CorollaryMinima out{};
    out.order1 = minimum(pw(fb, hilbert(f1)) - hilbert(pw(fb, f1)));
    out.order2 = minimum(-1.0 * hilbert(pw(fb, hilbert(f2))) - pw(fb, f2));
    out.order3 = minimum(hilbert(pw(fb, f3)) - pw(fb, hilbert(f3)));
    out.order4 = minimum(hilbert(pw(fb, hilbert(f4))) + pw(fb, f4));
    return out;
}

// sup-norm of (Hf)(Hg) − H(gHf) − H(fHg) − fg for mean-zero f, g
inline double product_identity_residual(const PeriodicField& f, const PeriodicField& g) {
    require_same_grid(f.grid(), g.grid(), "product_identity_residual");
    if (std::abs(f.mean()) > 1e-10 * std::max(1.0, f.sup_norm()) ||
        std::abs(g.mean()) > 1e-10 * std::max(1.0, g.sup_norm()))
        throw MeanNotZero("product_identity_residual: inputs must have zero mean");
    const GridSpec big(2 * f.size());
    const PeriodicField fb = pad_to(f, big), gb = pad_to(g, big);
    auto pw = [&big](const PeriodicField& a, const PeriodicField& b) {
        std::vector<double> s(big.n);
        for (int j = 0; j < big.n; ++j) s[j] = a.samples()[j] * b.samples()[j];
        return PeriodicField::from_samples(big, std::move(s));
    };
    const PeriodicField res = pw(hilbert(fb), hilbert(gb)) - hilbert(pw(gb, hilbert(fb))) -
                              hilbert(pw(fb, hilbert(gb))) - pw(fb, gb);
    return res.sup_norm();
}

} // namespace wunsch

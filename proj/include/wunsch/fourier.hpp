// fourier.hpp — periodic fields on S¹ and their Fourier-multiplier calculus.
//
// A PeriodicField holds N equispaced samples on [0, 2π) together with the
// matching truncated Fourier expansion
//
//     f(x) = ĉ₀ + 2 Σ_{n=1}^{N/2-1} Re(ĉ_n e^{inx}) + ĉ_{N/2} cos(Nx/2),
//
// i.e. a half-complex spectrum ĉ_n for 0 ≤ n ≤ N/2 with ĉ₀ and the Nyquist
// coefficient real.  Both representations are materialized at construction,
// so every operation is a pure function of immutable values and fields can
// be shared freely across threads.
//
// Conventions:
//   • Hilbert transform:  ĉ_n ↦ −i·sgn(n)·ĉ_n   (mean and Nyquist killed).
//   • Derivative:         ĉ_n ↦ in·ĉ_n           (Nyquist killed: the lone
//     cosine mode has no representable derivative).
//   • Λ^p = (H∂_x)^p:      ĉ_n ↦ |n|^p·ĉ_n with |0|^p := 0 for every p ≥ 0,
//     so constants are annihilated even at p = 0.
//   • Quadratic products are formed pointwise in sample space and then
//     either dealiased by the 2/3 rule (dynamics) or computed on a doubled,
//     zero-padded grid (alias-free; used wherever identities are tested at
//     round-off level).

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wunsch/errors.hpp"

namespace wunsch {

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

using cplx = std::complex<double>;

// ── Grid ─────────────────────────────────────────────────────────────────────

struct GridSpec {
    int n = 0; // sample count, even, ≥ 8

    GridSpec() = default;
    explicit GridSpec(int count) : n(count) {
        if (n < 8 || n % 2 != 0)
            throw std::invalid_argument("GridSpec: N must be even and at least 8");
    }

    double dx() const { return two_pi / n; }
    double node(int j) const { return two_pi * j / n; }
    int max_mode() const { return n / 2; }

    friend bool operator==(const GridSpec& a, const GridSpec& b) { return a.n == b.n; }
    friend bool operator!=(const GridSpec& a, const GridSpec& b) { return a.n != b.n; }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (a != b)
        throw GridMismatch(std::string(where) + ": fields live on different grids");
}

// ── FFT (internal) ───────────────────────────────────────────────────────────

namespace detail {

// In-place complex transform, unnormalized: sign = −1 forward (e^{−inx}),
// sign = +1 inverse.  Radix-2 for power-of-two sizes, direct DFT otherwise
// (any even N is legal on a grid; only powers of two occur in hot paths).
inline void fft(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (std::has_single_bit(n)) {
        // bit-reversal permutation
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const double ang = sign * two_pi / static_cast<double>(len);
            const cplx wlen(std::cos(ang), std::sin(ang));
            for (std::size_t i = 0; i < n; i += len) {
                cplx w(1.0, 0.0);
                for (std::size_t k = 0; k < len / 2; ++k) {
                    cplx u = a[i + k];
                    cplx v = a[i + k + len / 2] * w;
                    a[i + k] = u + v;
                    a[i + k + len / 2] = u - v;
                    w *= wlen;
                }
            }
        }
    } else {
        std::vector<cplx> out(n, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                const double ang = sign * two_pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
                acc += a[j] * cplx(std::cos(ang), std::sin(ang));
            }
            out[k] = acc;
        }
        a = std::move(out);
    }
}

inline std::vector<cplx> spectrum_from_samples(const GridSpec& g, const std::vector<double>& s) {
    const int n = g.n, m = n / 2;
    std::vector<cplx> buf(n);
    for (int j = 0; j < n; ++j) buf[j] = cplx(s[j], 0.0);
    fft(buf, -1);
    std::vector<cplx> half(m + 1);
    const double inv = 1.0 / n;
    for (int k = 0; k <= m; ++k) half[k] = buf[k] * inv;
    half[0] = cplx(half[0].real(), 0.0);
    half[m] = cplx(half[m].real(), 0.0);
    return half;
}

inline std::vector<double> samples_from_spectrum(const GridSpec& g, const std::vector<cplx>& half) {
    const int n = g.n, m = n / 2;
    std::vector<cplx> buf(n);
    buf[0] = half[0];
    buf[m] = half[m];
    for (int k = 1; k < m; ++k) {
        buf[k] = half[k];
        buf[n - k] = std::conj(half[k]);
    }
    fft(buf, +1);
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = buf[j].real();
    return s;
}

} // namespace detail

// ── PeriodicField ────────────────────────────────────────────────────────────

class PeriodicField {
  public:
    PeriodicField() = default;

    static PeriodicField from_samples(const GridSpec& g, std::vector<double> s) {
        if (static_cast<int>(s.size()) != g.n)
            throw std::invalid_argument("PeriodicField: sample count does not match grid");
        auto spec = detail::spectrum_from_samples(g, s);
        return PeriodicField(g, std::move(s), std::move(spec));
    }

    static PeriodicField from_spectrum(const GridSpec& g, std::vector<cplx> half) {
        if (static_cast<int>(half.size()) != g.n / 2 + 1)
            throw std::invalid_argument("PeriodicField: spectrum length must be N/2+1");
        half[0] = cplx(half[0].real(), 0.0);
        half[g.n / 2] = cplx(half[g.n / 2].real(), 0.0);
        auto s = detail::samples_from_spectrum(g, half);
        return PeriodicField(g, std::move(s), std::move(half));
    }

    template <typename F>
    static PeriodicField sample(const GridSpec& g, F&& f) {
        std::vector<double> s(g.n);
        for (int j = 0; j < g.n; ++j) s[j] = f(g.node(j));
        return from_samples(g, std::move(s));
    }

    static PeriodicField zero(const GridSpec& g) {
        return PeriodicField(g, std::vector<double>(g.n, 0.0),
                             std::vector<cplx>(g.n / 2 + 1, cplx(0.0, 0.0)));
    }

    static PeriodicField constant(const GridSpec& g, double c) {
        std::vector<cplx> half(g.n / 2 + 1, cplx(0.0, 0.0));
        half[0] = cplx(c, 0.0);
        return PeriodicField(g, std::vector<double>(g.n, c), std::move(half));
    }

    // amp·cos(n x + phase); n = 0 gives the constant amp·cos(phase).
    static PeriodicField harmonic(const GridSpec& g, int n, double amp, double phase) {
        if (n < 0 || n > g.n / 2)
            throw std::invalid_argument("PeriodicField::harmonic: mode outside grid band");
        return sample(g, [=](double x) { return amp * std::cos(n * x + phase); });
    }

    const GridSpec& grid() const { return grid_; }
    int size() const { return grid_.n; }
    const std::vector<double>& samples() const { return samples_; }
    const std::vector<cplx>& spectrum() const { return spectrum_; }
    cplx coeff(int n) const { return spectrum_[n]; } // 0 ≤ n ≤ N/2

    double mean() const { return spectrum_[0].real(); }

    double sup_norm() const {
        double m = 0.0;
        for (double v : samples_) m = std::max(m, std::abs(v));
        return m;
    }

    // L² norm of the interpolant, exact via Parseval.
    double l2_norm() const {
        const int m = grid_.n / 2;
        double acc = spectrum_[0].real() * spectrum_[0].real();
        for (int n = 1; n < m; ++n) acc += 2.0 * std::norm(spectrum_[n]);
        acc += spectrum_[m].real() * spectrum_[m].real();
        return std::sqrt(two_pi * acc);
    }

    bool all_finite() const {
        for (double v : samples_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    // Trigonometric interpolant at an arbitrary point (complex Horner over
    // e^{ix}, written out in real arithmetic for the hot paths).
    double evaluate(double x) const {
        const int m = grid_.n / 2;
        const double zr = std::cos(x), zi = std::sin(x);
        const cplx* c = spectrum_.data();
        double ar = c[m].real(), ai = 0.0;
        for (int n = m - 1; n >= 1; --n) {
            const double t = ar * zr - ai * zi + 2.0 * c[n].real();
            ai = ar * zi + ai * zr + 2.0 * c[n].imag();
            ar = t;
        }
        return ar * zr - ai * zi + c[0].real();
    }

    std::vector<double> evaluate(const std::vector<double>& xs) const {
        std::vector<double> out(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = evaluate(xs[i]);
        return out;
    }

    // ── field-space linear algebra (spectra and samples both combined) ──────
    friend PeriodicField operator+(const PeriodicField& a, const PeriodicField& b) {
        require_same_grid(a.grid_, b.grid_, "operator+");
        return a.zip(b, [](double x, double y) { return x + y; },
                     [](cplx x, cplx y) { return x + y; });
    }
    friend PeriodicField operator-(const PeriodicField& a, const PeriodicField& b) {
        require_same_grid(a.grid_, b.grid_, "operator-");
        return a.zip(b, [](double x, double y) { return x - y; },
                     [](cplx x, cplx y) { return x - y; });
    }
    friend PeriodicField operator*(double c, const PeriodicField& a) {
        return a.map([=](double x) { return c * x; }, [=](cplx x) { return c * x; });
    }
    friend PeriodicField operator-(const PeriodicField& a) { return -1.0 * a; }

    PeriodicField with_multiplier(const std::function<cplx(int)>& mult) const {
        const int m = grid_.n / 2;
        std::vector<cplx> half(m + 1);
        for (int n = 0; n <= m; ++n) half[n] = mult(n) * spectrum_[n];
        return from_spectrum(grid_, std::move(half));
    }

  private:
    PeriodicField(GridSpec g, std::vector<double> s, std::vector<cplx> h)
        : grid_(g), samples_(std::move(s)), spectrum_(std::move(h)) {}

    template <typename FS, typename FH>
    PeriodicField zip(const PeriodicField& b, FS&& fs, FH&& fh) const {
        std::vector<double> s(samples_.size());
        std::vector<cplx> h(spectrum_.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = fs(samples_[i], b.samples_[i]);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = fh(spectrum_[i], b.spectrum_[i]);
        return PeriodicField(grid_, std::move(s), std::move(h));
    }
    template <typename FS, typename FH>
    PeriodicField map(FS&& fs, FH&& fh) const {
        std::vector<double> s(samples_.size());
        std::vector<cplx> h(spectrum_.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = fs(samples_[i]);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = fh(spectrum_[i]);
        return PeriodicField(grid_, std::move(s), std::move(h));
    }

    GridSpec grid_;
    std::vector<double> samples_;
    std::vector<cplx> spectrum_;
};

// ── multiplier operators ─────────────────────────────────────────────────────

inline double mean(const PeriodicField& f) { return f.mean(); }

// H: ĉ_n ↦ −i·sgn(n)·ĉ_n.  Output has zero mean; Nyquist mode killed.
inline PeriodicField hilbert(const PeriodicField& f) {
    const int m = f.grid().max_mode();
    return f.with_multiplier([m](int n) -> cplx {
        if (n == 0 || n == m) return {0.0, 0.0};
        return {0.0, -1.0};
    });
}

inline PeriodicField derivative(const PeriodicField& f) {
    const int m = f.grid().max_mode();
    return f.with_multiplier([m](int n) -> cplx {
        if (n == m) return {0.0, 0.0};
        return {0.0, static_cast<double>(n)};
    });
}

// Λ^p = |n|^p with |0|^p := 0 (constants annihilated for every p ≥ 0).
inline PeriodicField lambda_pow(const PeriodicField& f, double p) {
    if (p < 0.0) throw std::invalid_argument("lambda_pow: p must be nonnegative");
    return f.with_multiplier([p](int n) -> cplx {
        if (n == 0) return {0.0, 0.0};
        return {std::pow(static_cast<double>(n), p), 0.0};
    });
}

// f(· + θ): ĉ_n ↦ ĉ_n e^{inθ}.  The Nyquist mode is projected onto its
// representable cosine part.
inline PeriodicField translate(const PeriodicField& f, double theta) {
    const int m = f.grid().max_mode();
    return f.with_multiplier([m, theta](int n) -> cplx {
        if (n == m) return {std::cos(m * theta), 0.0};
        return std::polar(1.0, n * theta);
    });
}

// zero all modes with |n| > nmax
inline PeriodicField truncate_modes(const PeriodicField& f, int nmax) {
    return f.with_multiplier([nmax](int n) -> cplx {
        return (n <= nmax) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    });
}

// ── products and quadrature ──────────────────────────────────────────────────

// Pointwise product dealiased by the 2/3 rule: modes |n| > N/3 are zeroed
// after multiplication.  Used inside all evolution equations.
inline PeriodicField product_dealiased(const PeriodicField& f, const PeriodicField& g) {
    require_same_grid(f.grid(), g.grid(), "product_dealiased");
    const int n = f.size();
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = f.samples()[j] * g.samples()[j];
    return truncate_modes(PeriodicField::from_samples(f.grid(), std::move(s)), n / 3);
}

namespace detail {

inline std::vector<cplx> pad_spectrum(const std::vector<cplx>& half, int m_small, int m_big) {
    std::vector<cplx> out(m_big + 1, cplx(0.0, 0.0));
    for (int n = 0; n <= m_small; ++n) out[n] = half[n];
    return out;
}

} // namespace detail

// Zero-pad to a doubled grid. Retained modes of products computed there are
// alias-free.
inline PeriodicField pad_to(const PeriodicField& f, const GridSpec& big) {
    if (big.n < f.size()) throw std::invalid_argument("pad_to: target grid is smaller");
    return PeriodicField::from_spectrum(
        big, detail::pad_spectrum(f.spectrum(), f.grid().max_mode(), big.max_mode()));
}

inline PeriodicField restrict_to(const PeriodicField& f, const GridSpec& small) {
    if (small.n > f.size()) throw std::invalid_argument("restrict_to: target grid is larger");
    std::vector<cplx> half(small.max_mode() + 1);
    for (int n = 0; n <= small.max_mode(); ++n) half[n] = f.coeff(n);
    return PeriodicField::from_spectrum(small, std::move(half));
}

// Alias-free product: both factors are zero-padded to a 2N grid, multiplied
// pointwise there, and the result truncated back.  For factors band-limited
// to N/2 every retained coefficient is exact.
inline PeriodicField product_padded(const PeriodicField& f, const PeriodicField& g) {
    require_same_grid(f.grid(), g.grid(), "product_padded");
    const GridSpec big(2 * f.size());
    PeriodicField fb = pad_to(f, big), gb = pad_to(g, big);
    std::vector<double> s(big.n);
    for (int j = 0; j < big.n; ++j) s[j] = fb.samples()[j] * gb.samples()[j];
    return restrict_to(PeriodicField::from_samples(big, std::move(s)), f.grid());
}

inline double integral(const PeriodicField& f) { return two_pi * f.mean(); }

// ∫ f g dx, exact for the two interpolants (Parseval).
inline double integral_product(const PeriodicField& f, const PeriodicField& g) {
    require_same_grid(f.grid(), g.grid(), "integral_product");
    const int m = f.grid().max_mode();
    double acc = f.coeff(0).real() * g.coeff(0).real();
    for (int n = 1; n < m; ++n) acc += 2.0 * (f.coeff(n) * std::conj(g.coeff(n))).real();
    acc += f.coeff(m).real() * g.coeff(m).real();
    return two_pi * acc;
}

// ∫ f g h dx with the product formed alias-free.
inline double integral_triple(const PeriodicField& f, const PeriodicField& g,
                              const PeriodicField& h) {
    return integral_product(product_padded(f, g), h);
}

// ── principal-value Hilbert transform ────────────────────────────────────────

// (Hf)(x) = (1/2π) p.v.∫ f(y) cot((x−y)/2) dy by the half-grid-shifted
// trapezoid rule: quadrature nodes y_k = x + (2k+1)π/N straddle the
// singularity symmetrically, so no cutoff parameter is needed and the rule
// is spectrally accurate for band-limited f.
inline double hilbert_pv(const PeriodicField& f, double x) {
    const int n = f.size();
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double yk = x + (2.0 * k + 1.0) * pi / n;
        acc += f.evaluate(yk) * (1.0 / std::tan((x - yk) / 2.0));
    }
    return acc / n;
}

// ── seeded random band-limited fields ────────────────────────────────────────

struct RandomFieldOptions {
    int max_mode = 16;
    double amplitude = 1.0;
    double decay = 2.0;      // coefficient scale (1+n)^{-decay}
    bool zero_mean = true;
};

inline PeriodicField random_field(const GridSpec& g, std::uint64_t seed,
                                  const RandomFieldOptions& opt = {}) {
    if (opt.max_mode >= g.max_mode())
        throw std::invalid_argument("random_field: max_mode must be below the Nyquist mode");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> half(g.max_mode() + 1, cplx(0.0, 0.0));
    if (!opt.zero_mean) half[0] = cplx(opt.amplitude * gauss(rng), 0.0);
    for (int n = 1; n <= opt.max_mode; ++n) {
        const double scale = opt.amplitude / std::pow(1.0 + n, opt.decay);
        half[n] = scale * cplx(gauss(rng), gauss(rng));
    }
    return PeriodicField::from_spectrum(g, std::move(half));
}

} // namespace wunsch

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgprop/complex_vector.hpp"

namespace sgprop {

// Segment i[a,b] of the imaginary axis assumed to enclose the spectrum of G.
struct SpectralSegment {
    double a;
    double b;

    SpectralSegment(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw std::invalid_argument("SpectralSegment requires a < b");
    }
    double center() const { return 0.5 * (a + b); }
    double half_width() const { return 0.5 * (b - a); }
    // z on the segment for x in [-1,1]
    Complex point(double x) const { return Complex(0.0, half_width() * x + center()); }
};

class TailTooLarge : public std::runtime_error {
  public:
    TailTooLarge(double tail, double tol)
        : std::runtime_error("Chebyshev tail " + std::to_string(tail) +
                             " exceeds tolerance " + std::to_string(tol) +
                             " (k too small or segment too wide)"),
          tail_ratio(tail) {}
    double tail_ratio;
};

namespace detail {

// f_m by the defining formula z^{-m} (e^{zt} - sum_{j<m} (zt)^j / j!).
// Cancellation-prone for small |zt|.
inline Complex fm_direct(Complex z, double t, int m) {
    const Complex w = z * t;
    Complex partial = 1.0;
    Complex term = 1.0;
    for (int j = 1; j < m; ++j) {
        term *= w / static_cast<double>(j);
        partial += term;
    }
    Complex num = std::exp(w) - partial;
    for (int j = 0; j < m; ++j) num /= z;
    return num;
}

// Taylor form t^m sum_j (zt)^j / (m+j)!, truncated when terms fall below
// 1e-17 of the partial sum (cap 60 terms).
inline Complex fm_taylor(Complex z, double t, int m) {
    const Complex w = z * t;
    double lead = 1.0;
    for (int j = 1; j <= m; ++j) lead *= t / static_cast<double>(j);
    Complex term = lead;
    Complex sum = term;
    for (int j = 1; j < 60; ++j) {
        term *= w / static_cast<double>(m + j);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace detail

/// f_m(z,t) = z^{-m} (e^{zt} - sum_{j=0}^{m-1} (zt)^j/j!), equal to t^m/m! at z = 0.
/// Switches to the Taylor form for |zt| <= m/2 where the direct formula cancels.
inline Complex fm_scalar(Complex z, double t, int m) {
    if (m < 1) throw std::invalid_argument("fm_scalar: m must be >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("fm_scalar: t must be >= 0");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(t))
        throw std::invalid_argument("fm_scalar: non-finite input");
    if (t == 0.0) return 0.0;
    if (std::abs(z) * t <= 0.5 * m) return detail::fm_taylor(z, t, m);
    return detail::fm_direct(z, t, m);
}

// Chebyshev expansion of z -> f_m(z,t) on a spectral segment:
// f_m(z,t) ~ sum_{n<k} c_n T_n(x), z = i((b-a)x + (a+b))/2.
struct FmChebCoeffs {
    std::vector<Complex> c;
    SpectralSegment segment;
    double t;
    int m;

    // |c_{k-1}| relative to the largest coefficient
    double tail_ratio() const {
        double cmax = 0.0;
        for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
        if (cmax == 0.0) return 0.0;
        return std::abs(c.back()) / cmax;
    }

    Complex evaluate(double x) const {
        // Clenshaw
        Complex b1 = 0.0, b2 = 0.0;
        for (std::size_t n = c.size(); n-- > 1;) {
            Complex b0 = 2.0 * x * b1 - b2 + c[n];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + c[0];
    }
};

/// Coefficients by sampling fm_scalar at oversampling*k Chebyshev-Gauss points
/// and applying the discrete cosine transform. Scalar work only.
/// Throws TailTooLarge when tail_tol < 1 and the relative tail exceeds it.
inline FmChebCoeffs fm_cheb_coeffs(const SpectralSegment& segment, double t, int m, int k,
                                   int oversampling = 4, double tail_tol = 1e-11) {
    if (k < 1) throw std::invalid_argument("fm_cheb_coeffs: k must be >= 1");
    if (oversampling * k < 4 * k)
        throw std::invalid_argument("fm_cheb_coeffs: oversampling must be >= 4");
    const int M = oversampling * k;
    std::vector<Complex> f(M);
    std::vector<double> theta(M);
    for (int q = 0; q < M; ++q) {
        theta[q] = M_PI * (q + 0.5) / M;
        f[q] = fm_scalar(segment.point(std::cos(theta[q])), t, m);
    }
    FmChebCoeffs out{std::vector<Complex>(k), segment, t, m};
    for (int n = 0; n < k; ++n) {
        Complex acc = 0.0;
        for (int q = 0; q < M; ++q) acc += f[q] * std::cos(n * theta[q]);
        out.c[n] = acc * ((n == 0 ? 1.0 : 2.0) / M);
    }
    if (tail_tol < 1.0) {
        const double tail = out.tail_ratio();
        if (tail > tail_tol) throw TailTooLarge(tail, tail_tol);
    }
    return out;
}

}  // namespace sgprop

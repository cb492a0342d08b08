#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sgprop/complex_vector.hpp"

namespace sgprop {

// One Chebyshev-Lobatto time interval [t_start, t_start + dt] with m nodes
// t_j = t_start + (dt/2)(1 - y_j), y_j = cos(j pi/(m-1)), j = 0..m-1.
// Nodes ascend; the first equals t_start and the last t_start + dt exactly.
struct TimeSlab {
    double t_start;
    double dt;
    int m;
    std::vector<double> nodes;

    double y(double t) const { return 1.0 - 2.0 * (t - t_start) / dt; }
};

inline TimeSlab make_time_slab(double t_start, double dt, int m) {
    if (m < 2) throw std::invalid_argument("make_time_slab: m must be >= 2");
    if (!(dt > 0.0)) throw std::invalid_argument("make_time_slab: dt must be > 0");
    TimeSlab slab{t_start, dt, m, std::vector<double>(m)};
    const int N = m - 1;
    for (int j = 0; j < m; ++j)
        slab.nodes[j] = t_start + 0.5 * dt * (1.0 - std::cos(j * M_PI / N));
    slab.nodes[0] = t_start;
    slab.nodes[N] = t_start + dt;
    return slab;
}

// Vectors s_0..s_{m-1} of the Taylor-like source representation
// s(tau) ~ sum_j tau^j/j! s_j with tau = t - t_start in [0, dt].
struct TaylorSourceSet {
    std::vector<ComplexVector> s;

    int order() const { return static_cast<int>(s.size()); }
};

namespace detail {

inline void check_vector_block(const std::vector<ComplexVector>& vals) {
    if (vals.size() < 2) throw std::invalid_argument("need at least 2 node vectors");
    for (const auto& v : vals)
        if (v.size() != vals.front().size())
            throw std::invalid_argument("node vectors have mismatched lengths");
}

}  // namespace detail

/// Lobatto cosine transform: node samples (at y_i = cos(i pi/N), N = m-1) to
/// coefficients a_n with sum_n a_n T_n(y_i) = values[i] exactly at the nodes.
inline std::vector<ComplexVector> samples_to_cheb(const std::vector<ComplexVector>& values) {
    detail::check_vector_block(values);
    const int m = static_cast<int>(values.size());
    const int N = m - 1;
    const std::size_t dim = values.front().size();
    std::vector<ComplexVector> coeffs(m, ComplexVector(dim, 0.0));
    for (int n = 0; n < m; ++n) {
        const double gamma = (n == 0 || n == N) ? N : 0.5 * N;
        for (int i = 0; i < m; ++i) {
            const double w = (i == 0 || i == N) ? 0.5 : 1.0;
            const double cn = w * std::cos(n * i * M_PI / N) / gamma;
            axpy(cn, values[i], coeffs[n]);
        }
    }
    return coeffs;
}

/// Evaluate sum_n coeffs_n T_n(y) (Clenshaw); inverse of samples_to_cheb at nodes.
inline ComplexVector cheb_series_eval(const std::vector<ComplexVector>& coeffs, double y) {
    const std::size_t dim = coeffs.front().size();
    ComplexVector b1(dim, 0.0), b2(dim, 0.0);
    for (std::size_t n = coeffs.size(); n-- > 1;) {
        ComplexVector b0 = coeffs[n];
        for (std::size_t i = 0; i < dim; ++i) b0[i] += 2.0 * y * b1[i] - b2[i];
        b2 = std::move(b1);
        b1 = std::move(b0);
    }
    ComplexVector out = coeffs[0];
    for (std::size_t i = 0; i < dim; ++i) out[i] += y * b1[i] - b2[i];
    return out;
}

/// Chebyshev-to-Taylor-like conversion: coefficients in y(tau) = 1 - 2 tau/dt
/// become s_j with sum_n a_n T_n(y(tau)) = sum_j tau^j/j! s_j identically.
/// Monomial accumulation; guarded at m <= 16 where the map is still tame.
inline TaylorSourceSet cheb_to_taylor(const std::vector<ComplexVector>& coeffs, double dt) {
    detail::check_vector_block(coeffs);
    const int m = static_cast<int>(coeffs.size());
    if (m > 16)
        throw std::invalid_argument(
            "cheb_to_taylor: m > 16 rejected, Chebyshev-to-monomial conversion "
            "conditioning grows exponentially");
    // P[n][j]: coefficient of tau^j in T_n(1 - 2 tau/dt)
    const double alpha = 1.0, beta = -2.0 / dt;
    std::vector<std::vector<double>> P(m, std::vector<double>(m, 0.0));
    P[0][0] = 1.0;
    if (m > 1) {
        P[1][0] = alpha;
        P[1][1] = beta;
    }
    for (int n = 2; n < m; ++n) {
        for (int j = 0; j < m; ++j) {
            P[n][j] = 2.0 * alpha * P[n - 1][j] - P[n - 2][j];
            if (j > 0) P[n][j] += 2.0 * beta * P[n - 1][j - 1];
        }
    }
    const std::size_t dim = coeffs.front().size();
    TaylorSourceSet out;
    out.s.assign(m, ComplexVector(dim, 0.0));
    double jfact = 1.0;
    for (int j = 0; j < m; ++j) {
        if (j > 0) jfact *= j;
        for (int n = 0; n < m; ++n)
            if (P[n][j] != 0.0) axpy(jfact * P[n][j], coeffs[n], out.s[j]);
    }
    return out;
}

/// Barycentric Chebyshev-Lobatto interpolation of node values at time t.
/// Exact at the nodes; mild extrapolation beyond the slab is allowed.
inline ComplexVector barycentric_eval(const TimeSlab& slab,
                                      const std::vector<ComplexVector>& values, double t) {
    detail::check_vector_block(values);
    if (static_cast<int>(values.size()) != slab.m)
        throw std::invalid_argument("barycentric_eval: values/slab size mismatch");
    const int m = slab.m;
    const int N = m - 1;
    const double y = slab.y(t);
    // weights w_i = (-1)^i, halved at the ends
    double sum_w = 0.0;
    std::vector<double> c(m);
    for (int i = 0; i < m; ++i) {
        const double yi = std::cos(i * M_PI / N);
        const double d = y - yi;
        if (std::abs(d) < 1e-14) return values[i];
        double w = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == N) w *= 0.5;
        c[i] = w / d;
        sum_w += c[i];
    }
    ComplexVector out(values.front().size(), 0.0);
    for (int i = 0; i < m; ++i) axpy(c[i] / sum_w, values[i], out);
    return out;
}

}  // namespace sgprop

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sgprop {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline void check_same_dim(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("vector dimension mismatch");
}

// y += alpha * x
inline void axpy(Complex alpha, const ComplexVector& x, ComplexVector& y) {
    check_same_dim(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(Complex alpha, ComplexVector& x) {
    for (auto& v : x) v *= alpha;
}

inline Complex dot(const ComplexVector& a, const ComplexVector& b) {
    check_same_dim(a, b);
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// unweighted discrete l2 norm
inline double norm(const ComplexVector& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

inline double distance(const ComplexVector& a, const ComplexVector& b) {
    check_same_dim(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

inline double relative_error(const ComplexVector& u, const ComplexVector& ref) {
    return distance(u, ref) / norm(ref);
}

inline bool all_finite(const ComplexVector& a) {
    for (const auto& v : a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace sgprop

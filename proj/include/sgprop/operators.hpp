#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sgprop/complex_vector.hpp"
#include "sgprop/fm.hpp"

namespace sgprop {

// Anything that can act on a state vector and report its dimension.
template <class Op>
concept MatrixFreeOperator = requires(const Op& op, const ComplexVector& v, ComplexVector& w) {
    { op.dim() } -> std::convertible_to<std::size_t>;
    op.apply(v, w);
};

/// Matrix-free linear operator with matvec accounting. Every apply()
/// increments the counter by exactly one. A handle is intended to be owned
/// by a single propagation run; the counter is not atomic.
class LinearOperator {
  public:
    using Action = std::function<void(const ComplexVector&, ComplexVector&)>;

    LinearOperator(std::size_t dim, Action action)
        : dim_(dim), action_(std::move(action)) {}

    std::size_t dim() const { return dim_; }

    void apply(const ComplexVector& v, ComplexVector& out) const {
        if (v.size() != dim_) throw std::invalid_argument("LinearOperator: dimension mismatch");
        out.resize(dim_);
        action_(v, out);
        ++count_;
    }

    ComplexVector apply(const ComplexVector& v) const {
        ComplexVector out;
        apply(v, out);
        return out;
    }

    std::int64_t matvecs() const { return count_; }
    void reset_matvecs() { count_ = 0; }

  private:
    std::size_t dim_;
    Action action_;
    mutable std::int64_t count_ = 0;
};

/// Dense test operator (row-major N x N matrix product).
inline LinearOperator dense_operator(std::vector<ComplexVector> matrix) {
    const std::size_t n = matrix.size();
    for (const auto& row : matrix)
        if (row.size() != n) throw std::invalid_argument("dense_operator: matrix not square");
    return LinearOperator(n, [m = std::move(matrix), n](const ComplexVector& v, ComplexVector& out) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += m[i][j] * v[j];
            out[i] = s;
        }
    });
}

// X = (-2i G - (a+b) I) / (b-a): maps eigenvalues i*lambda, lambda in [a,b],
// onto [-1,1]. One base matvec per application.
template <MatrixFreeOperator Op>
class ScaledOperator {
  public:
    ScaledOperator(const Op& base, SpectralSegment segment)
        : base_(&base), segment_(segment) {
        if (!(segment.b - segment.a > 0.0))
            throw std::invalid_argument("ScaledOperator: degenerate segment");
    }

    std::size_t dim() const { return base_->dim(); }

    void apply(const ComplexVector& v, ComplexVector& out) const {
        base_->apply(v, out);
        const double c = segment_.center();
        const double inv = 1.0 / segment_.half_width();
        const Complex mi(0.0, -1.0);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (mi * out[i] - c * v[i]) * inv;
    }

  private:
    const Op* base_;
    SpectralSegment segment_;
};

template <MatrixFreeOperator Op>
ComplexVector scaled_apply(const ScaledOperator<Op>& sop, const ComplexVector& v) {
    ComplexVector out;
    sop.apply(v, out);
    return out;
}

}  // namespace sgprop

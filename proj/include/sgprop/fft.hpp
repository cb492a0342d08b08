#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgprop/complex_vector.hpp"

namespace sgprop {

/// In-place iterative radix-2 FFT for power-of-two lengths, with cached
/// bit-reversal and twiddle tables. Forward transform is unnormalized;
/// inverse carries the 1/n factor.
class Fft {
  public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n < 2 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Fft: length must be a power of two >= 2");
        bitrev_.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            bitrev_[i] = r;
        }
        twiddle_.resize(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j)
            twiddle_[j] = std::polar(1.0, -2.0 * M_PI * static_cast<double>(j) / n);
    }

    std::size_t size() const { return n_; }

    void forward(ComplexVector& a) const { transform(a, false); }

    void inverse(ComplexVector& a) const {
        transform(a, true);
        const double s = 1.0 / static_cast<double>(n_);
        for (auto& v : a) v *= s;
    }

  private:
    void transform(ComplexVector& a, bool inv) const {
        if (a.size() != n_) throw std::invalid_argument("Fft: length mismatch");
        for (std::size_t i = 0; i < n_; ++i)
            if (bitrev_[i] > i) std::swap(a[i], a[bitrev_[i]]);
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t stride = n_ / len;
            for (std::size_t blk = 0; blk < n_; blk += len) {
                for (std::size_t j = 0; j < len / 2; ++j) {
                    Complex w = twiddle_[j * stride];
                    if (inv) w = std::conj(w);
                    const Complex u = a[blk + j];
                    const Complex t = w * a[blk + j + len / 2];
                    a[blk + j] = u + t;
                    a[blk + j + len / 2] = u - t;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<Complex> twiddle_;
};

}  // namespace sgprop

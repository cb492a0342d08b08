#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sgprop/complex_vector.hpp"
#include "sgprop/fft.hpp"
#include "sgprop/fm.hpp"
#include "sgprop/operators.hpp"
#include "sgprop/propagator.hpp"

namespace sgprop {

// Uniform periodic grid [x_min, x_max) with a power-of-two point count.
struct FourierGrid {
    std::size_t n;
    double x_min;
    double x_max;

    double length() const { return x_max - x_min; }
    double dx() const { return length() / static_cast<double>(n); }

    std::vector<double> points() const {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = x_min + dx() * static_cast<double>(i);
        return x;
    }

    // standard transform ordering; the n/2 entry is the negative Nyquist mode
    std::vector<double> wavenumbers() const {
        std::vector<double> k(n);
        const double dk = 2.0 * M_PI / length();
        for (std::size_t i = 0; i < n; ++i) {
            const auto s = static_cast<std::ptrdiff_t>(i);
            const auto half = static_cast<std::ptrdiff_t>(n / 2);
            k[i] = dk * static_cast<double>(s < half ? s : s - static_cast<std::ptrdiff_t>(n));
        }
        return k;
    }
};

inline FourierGrid make_fourier_grid(std::size_t n, double x_min, double x_max) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("make_fourier_grid: n must be a power of two");
    if (!(x_max > x_min)) throw std::invalid_argument("make_fourier_grid: empty domain");
    return FourierGrid{n, x_min, x_max};
}

/// Spectral derivative: transform, multiply by (ik)^order, transform back.
/// The Nyquist mode is zeroed for order 1 and uses -k^2 for order 2.
inline ComplexVector fourier_derivative(const FourierGrid& grid, const ComplexVector& u,
                                        int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("fourier_derivative: order must be 1 or 2");
    if (u.size() != grid.n) throw std::invalid_argument("fourier_derivative: length mismatch");
    Fft fft(grid.n);
    ComplexVector v = u;
    fft.forward(v);
    const auto k = grid.wavenumbers();
    for (std::size_t i = 0; i < grid.n; ++i) {
        if (order == 1)
            v[i] *= (i == grid.n / 2) ? Complex(0.0) : Complex(0.0, k[i]);
        else
            v[i] *= -k[i] * k[i];
    }
    fft.inverse(v);
    return v;
}

/// Enclosure for the first-derivative (advection) operator: eigenvalues ik
/// with |k| <= pi/dx, widened by a 5% safety margin.
inline SpectralSegment fourier_spectral_bounds_advection(const FourierGrid& grid) {
    const double kmax = M_PI / grid.dx();
    return SpectralSegment(-1.05 * kmax, 1.05 * kmax);
}

/// Enclosure for G = -iH, H = -(1/2) d^2/dr^2 + V with V within
/// [v_min, v_max] over the run: i[-(K_max + v_max), -v_min] plus a 5% margin.
inline SpectralSegment fourier_spectral_bounds_schrodinger(const FourierGrid& grid,
                                                           double v_min, double v_max) {
    const double kmax = M_PI / grid.dx();
    const double K = 0.5 * kmax * kmax;
    return SpectralSegment(-1.05 * (K + v_max), 1.05 * std::max(0.0, -v_min));
}

// l2 norm with the grid-spacing weight (the wave-function norm convention)
inline double weighted_norm(const FourierGrid& grid, const ComplexVector& v) {
    return std::sqrt(grid.dx()) * norm(v);
}

// ---------------------------------------------------------------------------
// Example problem 1: u_t = u_x + s(x,t) on [0, 2pi) with a manufactured
// oscillatory solution u = sin(t) sin(6x) + sin(2t) cos(10x).
// ---------------------------------------------------------------------------
class AdvectionProblem {
  public:
    explicit AdvectionProblem(std::size_t n = 32)
        : grid_(make_fourier_grid(n, 0.0, 2.0 * M_PI)),
          fft_(n),
          x_(grid_.points()),
          ik_(n),
          op_(n, [this](const ComplexVector& v, ComplexVector& out) {
              out = v;
              fft_.forward(out);
              for (std::size_t i = 0; i < out.size(); ++i) out[i] *= ik_[i];
              fft_.inverse(out);
          }) {
        const auto k = grid_.wavenumbers();
        for (std::size_t i = 0; i < grid_.n; ++i)
            ik_[i] = (i == grid_.n / 2) ? Complex(0.0) : Complex(0.0, k[i]);
    }
    AdvectionProblem(const AdvectionProblem&) = delete;
    AdvectionProblem& operator=(const AdvectionProblem&) = delete;

    const FourierGrid& grid() const { return grid_; }
    std::size_t dim() const { return grid_.n; }
    const LinearOperator& derivative_operator() const { return op_; }
    SpectralSegment segment() const { return fourier_spectral_bounds_advection(grid_); }

    ComplexVector initial_state() const { return ComplexVector(grid_.n, 0.0); }

    ComplexVector source(double t) const {
        ComplexVector s(grid_.n);
        for (std::size_t i = 0; i < grid_.n; ++i)
            s[i] = std::sin(6 * x_[i]) * std::cos(t) + 2.0 * std::cos(10 * x_[i]) * std::cos(2 * t) -
                   6.0 * std::cos(6 * x_[i]) * std::sin(t) +
                   10.0 * std::sin(10 * x_[i]) * std::sin(2 * t);
        return s;
    }

    ComplexVector exact_solution(double t) const {
        ComplexVector u(grid_.n);
        for (std::size_t i = 0; i < grid_.n; ++i)
            u[i] = std::sin(t) * std::sin(6 * x_[i]) + std::sin(2 * t) * std::cos(10 * x_[i]);
        return u;
    }

    // du = G u + s(t); one counted application of G
    void rhs(double t, const ComplexVector& u, ComplexVector& du) const {
        op_.apply(u, du);
        axpy(1.0, source(t), du);
    }

    std::int64_t matvecs() const { return op_.matvecs(); }
    void reset_matvecs() { op_.reset_matvecs(); }

  private:
    FourierGrid grid_;
    Fft fft_;
    std::vector<double> x_;
    ComplexVector ik_;
    LinearOperator op_;
};

// ---------------------------------------------------------------------------
// Example problem 2: driven harmonic oscillator,
// H(r,t) = -(1/2) d^2/dr^2 + r^2/2 + r sin^2(pi t / T) cos(t), psi(r,0) = e^{-r^2}.
// ---------------------------------------------------------------------------
class OscillatorProblem {
  public:
    OscillatorProblem(std::size_t n = 128, double r_max = 10.0, double T = 15.0,
                      double drive = 1.0)
        : grid_(make_fourier_grid(n, -r_max, r_max)),
          fft_(n),
          r_(grid_.points()),
          T_(T),
          drive_(drive),
          kin_(n),
          v_trap_(n),
          v_frozen_(n, 0.0) {
        const auto k = grid_.wavenumbers();
        for (std::size_t i = 0; i < n; ++i) {
            kin_[i] = 0.5 * k[i] * k[i];
            v_trap_[i] = 0.5 * r_[i] * r_[i];
        }
        freeze_time(0.0);
    }
    OscillatorProblem(const OscillatorProblem&) = delete;
    OscillatorProblem& operator=(const OscillatorProblem&) = delete;

    const FourierGrid& grid() const { return grid_; }
    std::size_t dim() const { return grid_.n; }
    double final_time() const { return T_; }

    SpectralSegment segment() const {
        const double r_max = std::max(std::abs(grid_.x_min), std::abs(grid_.x_max));
        const double v_max = 0.5 * r_max * r_max + std::abs(drive_) * r_max;
        const double v_min = -std::abs(drive_) * r_max;
        return fourier_spectral_bounds_schrodinger(grid_, v_min, v_max);
    }

    ComplexVector initial_state() const {
        ComplexVector psi(grid_.n);
        for (std::size_t i = 0; i < grid_.n; ++i) psi[i] = std::exp(-r_[i] * r_[i]);
        return psi;
    }

    double field(double t) const {
        const double s = std::sin(M_PI * t / T_);
        return drive_ * s * s * std::cos(t);
    }

    void freeze_time(double t_mid) {
        const double f = field(t_mid);
        for (std::size_t i = 0; i < grid_.n; ++i) v_frozen_[i] = v_trap_[i] + r_[i] * f;
    }

    // w = G_n v = -i H(t_mid) v; one counted application
    void apply_frozen(const ComplexVector& v, ComplexVector& out) const {
        apply_hamiltonian(v_frozen_, v, out);
    }

    // s_n(t) = (G(t) - G_n) u: a diagonal potential difference, no matvec
    ComplexVector effective_source(double t, const ComplexVector& u) const {
        const double df = field(t);
        ComplexVector s(grid_.n);
        const Complex mi(0.0, -1.0);
        for (std::size_t i = 0; i < grid_.n; ++i)
            s[i] = mi * (v_trap_[i] + r_[i] * df - v_frozen_[i]) * u[i];
        return s;
    }

    // du = -i H(t) u for the reference integrators; one counted application
    void rhs(double t, const ComplexVector& u, ComplexVector& du) const {
        const double f = field(t);
        scratch_pot_.resize(grid_.n);
        for (std::size_t i = 0; i < grid_.n; ++i) scratch_pot_[i] = v_trap_[i] + r_[i] * f;
        apply_hamiltonian(scratch_pot_, u, du);
    }

    std::int64_t matvecs() const { return count_; }
    void reset_matvecs() { count_ = 0; }

  private:
    void apply_hamiltonian(const std::vector<double>& pot, const ComplexVector& v,
                           ComplexVector& out) const {
        if (v.size() != grid_.n) throw std::invalid_argument("OscillatorProblem: dim mismatch");
        scratch_.assign(v.begin(), v.end());
        fft_.forward(scratch_);
        for (std::size_t i = 0; i < grid_.n; ++i) scratch_[i] *= kin_[i];
        fft_.inverse(scratch_);
        out.resize(grid_.n);
        const Complex mi(0.0, -1.0);
        for (std::size_t i = 0; i < grid_.n; ++i) out[i] = mi * (scratch_[i] + pot[i] * v[i]);
        ++count_;
    }

    FourierGrid grid_;
    Fft fft_;
    std::vector<double> r_;
    double T_;
    double drive_;
    std::vector<double> kin_;
    std::vector<double> v_trap_;
    std::vector<double> v_frozen_;
    mutable ComplexVector scratch_;
    mutable std::vector<double> scratch_pot_;
    mutable std::int64_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Example problem 3: Gross-Pitaevskii equation,
// H(r,psi) = -(1/2) d^2/dr^2 + r^2/2 + |psi|^2, psi_0 = e^{i 8 r} v_0.
// ---------------------------------------------------------------------------

struct GroundStateResult {
    ComplexVector v;           // unit weighted-norm, real, non-negative phase
    double chemical_potential = 0.0;
    double residual = 0.0;     // ||H(v)v - mu v|| / ||v||
    std::int64_t iterations = 0;
};

/// Self-consistent GPE ground state by imaginary-time propagation with
/// renormalization after each step, iterated until the chemical-potential
/// residual drops below tol. The density is frozen within each step, so the
/// fixed point is an exact eigenpair of its own nonlinear Hamiltonian.
inline GroundStateResult gpe_ground_state(const FourierGrid& grid, double tol,
                                          double interaction = 1.0) {
    if (!(tol > 0.0)) throw std::invalid_argument("gpe_ground_state: tol must be > 0");
    Fft fft(grid.n);
    const auto r = grid.points();
    const auto kw = grid.wavenumbers();
    std::vector<double> kin(grid.n), trap(grid.n);
    double kin_max = 0.0, trap_max = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        kin[i] = 0.5 * kw[i] * kw[i];
        trap[i] = 0.5 * r[i] * r[i];
        kin_max = std::max(kin_max, kin[i]);
        trap_max = std::max(trap_max, trap[i]);
    }
    ComplexVector scratch(grid.n);
    auto apply_h = [&](const std::vector<double>& dens, const ComplexVector& v,
                       ComplexVector& out) {
        scratch = v;
        fft.forward(scratch);
        for (std::size_t i = 0; i < grid.n; ++i) scratch[i] *= kin[i];
        fft.inverse(scratch);
        out.resize(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i)
            out[i] = scratch[i] + (trap[i] + interaction * dens[i]) * v[i];
    };

    ComplexVector v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = std::exp(-0.5 * r[i] * r[i]);
    auto renorm = [&](ComplexVector& w) { scale(1.0 / weighted_norm(grid, w), w); };
    renorm(v);

    const double dtau = std::min(0.01, 2.0 / (kin_max + trap_max + 1.0));
    std::vector<double> dens(grid.n);
    ComplexVector k1(grid.n), k2(grid.n), k3(grid.n), k4(grid.n), tmp(grid.n);
    GroundStateResult out;
    const std::int64_t max_iters = 500000;
    for (out.iterations = 1; out.iterations <= max_iters; ++out.iterations) {
        for (std::size_t i = 0; i < grid.n; ++i) dens[i] = std::norm(v[i]);
        apply_h(dens, v, k1);
        for (std::size_t i = 0; i < grid.n; ++i) tmp[i] = v[i] - 0.5 * dtau * k1[i];
        apply_h(dens, tmp, k2);
        for (std::size_t i = 0; i < grid.n; ++i) tmp[i] = v[i] - 0.5 * dtau * k2[i];
        apply_h(dens, tmp, k3);
        for (std::size_t i = 0; i < grid.n; ++i) tmp[i] = v[i] - dtau * k3[i];
        apply_h(dens, tmp, k4);
        for (std::size_t i = 0; i < grid.n; ++i)
            v[i] -= (dtau / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        renorm(v);
        if (out.iterations % 50 == 0) {
            for (std::size_t i = 0; i < grid.n; ++i) dens[i] = std::norm(v[i]);
            apply_h(dens, v, k1);
            const double mu = std::real(dot(v, k1)) / std::real(dot(v, v));
            for (std::size_t i = 0; i < grid.n; ++i) tmp[i] = k1[i] - mu * v[i];
            const double res = norm(tmp) / norm(v);
            if (res < tol) {
                out.chemical_potential = mu;
                out.residual = res;
                // fix the global phase: real and non-negative at the peak
                std::size_t peak = 0;
                for (std::size_t i = 1; i < grid.n; ++i)
                    if (std::abs(v[i]) > std::abs(v[peak])) peak = i;
                const double sign = v[peak].real() < 0.0 ? -1.0 : 1.0;
                for (std::size_t i = 0; i < grid.n; ++i) v[i] = sign * v[i].real();
                renorm(v);
                out.v = std::move(v);
                return out;
            }
        }
    }
    throw NoConvergence("gpe_ground_state: no convergence after " +
                        std::to_string(max_iters) + " iterations");
}

class GpeProblem {
  public:
    GpeProblem(std::size_t n = 128, double r_max = 8.0 * std::sqrt(M_PI), double T = 10.0,
               double ground_state_tol = 1e-11)
        : grid_(make_fourier_grid(n, -r_max, r_max)),
          fft_(n),
          r_(grid_.points()),
          T_(T),
          kin_(n),
          v_trap_(n),
          dens_frozen_(n, 0.0) {
        const auto k = grid_.wavenumbers();
        for (std::size_t i = 0; i < n; ++i) {
            kin_[i] = 0.5 * k[i] * k[i];
            v_trap_[i] = 0.5 * r_[i] * r_[i];
        }
        ground_ = gpe_ground_state(grid_, ground_state_tol);
        double rho_max = 0.0;
        for (const auto& c : ground_.v) rho_max = std::max(rho_max, std::norm(c));
        rho_bound_ = rho_max;
    }
    GpeProblem(const GpeProblem&) = delete;
    GpeProblem& operator=(const GpeProblem&) = delete;

    const FourierGrid& grid() const { return grid_; }
    std::size_t dim() const { return grid_.n; }
    double final_time() const { return T_; }
    const GroundStateResult& ground_state() const { return ground_; }

    SpectralSegment segment() const {
        const double r_max = std::max(std::abs(grid_.x_min), std::abs(grid_.x_max));
        return fourier_spectral_bounds_schrodinger(grid_, 0.0, 0.5 * r_max * r_max + rho_bound_);
    }

    // boosted ground state e^{i 8 r} v_0
    ComplexVector initial_state() const {
        ComplexVector psi(grid_.n);
        for (std::size_t i = 0; i < grid_.n; ++i)
            psi[i] = std::polar(1.0, 8.0 * r_[i]) * ground_.v[i];
        return psi;
    }

    void freeze_state(const ComplexVector& u_mid) {
        if (u_mid.size() != grid_.n) throw std::invalid_argument("GpeProblem: dim mismatch");
        for (std::size_t i = 0; i < grid_.n; ++i) dens_frozen_[i] = std::norm(u_mid[i]);
    }

    // w = G_n v = -i H(psi_mid) v; one counted application
    void apply_frozen(const ComplexVector& v, ComplexVector& out) const {
        apply_hamiltonian(dens_frozen_, v, out);
    }

    // s_n = (G(u) - G_n) u = -i (|u|^2 - |psi_mid|^2) u, no matvec
    ComplexVector effective_source(double /*t*/, const ComplexVector& u) const {
        ComplexVector s(grid_.n);
        const Complex mi(0.0, -1.0);
        for (std::size_t i = 0; i < grid_.n; ++i)
            s[i] = mi * (std::norm(u[i]) - dens_frozen_[i]) * u[i];
        return s;
    }

    // du = -i H(u) u; one counted application
    void rhs(double /*t*/, const ComplexVector& u, ComplexVector& du) const {
        scratch_dens_.resize(grid_.n);
        for (std::size_t i = 0; i < grid_.n; ++i) scratch_dens_[i] = std::norm(u[i]);
        apply_hamiltonian(scratch_dens_, u, du);
    }

    std::int64_t matvecs() const { return count_; }
    void reset_matvecs() { count_ = 0; }

  private:
    void apply_hamiltonian(const std::vector<double>& dens, const ComplexVector& v,
                           ComplexVector& out) const {
        if (v.size() != grid_.n) throw std::invalid_argument("GpeProblem: dim mismatch");
        scratch_.assign(v.begin(), v.end());
        fft_.forward(scratch_);
        for (std::size_t i = 0; i < grid_.n; ++i) scratch_[i] *= kin_[i];
        fft_.inverse(scratch_);
        out.resize(grid_.n);
        const Complex mi(0.0, -1.0);
        for (std::size_t i = 0; i < grid_.n; ++i)
            out[i] = mi * (scratch_[i] + (v_trap_[i] + dens[i]) * v[i]);
        ++count_;
    }

    FourierGrid grid_;
    Fft fft_;
    std::vector<double> r_;
    double T_;
    std::vector<double> kin_;
    std::vector<double> v_trap_;
    std::vector<double> dens_frozen_;
    GroundStateResult ground_;
    double rho_bound_ = 0.0;
    mutable ComplexVector scratch_;
    mutable std::vector<double> scratch_dens_;
    mutable std::int64_t count_ = 0;
};

}  // namespace sgprop

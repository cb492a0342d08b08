#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "sgprop/complex_vector.hpp"
#include "sgprop/propagator.hpp"

namespace sgprop {

class StepUnderflow : public std::runtime_error {
  public:
    explicit StepUnderflow(const std::string& what) : std::runtime_error(what) {}
};

struct RK4Config {
    int steps = 1;
};

struct RK45Config {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double initial_step = 0.0;  // 0: T/100
};

struct RkResult {
    ComplexVector u;
    std::int64_t rhs_evals = 0;
    int accepted = 0;
    int rejected = 0;
};

/// Classical fixed-step RK4; 4 rhs evaluations (matvecs) per step.
template <class Rhs>
RkResult rk4_propagate(Rhs&& rhs, const ComplexVector& u0, double T, const RK4Config& cfg) {
    if (cfg.steps < 1) throw std::invalid_argument("rk4_propagate: steps must be >= 1");
    const double h = T / cfg.steps;
    const std::size_t n = u0.size();
    RkResult out{u0, 0, 0, 0};
    ComplexVector k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0.0;
    for (int s = 0; s < cfg.steps; ++s) {
        rhs(t, out.u, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = out.u[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = out.u[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = out.u[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            out.u[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        out.rhs_evals += 4;
        ++out.accepted;
        t += h;
        if (!all_finite(out.u)) throw NonFinite("rk4_propagate: blow-up at t = " + std::to_string(t));
    }
    return out;
}

/// Dormand-Prince 5(4) embedded pair with PI step control and first-same-as-
/// last reuse: 6 fresh rhs evaluations per attempted step, accepted or not.
template <class Rhs>
RkResult rk45_propagate(Rhs&& rhs, const ComplexVector& u0, double T, const RK45Config& cfg) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0))
        throw std::invalid_argument("rk45_propagate: tolerances must be > 0");
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b* (5th-order weights minus the embedded 4th-order weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = u0.size();
    RkResult out{u0, 0, 0, 0};
    ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), unew(n);
    double t = 0.0;
    double h = cfg.initial_step > 0.0 ? cfg.initial_step : T / 100.0;
    rhs(t, out.u, k1);
    ++out.rhs_evals;
    double err_prev = 1.0;
    while (t < T) {
        h = std::min(h, T - t);
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw StepUnderflow("rk45_propagate: step size underflow at t = " + std::to_string(t));
        for (std::size_t i = 0; i < n; ++i) tmp[i] = out.u[i] + h * a21 * k1[i];
        rhs(t + h / 5.0, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = out.u[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + 3.0 * h / 10.0, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = out.u[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + 4.0 * h / 5.0, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = out.u[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + 8.0 * h / 9.0, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = out.u[i] +
                     h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            unew[i] = out.u[i] +
                      h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, unew, k7);
        out.rhs_evals += 6;

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex de = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sc =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(out.u[i]), std::abs(unew[i]));
            err += std::norm(de) / (sc * sc);
        }
        err = std::sqrt(err / n);
        if (!std::isfinite(err)) throw NonFinite("rk45_propagate: non-finite error estimate");

        if (err <= 1.0) {
            t += h;
            out.u.swap(unew);
            k1.swap(k7);  // FSAL
            ++out.accepted;
            const double grow =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(grow, 0.2, 5.0);
            err_prev = std::max(err, 1e-10);
        } else {
            ++out.rejected;
            h *= std::clamp(0.9 * std::pow(err, -1.0 / 5.0), 0.2, 1.0);
        }
    }
    return out;
}

}  // namespace sgprop

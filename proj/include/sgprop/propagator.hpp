#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sgprop/chebyshev.hpp"
#include "sgprop/complex_vector.hpp"
#include "sgprop/fm.hpp"
#include "sgprop/operators.hpp"

namespace sgprop {

class NoConvergence : public std::runtime_error {
  public:
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

class NonFinite : public std::runtime_error {
  public:
    explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

struct PropagatorConfig {
    int m = 9;
    int k = 9;
    double eps = 1e-12;            // first-step convergence tolerance (unweighted l2)
    int max_first_step_iters = 50;
    double tail_tol = 1.0;         // f_m expansion tail check at offset 2*dt; >= 1 disables
    int oversampling = 4;
};

// v_0..v_m with v_0 = u0 and v_j = G v_{j-1} + s_{j-1}
struct RecurrenceVectors {
    std::vector<ComplexVector> v;

    int order() const { return static_cast<int>(v.size()) - 1; }
};

/// Exactly src.order() matvecs.
template <MatrixFreeOperator Op>
RecurrenceVectors recurrence_vectors(const Op& G, const ComplexVector& u0,
                                     const TaylorSourceSet& src) {
    if (u0.size() != G.dim()) throw std::invalid_argument("recurrence_vectors: dim mismatch");
    const int m = src.order();
    RecurrenceVectors rec;
    rec.v.reserve(m + 1);
    rec.v.push_back(u0);
    for (int j = 1; j <= m; ++j) {
        if (src.s[j - 1].size() != u0.size())
            throw std::invalid_argument("recurrence_vectors: source dim mismatch");
        ComplexVector next;
        G.apply(rec.v.back(), next);
        axpy(1.0, src.s[j - 1], next);
        rec.v.push_back(std::move(next));
    }
    return rec;
}

/// Holds the recurrence vectors and the Chebyshev operator vectors
/// T_n(X) v_m, n < k, built once with the three-term recurrence (k-1 matvecs).
/// Evaluating the solution at any number of offsets costs no further matvecs.
template <MatrixFreeOperator Op>
class SlabEvaluator {
  public:
    SlabEvaluator(const Op& G, const SpectralSegment& segment, RecurrenceVectors rec, int k)
        : rec_(std::move(rec)) {
        if (k < 1) throw std::invalid_argument("SlabEvaluator: k must be >= 1");
        ScaledOperator<Op> X(G, segment);
        w_.reserve(k);
        w_.push_back(rec_.v.back());
        if (k > 1) {
            ComplexVector t;
            X.apply(w_[0], t);
            w_.push_back(std::move(t));
            for (int n = 2; n < k; ++n) {
                ComplexVector next;
                X.apply(w_[n - 1], next);
                scale(2.0, next);
                axpy(-1.0, w_[n - 2], next);
                w_.push_back(std::move(next));
            }
        }
    }

    // u(tau) = sum_{j<m} tau^j/j! v_j + sum_{n<k} c_n(tau) T_n(X) v_m
    ComplexVector evaluate(double tau, const FmChebCoeffs& coeffs) const {
        const int m = rec_.order();
        ComplexVector out(rec_.v[0].size(), 0.0);
        double f = 1.0;
        for (int j = 0; j < m; ++j) {
            if (j > 0) f *= tau / j;
            axpy(f, rec_.v[j], out);
        }
        for (std::size_t n = 0; n < w_.size(); ++n) axpy(coeffs.c[n], w_[n], out);
        return out;
    }

    const RecurrenceVectors& recurrence() const { return rec_; }
    int k() const { return static_cast<int>(w_.size()); }

  private:
    RecurrenceVectors rec_;
    std::vector<ComplexVector> w_;
};

/// Lemma evaluation at a list of local offsets tau >= 0 (up to one slab of
/// extrapolation). Costs exactly k-1 matvecs regardless of the number of
/// output times; the scalar f_m coefficients are generated per output time.
template <MatrixFreeOperator Op>
std::vector<ComplexVector> evaluate_solution(const Op& G, RecurrenceVectors rec,
                                             const SpectralSegment& segment,
                                             const std::vector<double>& taus, int k,
                                             int oversampling = 4, double tail_tol = 1.0) {
    for (double tau : taus)
        if (!(tau >= 0.0)) throw std::invalid_argument("evaluate_solution: tau must be >= 0");
    const int m = rec.order();
    SlabEvaluator<Op> eval(G, segment, std::move(rec), k);
    std::vector<ComplexVector> out;
    out.reserve(taus.size());
    for (double tau : taus)
        out.push_back(eval.evaluate(tau, fm_cheb_coeffs(segment, tau, m, k, oversampling, tail_tol)));
    return out;
}

/// s_n(t) = s(t) + (G(t) - G_n) u in its generic form: two counted operator
/// applications. The models fuse the difference into a diagonal update instead.
template <MatrixFreeOperator OpA, MatrixFreeOperator OpB>
ComplexVector effective_source(const OpA& G_at, const OpB& G_frozen, const ComplexVector& u,
                               const ComplexVector& s_external) {
    ComplexVector out, gn;
    G_at.apply(u, out);
    G_frozen.apply(u, gn);
    axpy(-1.0, gn, out);
    axpy(1.0, s_external, out);
    return out;
}

struct ConstGResult {
    ComplexVector u;
    std::int64_t matvecs = 0;
};

/// One-shot constant-G solve over [0,T]: sample the source at the m slab
/// nodes, cosine transform, Taylor-like transform, recurrence, Lemma
/// evaluation at tau = T. Exactly m + k - 1 matvecs.
template <MatrixFreeOperator Op, class SourceFn>
ConstGResult solve_const_G(const Op& G, const ComplexVector& u0, SourceFn&& s_of_t, double T,
                           int m, int k, const SpectralSegment& segment,
                           int oversampling = 4, double tail_tol = 1.0) {
    const TimeSlab slab = make_time_slab(0.0, T, m);
    std::vector<ComplexVector> samples;
    samples.reserve(m);
    for (double t : slab.nodes) samples.push_back(s_of_t(t));
    TaylorSourceSet src = cheb_to_taylor(samples_to_cheb(samples), T);
    RecurrenceVectors rec = recurrence_vectors(G, u0, src);
    auto u = evaluate_solution(G, std::move(rec), segment, {T}, k, oversampling, tail_tol);
    return ConstGResult{std::move(u.front()), static_cast<std::int64_t>(m + k - 1)};
}

// Node values approximating u at the nodes of one slab; node_values[0] is the
// accepted solution at slab.t_start.
struct SlabState {
    TimeSlab slab;
    std::vector<ComplexVector> node_values;
};

template <class P>
concept TimeFrozenProblem = requires(P& p, double t) { p.freeze_time(t); };

template <class P>
concept StateFrozenProblem = requires(P& p, const ComplexVector& u) { p.freeze_state(u); };

// What propagate() needs from a model: a frozen-operator action with matvec
// accounting, an effective source that is free of operator applications, a
// spectral enclosure, and a freeze rule (by time or by state).
template <class P>
concept PropagatorProblem = requires(P& p, const ComplexVector& v, ComplexVector& w, double t) {
    { p.dim() } -> std::convertible_to<std::size_t>;
    { p.segment() } -> std::convertible_to<SpectralSegment>;
    p.apply_frozen(v, w);
    { p.effective_source(t, v) } -> std::convertible_to<ComplexVector>;
    { p.matvecs() } -> std::convertible_to<std::int64_t>;
} && (TimeFrozenProblem<P> || StateFrozenProblem<P>);

namespace detail {

template <class P>
struct FrozenOpRef {
    P* p;
    std::size_t dim() const { return p->dim(); }
    void apply(const ComplexVector& v, ComplexVector& out) const { p->apply_frozen(v, out); }
};

template <PropagatorProblem P>
void freeze_at_midpoint(P& prob, const TimeSlab& slab,
                        const std::vector<ComplexVector>& node_values) {
    const double t_mid = slab.t_start + 0.5 * slab.dt;
    if constexpr (StateFrozenProblem<P>)
        prob.freeze_state(barycentric_eval(slab, node_values, t_mid));
    else
        prob.freeze_time(t_mid);
}

// One sweep over a slab: effective source at the nodes from the current node
// values, transforms, recurrence from the slab-start state. m + k - 1 matvecs.
template <PropagatorProblem P>
SlabEvaluator<FrozenOpRef<P>> slab_sweep(P& prob, const TimeSlab& slab,
                                         const std::vector<ComplexVector>& node_values,
                                         const PropagatorConfig& cfg) {
    std::vector<ComplexVector> shat;
    shat.reserve(cfg.m);
    for (int j = 0; j < cfg.m; ++j)
        shat.push_back(prob.effective_source(slab.nodes[j], node_values[j]));
    TaylorSourceSet src = cheb_to_taylor(samples_to_cheb(shat), slab.dt);
    FrozenOpRef<P> G{&prob};
    RecurrenceVectors rec = recurrence_vectors(G, node_values[0], src);
    return SlabEvaluator<FrozenOpRef<P>>(G, prob.segment(), std::move(rec), cfg.k);
}

}  // namespace detail

struct FirstStepResult {
    SlabState state;
    int sweeps = 0;
};

namespace detail {

// First-slab iteration that also hands back the converged sweep's evaluator so
// the caller can produce the next slab's predictions without another sweep.
template <PropagatorProblem P>
std::pair<FirstStepResult, SlabEvaluator<FrozenOpRef<P>>> first_step_impl(
    P& prob, const ComplexVector& u0, double dt, const PropagatorConfig& cfg) {
    const TimeSlab slab = make_time_slab(0.0, dt, cfg.m);
    std::vector<FmChebCoeffs> coeffs;
    coeffs.reserve(cfg.m);
    for (double t : slab.nodes)
        coeffs.push_back(fm_cheb_coeffs(prob.segment(), t, cfg.m, cfg.k, cfg.oversampling, 1.0));

    FirstStepResult out{SlabState{slab, std::vector<ComplexVector>(cfg.m, u0)}, 0};
    while (true) {
        if (++out.sweeps > cfg.max_first_step_iters)
            throw NoConvergence("first step did not converge in " +
                                std::to_string(cfg.max_first_step_iters) + " sweeps");
        freeze_at_midpoint(prob, slab, out.state.node_values);
        auto eval = slab_sweep(prob, slab, out.state.node_values, cfg);
        std::vector<ComplexVector> next(cfg.m);
        for (int j = 0; j < cfg.m; ++j) next[j] = eval.evaluate(slab.nodes[j], coeffs[j]);
        const double residual = distance(next[cfg.m - 1], out.state.node_values[cfg.m - 1]);
        out.state.node_values = std::move(next);
        if (!(residual >= 0.0) || !all_finite(out.state.node_values[cfg.m - 1]))
            throw NonFinite("first step produced non-finite node values");
        if (residual <= cfg.eps) return {std::move(out), std::move(eval)};
    }
}

}  // namespace detail

/// Fixed-point iteration for the first slab [0, dt], starting from u_j = u0 at
/// all m nodes. Each sweep rebuilds the effective source from the current node
/// values and re-evaluates them via the Lemma (m + k - 1 matvecs per sweep);
/// stops when the slab-end update drops below cfg.eps.
template <PropagatorProblem P>
FirstStepResult first_step(P& prob, const ComplexVector& u0, double dt,
                           const PropagatorConfig& cfg) {
    return detail::first_step_impl(prob, u0, dt, cfg).first;
}

struct PropagationResult {
    std::vector<ComplexVector> trajectory;  // u at step boundaries, size steps + 1
    std::int64_t matvecs = 0;
    int first_step_sweeps = 0;

    const ComplexVector& final_state() const { return trajectory.back(); }
};

/// The main predictor-corrector loop. Per slab: freeze G_n at the midpoint,
/// build the effective source from the predicted node values, run the
/// recurrence, and Lemma-evaluate at the next slab's nodes (offsets in
/// [dt, 2dt]). The first of those offsets corrects the current slab's end
/// value and becomes the accepted trajectory point; the rest are the next
/// slab's predictions. m + k - 1 matvecs per step after the first.
template <PropagatorProblem P>
PropagationResult propagate(P& prob, const ComplexVector& u0, double T, int steps,
                            const PropagatorConfig& cfg) {
    if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");
    if (cfg.m < 2 || cfg.k < 1 || !(cfg.eps > 0.0))
        throw std::invalid_argument("propagate: invalid config");
    if (u0.size() != prob.dim()) throw std::invalid_argument("propagate: dim mismatch");
    const double dt = T / steps;
    const std::int64_t matvecs0 = prob.matvecs();

    // offsets of the next slab's nodes relative to the current slab start
    const TimeSlab unit = make_time_slab(0.0, dt, cfg.m);
    std::vector<double> taus_next(cfg.m);
    for (int j = 0; j < cfg.m; ++j) taus_next[j] = dt + unit.nodes[j];
    std::vector<FmChebCoeffs> coeffs_next;
    coeffs_next.reserve(cfg.m);
    for (int j = 0; j < cfg.m; ++j) {
        // the extrapolated end (2*dt) is the worst case for the expansion tail
        const double tol = (j == cfg.m - 1) ? cfg.tail_tol : 1.0;
        coeffs_next.push_back(
            fm_cheb_coeffs(prob.segment(), taus_next[j], cfg.m, cfg.k, cfg.oversampling, tol));
    }

    PropagationResult out;
    out.trajectory.reserve(steps + 1);
    out.trajectory.push_back(u0);

    // iterate the first slab, then predict the second slab's nodes from the
    // converged sweep's vectors (no additional matvecs)
    auto [fs, eval] = detail::first_step_impl(prob, u0, dt, cfg);
    out.first_step_sweeps = fs.sweeps;
    std::vector<ComplexVector> U(cfg.m);
    for (int j = 0; j < cfg.m; ++j) U[j] = eval.evaluate(taus_next[j], coeffs_next[j]);
    out.trajectory.push_back(U[0]);

    for (int n = 1; n < steps; ++n) {
        if (!all_finite(U[0]))
            throw NonFinite("propagate: non-finite state at step " + std::to_string(n));
        const TimeSlab slab = make_time_slab(n * dt, dt, cfg.m);
        detail::freeze_at_midpoint(prob, slab, U);
        auto ev = detail::slab_sweep(prob, slab, U, cfg);
        for (int j = 0; j < cfg.m; ++j) U[j] = ev.evaluate(taus_next[j], coeffs_next[j]);
        out.trajectory.push_back(U[0]);
    }
    if (!all_finite(out.trajectory.back()))
        throw NonFinite("propagate: non-finite final state");
    out.matvecs = prob.matvecs() - matvecs0;
    return out;
}

}  // namespace sgprop

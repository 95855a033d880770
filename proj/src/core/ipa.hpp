#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "model.hpp"
#include "types.hpp"

namespace ias {

struct PathSample;  // simulate.hpp
struct IntegrationPoint;

// d/dt of the state-derivative matrix along an interevent interval:
//   d/dt x1' = J11 x1' + J13 x3'
//   d/dt x2' = J21 x1' + J22 x2' + J23 x3'
//   d/dt x3' = -x3' / sigma
// The thresholds never appear in the drifts, so there is no df/dtheta
// forcing inside intervals; clock derivatives are constant.
std::array<std::array<double, 2>, 3> variational_rhs(const DriftJacobian& j, double sigma,
                                                     const IpaState& ipa);

// Interval propagator: advances the IPA state over [t, t+h] within one mode
// and one noise cell, co-integrated on the same RK4 stages as the state
// (Jacobian evaluated at stage states). Thin wrapper over integrate_step.
IpaState propagate_derivatives(const IntegrationPoint& pt, const ModelParams& p,
                               const NoiseValues& zeta, double h);

// Event-time derivative (both components) at an event of kind e_p:
//   tau'_i = (1[p == i] - x1'(tau-) - x2'(tau-)) / (f^{x1}(tau-) + f^{x2}(tau-)).
// Throws TangentialCrossing when |denominator| < kTransversalityFloor.
std::array<double, 2> event_time_derivative(EventKind kind, const IpaState& ipa_pre,
                                            double guard_slope);

// Drift mismatch Delta_f^1, Delta_f^2 across an event, evaluated from the
// mode-explicit displays. h_pre is the closed-form androgen value of the
// ending interval at tau-, x3_at_tau the state value; by continuity these
// coincide and the mismatch vanishes, but the algebraic form is kept so the
// displays stay checkable against a direct drift difference.
std::array<double, 2> delta_f_display(EventKind kind, const ModelParams& p, double x1,
                                      double x2, double h_pre, double x3_at_tau);

// Mode-explicit cell drifts (f^{x1}, f^{x2}) with the androgen level given
// as the closed-form value h: the rewritten dynamics used throughout the
// IPA derivation. Agrees with `drift` when h = x3.
std::array<double, 2> drift_mode_explicit(const ModelParams& p, double x1, double x2,
                                          double h, const NoiseValues& zeta);

// Boundary condition at an event: x1', x2' pick up Delta_f * tau' (zero
// here), x3' jumps by -(x30/sigma) tau' at e1 and +(x30/sigma) tau' at e2,
// and the clock derivatives follow the reset rules (z1' <- 0 at e1,
// z2' <- -tau' at e1; mirrored at e2).
IpaState apply_event_jump(EventKind kind, const IpaState& ipa_pre,
                          const std::array<double, 2>& tau_prime, const ModelParams& p,
                          double x1, double x2, double h_pre, double x3_at_tau);

// Interval factors for the closed-form reconstruction of the variational
// solution from dense samples and quadrature alone. `a` and `b1` are the
// paper-style exponent integrals (A/B1 on-treatment, C/D1 off-treatment);
// `b2_per_x1` the conversion forcing coefficient; the *_per_x3 entries are
// the variation-of-constants completion for the androgen-coupling forcing,
// required whenever x3'(tau_k^+) != 0.
struct IntervalFactors {
    Mode mode = Mode::On;
    double a = 0.0;
    double b1 = 0.0;
    double b2_per_x1 = 0.0;
    double a_per_x3 = 0.0;
    double b2_per_x3 = 0.0;

    double x1prime_end(double x1p0, double x3p0) const;
    double x2prime_end(double x1p0, double x2p0, double x3p0) const;
};

// Computes the factors over samples[first..last] (inclusive), an interevent
// segment of constant mode. Uses only the sampled states plus generic
// quadrature; independent of the co-integrated IPA values. Intervals
// shorter than one mesh cell degrade to trapezoid.
IntervalFactors closed_form_factors(const std::vector<PathSample>& samples,
                                    std::size_t first, std::size_t last,
                                    const ModelParams& p, double grid_dt);

}  // namespace ias

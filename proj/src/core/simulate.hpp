#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"
#include "noise.hpp"
#include "types.hpp"

namespace ias {

// Lemma-1 precondition: crossings with |f^{x1} + f^{x2}| below this floor
// are rejected as non-transversal.
inline constexpr double kTransversalityFloor = 1e-8;

struct SimConfig {
    double horizon = 400.0;  // T, days
    double dt = 0.05;        // integrator step, days
    double event_tol = 1e-9; // bisection time tolerance, days
    int max_events = 400;
    double x1_init = 12.0;
    double x2_init = 0.1;
    double x3_init = 18.0;
    Mode initial_mode = Mode::On;

    void validate(double grid_dt, const Thresholds& th) const;
};

// One integration state: hybrid state plus its IPA annotations and the
// zeta3 convolution accumulated since the current interval anchor.
struct IntegrationPoint {
    HybridState s;
    IpaState ipa;
    double zeta3_tilde = 0.0;
};

// Dense trajectory sample at an integrator mesh point. Events contribute two
// samples at the same t (pre- and post-transition) so quadrature segments
// split exactly at tau.
struct PathSample {
    double t = 0.0;
    Mode q = Mode::On;
    double x1 = 0.0, x2 = 0.0, x3 = 0.0, z1 = 0.0, z2 = 0.0;
    Drift f;                                 // drift at this point
    IpaState ipa;
    std::array<double, 2> psa_prime_rate{};  // d/dt (x1' + x2') per theta component
    double zeta3_tilde = 0.0;

    double psa() const { return x1 + x2; }
};

struct EventRecord {
    int index = 0;          // k, 1-based
    double tau = 0.0;
    EventKind kind = EventKind::E1;
    HybridState state_pre;
    HybridState state_post;
    IpaState ipa_pre;
    IpaState ipa_post;
    std::array<double, 2> tau_prime{};  // d tau / d theta_i
    double guard_slope = 0.0;           // f^{x1} + f^{x2} at tau-
    std::size_t noise_cell = 0;
};

struct SamplePath {
    std::vector<EventRecord> events;
    std::vector<PathSample> samples;
    double horizon = 0.0;
    int K_T = 0;  // on+off periods, complete or incomplete
    int M_T = 0;  // complete on-treatment periods = floor(K_T / 2)
    uint64_t seed = 0;
    int clamp_count = 0;  // times a state component was clamped at 0

    // Start of period k (1-based): xi_1 = 0, xi_{k+1} = tau_k.
    double period_start(int k) const { return k <= 1 ? 0.0 : events[k - 2].tau; }
    // End of period k: eta_k = tau_k, eta_{K_T} = T.
    double period_end(int k) const {
        return k >= K_T ? horizon : events[static_cast<std::size_t>(k) - 1].tau;
    }
};

// Advances (state, IPA state, zeta3 accumulator) by one RK4 step of size h.
// The caller guarantees the step stays within one mode and one noise cell;
// zeta is that cell's values. The variational system rides the same RK4
// stages with the Jacobian evaluated at stage states.
IntegrationPoint integrate_step(const IntegrationPoint& pt, const ModelParams& p,
                                const NoiseValues& zeta, double h);

// Bisection event localization inside a step [pt.s.t, pt.s.t + h] whose
// endpoint guard signs bracket a crossing in the correct direction for the
// current mode. Returns the integration point re-integrated from the step
// start (not interpolated). Throws TangentialCrossing when the PSA slope at
// the located crossing is below the transversality floor.
IntegrationPoint locate_event(const IntegrationPoint& pt, double h, const ModelParams& p,
                              const Thresholds& th, const NoiseValues& zeta,
                              double event_tol);

// Mode flip + clock reset (e1: z1 <- 0, e2: z2 <- 0); x continuous. The
// zeta3 accumulator restarts at the new interval anchor, handled by the
// caller that owns it.
HybridState apply_transition(const HybridState& s, EventKind kind);

// Full closed-loop run over [0, T]: RK4 steps split at noise-cell
// boundaries, guard-sign monitoring with the hysteresis arming rule, event
// localization, IPA co-integration and event jumps.
SamplePath simulate(const ModelParams& p, const Thresholds& th, const NoiseTrace& noise,
                    const SimConfig& cfg);

}  // namespace ias

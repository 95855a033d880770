#pragma once

#include <array>

#include "types.hpp"

namespace ias {

// Instantaneous noise values (zeta1, zeta2, zeta3).
using NoiseValues = std::array<double, 3>;

// Right-hand sides of the hybrid dynamics.
struct Drift {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double z1 = 0.0;
    double z2 = 0.0;

    double psa_rate() const { return x1 + x2; }
};

// Jacobian entries of (f^{x1}, f^{x2}) wrt (x1, x2, x3). f^{x1} does not
// depend on x2, and neither depends on the clocks or on theta.
struct DriftJacobian {
    double j11 = 0.0;  // d f^{x1} / d x1
    double j13 = 0.0;  // d f^{x1} / d x3
    double j21 = 0.0;  // d f^{x2} / d x1
    double j22 = 0.0;  // d f^{x2} / d x2
    double j23 = 0.0;  // d f^{x2} / d x3
};

// Proliferation sigmoid 1/(1 + e^{-(x3-k1)k2}) and apoptosis sigmoid
// 1/(1 + e^{-(x3-k3)k4}).
double sigmoid_alpha(const ModelParams& p, double x3);
double sigmoid_beta(const ModelParams& p, double x3);

// Time-driven dynamics: the mode picks the androgen branch and which clock
// runs. Rejects non-finite inputs.
Drift drift(const HybridState& s, const ModelParams& p, const NoiseValues& zeta);

DriftJacobian drift_jacobian(const ModelParams& p, double x1, double x2, double x3);

// Closed-form androgen solution h^ON / h^OFF at `elapsed` days past the
// interval anchor, with zeta3_tilde the noise convolution accumulated since
// the anchor.
double androgen_closed_form(Mode mode, double x3_at_anchor, double elapsed,
                            const ModelParams& p, double zeta3_tilde);

// Exact update of the zeta3 convolution over a step where zeta3 is constant:
// current * e^{-dt/sigma} + zeta3 * sigma * (1 - e^{-dt/sigma}).
double zeta3_tilde_step(double current, double zeta3_cell, double dt, double sigma);

// Signed PSA distance to the armed threshold: x1 + x2 - theta1 while ON
// (e1 fires on a crossing from above), x1 + x2 - theta2 while OFF (e2 from
// below).
double guard_value(const HybridState& s, const Thresholds& th);

}  // namespace ias

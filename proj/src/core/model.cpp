#include "model.hpp"

#include <cmath>
#include <sstream>

namespace ias {

void ModelParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError(std::string("model.") + name + " must be finite and >= 0");
        }
    };
    nonneg(alpha1, "alpha1");
    nonneg(alpha2, "alpha2");
    nonneg(beta1, "beta1");
    nonneg(beta2, "beta2");
    nonneg(m1, "m1");
    nonneg(lambda1, "lambda1");
    nonneg(mu1, "mu1");
    nonneg(mu3, "mu3");
    if (!(sigma > 0.0)) throw ValidationError("model.sigma must be > 0");
    if (!(x30 > 0.0)) throw ValidationError("model.x30 must be > 0");
    if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3) || !std::isfinite(k4) ||
        !std::isfinite(d)) {
        throw ValidationError("model sigmoid/sensitivity constants must be finite");
    }
    if (c1 != 1.0 || c2 != 1.0) {
        throw ValidationError("model.c1 and model.c2 are fixed to 1 (PSA = x1 + x2)");
    }
}

void Thresholds::validate() const {
    std::ostringstream oss;
    if (!(theta1_min <= theta1 && theta1 <= theta1_max)) {
        oss << "thresholds.theta1 = " << theta1 << " outside [" << theta1_min << ", "
            << theta1_max << "]";
        throw ValidationError(oss.str());
    }
    if (!(theta2_min <= theta2 && theta2 <= theta2_max)) {
        oss << "thresholds.theta2 = " << theta2 << " outside [" << theta2_min << ", "
            << theta2_max << "]";
        throw ValidationError(oss.str());
    }
    if (!(theta1_max < theta2_min)) {
        oss << "thresholds.theta1_max = " << theta1_max
            << " must be < thresholds.theta2_min = " << theta2_min;
        throw ValidationError(oss.str());
    }
}

double sigmoid_alpha(const ModelParams& p, double x3) {
    return 1.0 / (1.0 + std::exp(-(x3 - p.k1) * p.k2));
}

double sigmoid_beta(const ModelParams& p, double x3) {
    return 1.0 / (1.0 + std::exp(-(x3 - p.k3) * p.k4));
}

Drift drift(const HybridState& s, const ModelParams& p, const NoiseValues& zeta) {
    if (!std::isfinite(s.x1) || !std::isfinite(s.x2) || !std::isfinite(s.x3) ||
        !std::isfinite(zeta[0]) || !std::isfinite(zeta[1]) || !std::isfinite(zeta[2])) {
        throw ValidationError("drift: non-finite state or noise input");
    }
    const double sa = sigmoid_alpha(p, s.x3);
    const double sb = sigmoid_beta(p, s.x3);
    const double conv = p.m1 * (1.0 - s.x3 / p.x30);

    Drift f;
    f.x1 = p.alpha1 * sa * s.x1 - p.beta1 * sb * s.x1 - (conv + p.lambda1) * s.x1 + p.mu1 +
           zeta[0];
    f.x2 = (p.alpha2 * (1.0 - p.d * s.x3 / p.x30) - p.beta2) * s.x2 + conv * s.x1 + zeta[1];
    if (s.q == Mode::On) {
        f.x3 = -s.x3 / p.sigma + p.mu3 + zeta[2];
        f.z1 = 1.0;
        f.z2 = 0.0;
    } else {
        f.x3 = (p.x30 - s.x3) / p.sigma + p.mu3 + zeta[2];
        f.z1 = 0.0;
        f.z2 = 1.0;
    }
    return f;
}

DriftJacobian drift_jacobian(const ModelParams& p, double x1, double x2, double x3) {
    const double sa = sigmoid_alpha(p, x3);
    const double sb = sigmoid_beta(p, x3);
    DriftJacobian j;
    j.j11 = p.alpha1 * sa - p.beta1 * sb - p.m1 * (1.0 - x3 / p.x30) - p.lambda1;
    // d sigmoid / d x3 = k * s * (1 - s)
    j.j13 = (p.alpha1 * p.k2 * sa * (1.0 - sa) - p.beta1 * p.k4 * sb * (1.0 - sb) +
             p.m1 / p.x30) *
            x1;
    j.j21 = p.m1 * (1.0 - x3 / p.x30);
    j.j22 = p.alpha2 * (1.0 - p.d * x3 / p.x30) - p.beta2;
    j.j23 = -(p.alpha2 * p.d / p.x30) * x2 - (p.m1 / p.x30) * x1;
    return j;
}

double androgen_closed_form(Mode mode, double x3_at_anchor, double elapsed,
                            const ModelParams& p, double zeta3_tilde) {
    if (elapsed < 0.0) throw ValidationError("androgen_closed_form: negative elapsed time");
    const double decay = std::exp(-elapsed / p.sigma);
    const double plateau = (mode == Mode::On) ? p.mu3 * p.sigma : p.mu3 * p.sigma + p.x30;
    return x3_at_anchor * decay + plateau * (1.0 - decay) + zeta3_tilde;
}

double zeta3_tilde_step(double current, double zeta3_cell, double dt, double sigma) {
    if (!std::isfinite(current) || !std::isfinite(zeta3_cell) || !(dt >= 0.0)) {
        throw ValidationError("zeta3_tilde_step: invalid inputs");
    }
    const double decay = std::exp(-dt / sigma);
    return current * decay + zeta3_cell * sigma * (1.0 - decay);
}

double guard_value(const HybridState& s, const Thresholds& th) {
    return s.psa() - (s.q == Mode::On ? th.theta1 : th.theta2);
}

}  // namespace ias

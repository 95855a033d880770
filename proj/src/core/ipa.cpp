#include "ipa.hpp"

#include <cmath>
#include <sstream>

#include "quadrature.hpp"
#include "simulate.hpp"

namespace ias {

std::array<std::array<double, 2>, 3> variational_rhs(const DriftJacobian& j, double sigma,
                                                     const IpaState& ipa) {
    std::array<std::array<double, 2>, 3> d{};
    for (int i = 0; i < 2; ++i) {
        const double x1p = ipa.xprime[0][i];
        const double x2p = ipa.xprime[1][i];
        const double x3p = ipa.xprime[2][i];
        d[0][i] = j.j11 * x1p + j.j13 * x3p;
        d[1][i] = j.j21 * x1p + j.j22 * x2p + j.j23 * x3p;
        d[2][i] = -x3p / sigma;
    }
    return d;
}

IpaState propagate_derivatives(const IntegrationPoint& pt, const ModelParams& p,
                               const NoiseValues& zeta, double h) {
    return integrate_step(pt, p, zeta, h).ipa;
}

std::array<double, 2> event_time_derivative(EventKind kind, const IpaState& ipa_pre,
                                            double guard_slope) {
    if (std::abs(guard_slope) < kTransversalityFloor) {
        std::ostringstream oss;
        oss << "non-transversal " << event_name(kind) << " crossing: |f_x1 + f_x2| = "
            << std::abs(guard_slope) << " < " << kTransversalityFloor;
        throw TangentialCrossing(oss.str());
    }
    std::array<double, 2> tp{};
    const int p_idx = (kind == EventKind::E1) ? 0 : 1;
    for (int i = 0; i < 2; ++i) {
        const double indicator = (i == p_idx) ? 1.0 : 0.0;
        tp[i] = (indicator - ipa_pre.xprime[0][i] - ipa_pre.xprime[1][i]) / guard_slope;
    }
    return tp;
}

std::array<double, 2> drift_mode_explicit(const ModelParams& p, double x1, double x2,
                                          double h, const NoiseValues& zeta) {
    const double phi_a = std::exp(-(h - p.k1) * p.k2);
    const double phi_b = std::exp(-(h - p.k3) * p.k4);
    const double f1 = (p.alpha1 / (1.0 + phi_a) - p.beta1 / (1.0 + phi_b) +
                       p.m1 * (h / p.x30) - (p.m1 + p.lambda1)) *
                          x1 +
                      p.mu1 + zeta[0];
    const double f2 = (p.alpha2 * (1.0 - p.d * h / p.x30) - p.beta2) * x2 +
                      p.m1 * (1.0 - h / p.x30) * x1 + zeta[1];
    return {f1, f2};
}

std::array<double, 2> delta_f_display(EventKind kind, const ModelParams& p, double x1,
                                      double x2, double h_pre, double x3_at_tau) {
    // Pre-side sigmoid arguments use the ending interval's closed-form value,
    // post-side ones the state value at tau (h of the opening interval).
    const double phi_a_pre = std::exp(-(h_pre - p.k1) * p.k2);
    const double phi_b_pre = std::exp(-(h_pre - p.k3) * p.k4);
    const double phi_a_post = std::exp(-(x3_at_tau - p.k1) * p.k2);
    const double phi_b_post = std::exp(-(x3_at_tau - p.k3) * p.k4);
    const double df1 = (p.alpha1 / (1.0 + phi_a_pre) - p.alpha1 / (1.0 + phi_a_post) -
                        p.beta1 / (1.0 + phi_b_pre) + p.beta1 / (1.0 + phi_b_post) +
                        (p.m1 / p.x30) * (h_pre - x3_at_tau)) *
                       x1;
    const double df2 = (p.alpha2 * p.d / p.x30) * (x3_at_tau - h_pre) * x2 -
                       (p.m1 / p.x30) * (h_pre - x3_at_tau) * x1;
    (void)kind;  // e1 and e2 share the same algebraic form of the displays
    return {df1, df2};
}

IpaState apply_event_jump(EventKind kind, const IpaState& ipa_pre,
                          const std::array<double, 2>& tau_prime, const ModelParams& p,
                          double x1, double x2, double h_pre, double x3_at_tau) {
    IpaState out = ipa_pre;
    const auto df = delta_f_display(kind, p, x1, x2, h_pre, x3_at_tau);
    const double x3_jump = (kind == EventKind::E1 ? -1.0 : 1.0) * (p.x30 / p.sigma);
    for (int i = 0; i < 2; ++i) {
        out.xprime[0][i] += df[0] * tau_prime[i];
        out.xprime[1][i] += df[1] * tau_prime[i];
        out.xprime[2][i] += x3_jump * tau_prime[i];
        if (kind == EventKind::E1) {
            out.zprime[0][i] = 0.0;             // z1 resets at e1
            out.zprime[1][i] = -tau_prime[i];   // z2 drift jumps 0 -> 1
        } else {
            out.zprime[0][i] = -tau_prime[i];
            out.zprime[1][i] = 0.0;
        }
    }
    return out;
}

double IntervalFactors::x1prime_end(double x1p0, double x3p0) const {
    return x1p0 * std::exp(a) + a_per_x3 * x3p0;
}

double IntervalFactors::x2prime_end(double x1p0, double x2p0, double x3p0) const {
    return x2p0 * std::exp(b1) + b2_per_x1 * x1p0 + b2_per_x3 * x3p0;
}

IntervalFactors closed_form_factors(const std::vector<PathSample>& samples,
                                    std::size_t first, std::size_t last,
                                    const ModelParams& p, double grid_dt) {
    IntervalFactors out;
    if (last <= first) return out;  // zero-length interval: all factors vanish
    out.mode = samples[first].q;

    // Jacobian integrands do not depend on the noise values, so duplicated
    // sample times (cell-boundary and event pairs) are dropped.
    std::vector<double> ts, j11, j13, j21e, j23, j22;
    ts.reserve(last - first + 1);
    const double t0 = samples[first].t;
    for (std::size_t k = first; k <= last; ++k) {
        const PathSample& s = samples[k];
        if (!ts.empty() && s.t <= ts.back()) continue;
        const DriftJacobian j = drift_jacobian(p, s.x1, s.x2, s.x3);
        ts.push_back(s.t);
        j11.push_back(j.j11);
        j13.push_back(j.j13);
        j21e.push_back(j.j21);
        j22.push_back(j.j22);
        j23.push_back(j.j23);
    }
    const std::size_t n = ts.size();
    if (n < 2) return out;
    std::vector<int> piece(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        piece[k] = static_cast<int>(0.5 * (ts[k] + ts[k + 1]) / grid_dt);
    }

    // Cumulative exponents A(t) (or C) and B1(t) (or D1).
    const std::vector<double> A = cumulative_quadratic(ts, j11, piece);
    const std::vector<double> B1 = cumulative_quadratic(ts, j22, piece);
    out.a = A.back();
    out.b1 = B1.back();

    // Variation-of-constants forcing integrals. The x3' transient carries a
    // unit initial value: x3'(t)/x3'(tau+) = exp(-(t - tau)/sigma).
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = j13[k] * std::exp(-(ts[k] - t0) / p.sigma) * std::exp(-A[k]);
    }
    const std::vector<double> F13 = cumulative_quadratic(ts, g, piece);
    out.a_per_x3 = std::exp(A.back()) * F13.back();

    // Into x2': conversion forcing J21 * x1'(t) and direct coupling J23 * x3'(t),
    // with x1'(t) split into its x1'(tau+)- and x3'(tau+)-proportional parts.
    std::vector<double> g_x1(n), g_x3(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double eB = std::exp(-B1[k]);
        g_x1[k] = j21e[k] * std::exp(A[k]) * eB;
        g_x3[k] = (j21e[k] * std::exp(A[k]) * F13[k] +
                   j23[k] * std::exp(-(ts[k] - t0) / p.sigma)) *
                  eB;
    }
    out.b2_per_x1 = std::exp(B1.back()) * cumulative_quadratic(ts, g_x1, piece).back();
    out.b2_per_x3 = std::exp(B1.back()) * cumulative_quadratic(ts, g_x3, piece).back();
    return out;
}

}  // namespace ias

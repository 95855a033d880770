#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ipa.hpp"

namespace ias {

namespace {

constexpr double kTimeEps = 1e-9;  // days; horizon-approach cutoff

// Flat layout for the joint (state, state-derivative) RK4 system:
// y = [x1, x2, x3, z1, z2, x'_{1,1}, x'_{1,2}, x'_{2,1}, x'_{2,2}, x'_{3,1}, x'_{3,2}]
using JointVec = std::array<double, 11>;

JointVec pack(const IntegrationPoint& pt) {
    JointVec y{};
    y[0] = pt.s.x1;
    y[1] = pt.s.x2;
    y[2] = pt.s.x3;
    y[3] = pt.s.z1;
    y[4] = pt.s.z2;
    for (int n = 0; n < 3; ++n)
        for (int i = 0; i < 2; ++i) y[5 + 2 * n + i] = pt.ipa.xprime[n][i];
    return y;
}

void unpack(const JointVec& y, IntegrationPoint& pt) {
    pt.s.x1 = y[0];
    pt.s.x2 = y[1];
    pt.s.x3 = y[2];
    pt.s.z1 = y[3];
    pt.s.z2 = y[4];
    for (int n = 0; n < 3; ++n)
        for (int i = 0; i < 2; ++i) pt.ipa.xprime[n][i] = y[5 + 2 * n + i];
}

JointVec joint_rhs(const JointVec& y, Mode q, const ModelParams& p, const NoiseValues& zeta) {
    HybridState s;
    s.q = q;
    s.x1 = y[0];
    s.x2 = y[1];
    s.x3 = y[2];
    const Drift f = drift(s, p, zeta);
    const DriftJacobian j = drift_jacobian(p, y[0], y[1], y[2]);
    JointVec d{};
    d[0] = f.x1;
    d[1] = f.x2;
    d[2] = f.x3;
    d[3] = f.z1;
    d[4] = f.z2;
    for (int i = 0; i < 2; ++i) {
        const double x1p = y[5 + i];
        const double x2p = y[7 + i];
        const double x3p = y[9 + i];
        d[5 + i] = j.j11 * x1p + j.j13 * x3p;
        d[7 + i] = j.j21 * x1p + j.j22 * x2p + j.j23 * x3p;
        d[9 + i] = -x3p / p.sigma;
    }
    return d;
}

}  // namespace

void SimConfig::validate(double grid_dt, const Thresholds& th) const {
    if (!(horizon > 0.0)) throw ValidationError("sim.T must be > 0");
    if (!(dt > 0.0)) throw ValidationError("sim.dt must be > 0");
    if (dt > grid_dt) {
        std::ostringstream oss;
        oss << "sim.dt = " << dt << " must be <= noise.grid_dt = " << grid_dt;
        throw ValidationError(oss.str());
    }
    if (!(event_tol > 0.0) || event_tol >= dt) {
        throw ValidationError("sim.event_tol must be in (0, dt)");
    }
    if (max_events < 1) throw ValidationError("sim.max_events must be >= 1");
    if (!(x1_init >= 0.0 && x2_init >= 0.0 && x3_init >= 0.0)) {
        throw ValidationError("sim initial state must be nonnegative");
    }
    if (initial_mode == Mode::On && !(x1_init + x2_init > th.theta1)) {
        std::ostringstream oss;
        oss << "initial PSA = " << x1_init + x2_init
            << " must exceed theta1 = " << th.theta1
            << " (path starts at the beginning of an on-treatment period)";
        throw ValidationError(oss.str());
    }
}

IntegrationPoint integrate_step(const IntegrationPoint& pt, const ModelParams& p,
                                const NoiseValues& zeta, double h) {
    JointVec y = pack(pt);
    const JointVec k1 = joint_rhs(y, pt.s.q, p, zeta);
    JointVec tmp;
    for (int m = 0; m < 11; ++m) tmp[m] = y[m] + 0.5 * h * k1[m];
    const JointVec k2 = joint_rhs(tmp, pt.s.q, p, zeta);
    for (int m = 0; m < 11; ++m) tmp[m] = y[m] + 0.5 * h * k2[m];
    const JointVec k3 = joint_rhs(tmp, pt.s.q, p, zeta);
    for (int m = 0; m < 11; ++m) tmp[m] = y[m] + h * k3[m];
    const JointVec k4 = joint_rhs(tmp, pt.s.q, p, zeta);
    for (int m = 0; m < 11; ++m) {
        y[m] += (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    }
    IntegrationPoint out = pt;
    unpack(y, out);
    out.s.t = pt.s.t + h;
    out.zeta3_tilde = zeta3_tilde_step(pt.zeta3_tilde, zeta[2], h, p.sigma);
    return out;
}

IntegrationPoint locate_event(const IntegrationPoint& pt, double h, const ModelParams& p,
                              const Thresholds& th, const NoiseValues& zeta,
                              double event_tol) {
    const bool on = pt.s.q == Mode::On;
    const double g0 = guard_value(pt.s, th);
    if (g0 == 0.0) return pt;  // already on the guard

    auto crossed = [on](double g) { return on ? g <= 0.0 : g >= 0.0; };
    if (crossed(g0)) {
        throw std::logic_error("locate_event: bracket start already past the guard");
    }
    {
        const IntegrationPoint end = integrate_step(pt, p, zeta, h);
        if (!crossed(guard_value(end.s, th))) {
            throw std::logic_error("locate_event: bracket does not cross the guard");
        }
    }

    double lo = 0.0, hi = h;
    for (int it = 0; it < 200 && hi - lo > event_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const IntegrationPoint m = integrate_step(pt, p, zeta, mid);
        if (crossed(guard_value(m.s, th))) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    IntegrationPoint at_tau = integrate_step(pt, p, zeta, hi);
    const Drift f = drift(at_tau.s, p, zeta);
    if (std::abs(f.x1 + f.x2) < kTransversalityFloor) {
        std::ostringstream oss;
        oss << "tangential crossing at t = " << at_tau.s.t << ": |f_x1 + f_x2| = "
            << std::abs(f.x1 + f.x2);
        throw TangentialCrossing(oss.str());
    }
    return at_tau;
}

HybridState apply_transition(const HybridState& s, EventKind kind) {
    if ((kind == EventKind::E1 && s.q != Mode::On) ||
        (kind == EventKind::E2 && s.q != Mode::Off)) {
        throw std::logic_error("apply_transition: event kind inconsistent with mode");
    }
    HybridState out = s;
    if (kind == EventKind::E1) {
        out.q = Mode::Off;
        out.z1 = 0.0;
    } else {
        out.q = Mode::On;
        out.z2 = 0.0;
    }
    return out;
}

namespace {

PathSample make_sample(const IntegrationPoint& pt, const ModelParams& p,
                       const NoiseValues& zeta) {
    PathSample smp;
    smp.t = pt.s.t;
    smp.q = pt.s.q;
    smp.x1 = pt.s.x1;
    smp.x2 = pt.s.x2;
    smp.x3 = pt.s.x3;
    smp.z1 = pt.s.z1;
    smp.z2 = pt.s.z2;
    smp.f = drift(pt.s, p, zeta);
    smp.ipa = pt.ipa;
    const DriftJacobian j = drift_jacobian(p, pt.s.x1, pt.s.x2, pt.s.x3);
    const auto d = variational_rhs(j, p.sigma, pt.ipa);
    smp.psa_prime_rate = {d[0][0] + d[1][0], d[0][1] + d[1][1]};
    smp.zeta3_tilde = pt.zeta3_tilde;
    return smp;
}

}  // namespace

SamplePath simulate(const ModelParams& p, const Thresholds& th, const NoiseTrace& noise,
                    const SimConfig& cfg) {
    p.validate();
    th.validate();
    cfg.validate(noise.grid_dt(), th);

    SamplePath path;
    path.horizon = cfg.horizon;
    path.seed = noise.seed();
    path.samples.reserve(static_cast<std::size_t>(cfg.horizon / cfg.dt) + 64);

    IntegrationPoint pt;
    pt.s.t = 0.0;
    pt.s.q = cfg.initial_mode;
    pt.s.x1 = cfg.x1_init;
    pt.s.x2 = cfg.x2_init;
    pt.s.x3 = cfg.x3_init;

    const double T = cfg.horizon;
    std::size_t sample_cell = noise.cell_index(0.0);
    path.samples.push_back(make_sample(pt, p, noise.at_cell(sample_cell)));

    while (pt.s.t < T - kTimeEps) {
        const double t = pt.s.t;
        const double t_next = std::min({t + cfg.dt, T, noise.cell_end(t + 1e-13)});
        const double h = t_next - t;
        const std::size_t cell = noise.cell_index(t + 0.5 * h);
        const NoiseValues zeta = noise.at_cell(cell);
        if (cell != sample_cell) {
            // duplicate sample at the cell boundary so each quadrature cell
            // sees endpoint drifts evaluated with its own noise values
            path.samples.push_back(make_sample(pt, p, zeta));
            sample_cell = cell;
        }

        IntegrationPoint next = integrate_step(pt, p, zeta, h);
        const double g0 = guard_value(pt.s, th);
        const double g1 = guard_value(next.s, th);
        const bool on = pt.s.q == Mode::On;
        const bool crossing = on ? (g0 > 0.0 && g1 <= 0.0) : (g0 < 0.0 && g1 >= 0.0);

        if (crossing) {
            IntegrationPoint at_tau = locate_event(pt, h, p, th, zeta, cfg.event_tol);
            const double tau = at_tau.s.t;
            const Drift f_pre = drift(at_tau.s, p, zeta);
            const double slope = f_pre.x1 + f_pre.x2;
            const EventKind kind = on ? EventKind::E1 : EventKind::E2;
            const auto tau_prime = event_time_derivative(kind, at_tau.ipa, slope);

            path.samples.push_back(make_sample(at_tau, p, zeta));

            EventRecord rec;
            rec.index = static_cast<int>(path.events.size()) + 1;
            rec.tau = tau;
            rec.kind = kind;
            rec.state_pre = at_tau.s;
            rec.ipa_pre = at_tau.ipa;
            rec.tau_prime = tau_prime;
            rec.guard_slope = slope;
            rec.noise_cell = noise.cell_index(t + 0.5 * h);

            IntegrationPoint post = at_tau;
            post.s = apply_transition(at_tau.s, kind);
            post.ipa = apply_event_jump(kind, at_tau.ipa, tau_prime, p, at_tau.s.x1,
                                        at_tau.s.x2, at_tau.s.x3, at_tau.s.x3);
            post.zeta3_tilde = 0.0;  // Eq.(7) integral restarts at tau
            rec.state_post = post.s;
            rec.ipa_post = post.ipa;
            path.events.push_back(rec);

            path.samples.push_back(make_sample(post, p, zeta));
            pt = post;

            if (static_cast<int>(path.events.size()) > cfg.max_events) {
                std::ostringstream oss;
                oss << "more than " << cfg.max_events << " events before t = " << tau
                    << "; theta2 - theta1 may be too small relative to the noise level";
                throw RunawayChatter(oss.str());
            }
        } else {
            // nonnegativity clamp; counts are surfaced on the path
            for (double* v : {&next.s.x1, &next.s.x2, &next.s.x3}) {
                if (*v < 0.0) {
                    *v = 0.0;
                    ++path.clamp_count;
                }
            }
            pt = next;
            path.samples.push_back(make_sample(pt, p, zeta));
        }
    }

    path.K_T = static_cast<int>(path.events.size()) + 1;
    path.M_T = path.K_T / 2;
    return path;
}

}  // namespace ias

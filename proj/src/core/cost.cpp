#include "cost.hpp"

#include <cmath>

#include "quadrature.hpp"

namespace ias {

void CostConfig::validate() const {
    if (!(W1 >= 0.0) || !(W2 >= 0.0)) throw ValidationError("cost weights must be >= 0");
    if (!(psa_init > 0.0)) throw ValidationError("cost.psa_init must be > 0");
    if (!(horizon > 0.0)) throw ValidationError("cost horizon must be > 0");
}

namespace {

void check_coverage(const SamplePath& path, double T) {
    if (path.samples.size() < 2 || path.samples.back().t < T - 1e-6) {
        throw ValidationError("sample path does not cover [0, T]");
    }
}

}  // namespace

double sample_cost(const SamplePath& path, const CostConfig& cc) {
    cc.validate();
    check_coverage(path, cc.horizon);
    double int_psa = 0.0;
    double int_z1 = 0.0;
    for (std::size_t j = 0; j + 1 < path.samples.size(); ++j) {
        const PathSample& a = path.samples[j];
        const PathSample& b = path.samples[j + 1];
        const double h = b.t - a.t;
        if (h <= 0.0) continue;
        int_psa += corrected_trapezoid(h, a.psa(), b.psa(), a.f.x1 + a.f.x2, b.f.x1 + b.f.x2);
        int_z1 += corrected_trapezoid(h, a.z1, b.z1, a.f.z1, b.f.z1);
    }
    return (cc.W1 * int_psa / cc.psa_init + cc.W2 * int_z1) / cc.horizon;
}

GradientReport sample_gradient(const SamplePath& path, const CostConfig& cc) {
    cc.validate();
    check_coverage(path, cc.horizon);

    GradientReport rep;
    rep.L = sample_cost(path, cc);
    rep.K_T = path.K_T;
    rep.M_T = path.M_T;
    rep.seed = path.seed;

    const double T = cc.horizon;

    // Term 1: (W1 / (T * PSA_init)) * int_0^T (x1' + x2') dt, split at events
    // by construction of the sample mesh.
    for (int i = 0; i < 2; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < path.samples.size(); ++j) {
            const PathSample& a = path.samples[j];
            const PathSample& b = path.samples[j + 1];
            const double h = b.t - a.t;
            if (h <= 0.0) continue;
            acc += corrected_trapezoid(h, a.ipa.psa_prime(i), b.ipa.psa_prime(i),
                                       a.psa_prime_rate[i], b.psa_prime_rate[i]);
        }
        rep.term_psa[i] = cc.W1 * acc / (T * cc.psa_init);
    }

    // Terms 2-3: the m-th complete ON period is period 2m-1, ending at event
    // 2m-1 (1-based, an e1) and opened by event 2m-2 (an e2; the first ON
    // period opens at t=0 with xi'_1 = 0). xi' is read as -z1'(xi^+) from the
    // opening e2 event.
    for (int m = 1; m <= path.M_T; ++m) {
        const EventRecord& closing = path.events[static_cast<std::size_t>(2 * m) - 2];
        const double xi = path.period_start(2 * m - 1);
        const double eta = closing.tau;
        for (int i = 0; i < 2; ++i) {
            const double eta_prime = closing.tau_prime[i];
            const double xi_prime =
                (m == 1) ? 0.0
                         : -path.events[static_cast<std::size_t>(2 * m) - 3].ipa_post.zprime[0][i];
            rep.term_duration[i] += (cc.W2 / T) * (eta - xi) * (eta_prime - xi_prime);
        }
    }
    if (path.K_T % 2 == 1 && path.M_T >= 1) {
        // path ends inside ON period M_T + 1, opened by the last e2 event
        const EventRecord& opening = path.events[static_cast<std::size_t>(2 * path.M_T) - 1];
        const double xi = opening.tau;
        for (int i = 0; i < 2; ++i) {
            const double xi_prime = -opening.ipa_post.zprime[0][i];
            rep.term_incomplete[i] = -(cc.W2 / T) * xi_prime * (T - xi);
        }
    }

    for (int i = 0; i < 2; ++i) {
        rep.dL[i] = rep.term_psa[i] + rep.term_duration[i] + rep.term_incomplete[i];
        if (!std::isfinite(rep.dL[i])) {
            throw ValidationError("sample_gradient produced a non-finite component");
        }
    }
    return rep;
}

}  // namespace ias

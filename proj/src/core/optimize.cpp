#include "optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>

namespace ias {

void OptConfig::validate() const {
    if (!(rho0 > 0.0)) throw ValidationError("optimizer.rho0 must be > 0");
    if (batch_size < 1) throw ValidationError("optimizer.batch_size must be >= 1");
    if (max_iters < 1) throw ValidationError("optimizer.max_iters must be >= 1");
    if (!(grad_tol >= 0.0)) throw ValidationError("optimizer.grad_tol must be >= 0");
    if (threads < 1) throw ValidationError("optimizer.threads must be >= 1");
}

double OptConfig::step_size(int iter) const {
    switch (schedule) {
        case StepSchedule::Constant: return rho0;
        case StepSchedule::InverseLinear: return rho0 / (1.0 + iter);
        case StepSchedule::InverseSqrt: return rho0 / std::sqrt(1.0 + iter);
    }
    return rho0;
}

Thresholds project(double theta1_raw, double theta2_raw, const Thresholds& bounds) {
    Thresholds out = bounds;
    out.theta1 = std::clamp(theta1_raw, bounds.theta1_min, bounds.theta1_max);
    out.theta2 = std::clamp(theta2_raw, bounds.theta2_min, bounds.theta2_max);
    return out;
}

namespace {

// Runs `count` tasks over up to `threads` workers. Task results are written
// by index, so scheduling does not affect the outcome.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    const int workers = std::max(1, std::min(threads, count));
    if (workers == 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int k = next.fetch_add(1);
                if (k >= count) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct PathOutcome {
    bool ok = false;
    GradientReport rep;
    std::string what;
};

PathOutcome run_one(const ModelParams& p, const Thresholds& th, const SimConfig& sim,
                    const CostConfig& cost, const NoiseSettings& ns, uint64_t seed) {
    PathOutcome out;
    try {
        NoiseTrace noise(sim.horizon, ns.grid_dt, ns.stds, seed);
        const SamplePath path = simulate(p, th, noise, sim);
        out.rep = sample_gradient(path, cost);
        out.ok = true;
    } catch (const TangentialCrossing& e) {
        out.what = e.what();
    } catch (const RunawayChatter& e) {
        out.what = e.what();
    }
    return out;
}

}  // namespace

GradientEstimate estimate_gradient(const ModelParams& p, const Thresholds& th,
                                   const SimConfig& sim, const CostConfig& cost,
                                   const NoiseSettings& ns, uint64_t batch_seed,
                                   int batch_size, int threads, int retry_factor) {
    if (batch_size < 1) throw ValidationError("estimate_gradient: batch_size must be >= 1");

    std::vector<PathOutcome> outcomes(static_cast<std::size_t>(batch_size));
    parallel_for(batch_size, threads, [&](int k) {
        outcomes[static_cast<std::size_t>(k)] =
            run_one(p, th, sim, cost, ns, derive_seed(batch_seed, static_cast<uint64_t>(k)));
    });

    // Drop-and-log failed paths; resample from a reserve stream.
    GradientEstimate est;
    const int budget = retry_factor * batch_size;
    uint64_t reserve = static_cast<uint64_t>(batch_size);
    for (auto& oc : outcomes) {
        int tries = 0;
        while (!oc.ok) {
            if (est.paths_dropped >= budget) {
                throw RunawayChatter("estimate_gradient: resample budget exhausted (" +
                                     oc.what + ")");
            }
            std::cerr << "[iasopt] dropped sample path (" << oc.what << "), resampling\n";
            ++est.paths_dropped;
            ++tries;
            oc = run_one(p, th, sim, cost, ns, derive_seed(batch_seed, reserve++));
            if (tries > budget) break;
        }
    }

    std::array<double, 2> sum{0.0, 0.0};
    double sumL = 0.0;
    for (const auto& oc : outcomes) {
        sum[0] += oc.rep.dL[0];
        sum[1] += oc.rep.dL[1];
        sumL += oc.rep.L;
    }
    const double n = static_cast<double>(batch_size);
    est.mean_dL = {sum[0] / n, sum[1] / n};
    est.mean_L = sumL / n;
    est.paths_used = batch_size;
    if (batch_size > 1) {
        std::array<double, 2> ss{0.0, 0.0};
        for (const auto& oc : outcomes) {
            for (int i = 0; i < 2; ++i) {
                const double d = oc.rep.dL[i] - est.mean_dL[i];
                ss[i] += d * d;
            }
        }
        for (int i = 0; i < 2; ++i) {
            est.se[i] = std::sqrt(ss[i] / (n - 1.0)) / std::sqrt(n);
        }
        est.se_defined = true;
    }
    return est;
}

std::pair<Thresholds, OptTrace> optimize(const ModelParams& p, const Thresholds& theta0,
                                         const SimConfig& sim, const CostConfig& cost,
                                         const NoiseSettings& ns, const OptConfig& oc) {
    oc.validate();
    theta0.validate();

    Thresholds th = theta0;
    OptTrace trace;
    trace.iterates.reserve(static_cast<std::size_t>(oc.max_iters));

    for (int l = 0; l < oc.max_iters; ++l) {
        const uint64_t batch_seed = (oc.seed_policy == SeedPolicy::Fresh)
                                        ? derive_seed(ns.seed, 0x10000000ull + static_cast<uint64_t>(l))
                                        : ns.seed;
        const GradientEstimate g = estimate_gradient(p, th, sim, cost, ns, batch_seed,
                                                     oc.batch_size, oc.threads,
                                                     oc.retry_factor);
        trace.total_paths += g.paths_used + g.paths_dropped;
        const double rho = oc.step_size(l);

        OptIterate it;
        it.iter = l;
        it.theta1 = th.theta1;
        it.theta2 = th.theta2;
        it.L_mean = g.mean_L;
        it.dL = g.mean_dL;
        it.se = g.se;
        it.rho = rho;

        // Projected-gradient residual: a component pinned at an active bound
        // with the gradient pushing outward cannot move and counts as
        // converged.
        std::array<double, 2> resid = g.mean_dL;
        const std::array<double, 2> vals{th.theta1, th.theta2};
        const std::array<double, 2> los{th.theta1_min, th.theta2_min};
        const std::array<double, 2> his{th.theta1_max, th.theta2_max};
        for (int i = 0; i < 2; ++i) {
            if (vals[i] <= los[i] && resid[i] >= 0.0) resid[i] = 0.0;
            if (vals[i] >= his[i] && resid[i] <= 0.0) resid[i] = 0.0;
        }
        const bool done = std::abs(resid[0]) <= oc.grad_tol * std::max(1.0, std::abs(th.theta1)) &&
                          std::abs(resid[1]) <= oc.grad_tol * std::max(1.0, std::abs(th.theta2));

        if (done) {
            it.projection_active = {false, false};
            trace.iterates.push_back(it);
            trace.converged = true;
            return {th, trace};
        }

        const double raw1 = th.theta1 - rho * g.mean_dL[0];
        const double raw2 = th.theta2 - rho * g.mean_dL[1];
        const Thresholds next = project(raw1, raw2, th);
        it.projection_active = {next.theta1 != raw1, next.theta2 != raw2};
        trace.iterates.push_back(it);
        th = next;
    }
    return {th, trace};
}

}  // namespace ias

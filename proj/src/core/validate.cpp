#include "validate.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <utility>
#include <vector>

namespace ias {

namespace {

// Event-structure signature of a path: kinds plus the noise cell holding
// each event. CRN finite differences are pathwise-valid only while both
// probes stay in the same smooth piece of theta-space; a changed signature
// marks a kink (event count change, or an event sliding across a noise-cell
// boundary where the Lemma-1 denominator jumps).
std::vector<std::pair<EventKind, long>> signature(const SamplePath& path, double grid_dt) {
    std::vector<std::pair<EventKind, long>> sig;
    sig.reserve(path.events.size());
    for (const auto& e : path.events) {
        sig.emplace_back(e.kind, static_cast<long>(e.tau / grid_dt));
    }
    return sig;
}

struct ProbeRun {
    double L = 0.0;
    int K_T = 0;
    std::vector<std::pair<EventKind, long>> sig;
};

ProbeRun run_probe(const ModelParams& p, Thresholds th, int comp, double delta,
                   const SimConfig& sim, const CostConfig& cost, const NoiseTrace& noise) {
    if (comp == 0) {
        th.theta1 += delta;
    } else {
        th.theta2 += delta;
    }
    th.validate();  // probes must stay feasible
    const SamplePath path = simulate(p, th, noise, sim);
    ProbeRun out;
    out.L = sample_cost(path, cost);
    out.K_T = path.K_T;
    out.sig = signature(path, noise.grid_dt());
    return out;
}

}  // namespace

FdReport fd_gradient(const ModelParams& p, const Thresholds& th, const SimConfig& sim,
                     const CostConfig& cost, const NoiseSettings& ns, uint64_t seed,
                     std::array<double, 2> delta, int max_retries) {
    FdReport rep;
    rep.theta1 = th.theta1;
    rep.theta2 = th.theta2;
    rep.seed = seed;

    const NoiseTrace noise(sim.horizon, ns.grid_dt, ns.stds, seed);
    const SamplePath base = simulate(p, th, noise, sim);
    rep.K_T = base.K_T;
    const auto base_sig = signature(base, ns.grid_dt);

    rep.all_matched = true;
    for (int i = 0; i < 2; ++i) {
        FdProbe& probe = rep.probes[static_cast<std::size_t>(i)];
        probe.delta_requested = delta[static_cast<std::size_t>(i)];
        double d = probe.delta_requested;
        for (int attempt = 0; attempt <= max_retries; ++attempt) {
            const ProbeRun plus = run_probe(p, th, i, +d, sim, cost, noise);
            const ProbeRun minus = run_probe(p, th, i, -d, sim, cost, noise);
            if (plus.K_T == base.K_T && minus.K_T == base.K_T && plus.sig == base_sig &&
                minus.sig == base_sig) {
                probe.matched = true;
                probe.delta_used = d;
                probe.retries = attempt;
                probe.fd = (plus.L - minus.L) / (2.0 * d);
                break;
            }
            d /= 10.0;
        }
        if (!probe.matched) rep.all_matched = false;
    }
    return rep;
}

FdReport fd_gradient_rel(const ModelParams& p, const Thresholds& th, const SimConfig& sim,
                         const CostConfig& cost, const NoiseSettings& ns, uint64_t seed,
                         double delta_rel, int max_retries) {
    return fd_gradient(p, th, sim, cost, ns, seed,
                       {delta_rel * th.theta1, delta_rel * th.theta2}, max_retries);
}

UnbiasednessReport unbiasedness_check(const ModelParams& p, const Thresholds& th,
                                      const SimConfig& sim, const CostConfig& cost,
                                      const NoiseSettings& ns, int n_paths, double delta_rel,
                                      int threads) {
    if (n_paths < 30) {
        throw ValidationError("unbiasedness_check requires n_paths >= 30");
    }
    UnbiasednessReport rep;
    rep.n_paths = n_paths;

    struct Row {
        bool ok = false;
        std::array<double, 2> ipa{};
        std::array<double, 2> fd{};
    };
    std::vector<Row> rows(static_cast<std::size_t>(n_paths));

    auto task = [&](int k) {
        const uint64_t seed = derive_seed(ns.seed, 0x20000000ull + static_cast<uint64_t>(k));
        NoiseTrace noise(sim.horizon, ns.grid_dt, ns.stds, seed);
        const SamplePath path = simulate(p, th, noise, sim);
        const GradientReport g = sample_gradient(path, cost);
        const FdReport fd = fd_gradient_rel(p, th, sim, cost, ns, seed, delta_rel);
        Row& row = rows[static_cast<std::size_t>(k)];
        if (fd.all_matched) {
            row.ok = true;
            row.ipa = g.dL;
            row.fd = {fd.probes[0].fd, fd.probes[1].fd};
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        const int workers = std::min(threads, n_paths);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const int k = next.fetch_add(1);
                    if (k >= n_paths) return;
                    task(k);
                }
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (int k = 0; k < n_paths; ++k) task(k);
    }

    std::array<double, 2> sum_ipa{}, sum_fd{};
    int n_used = 0;
    for (const auto& row : rows) {
        if (!row.ok) continue;
        ++n_used;
        for (int i = 0; i < 2; ++i) {
            sum_ipa[i] += row.ipa[i];
            sum_fd[i] += row.fd[i];
        }
    }
    rep.n_used = n_used;
    if (n_used < 30) {
        throw ValidationError("unbiasedness_check: fewer than 30 usable seed pairs");
    }
    const double n = static_cast<double>(n_used);
    for (int i = 0; i < 2; ++i) {
        rep.mean_ipa[i] = sum_ipa[i] / n;
        rep.mean_fd[i] = sum_fd[i] / n;
    }
    std::array<double, 2> ss_ipa{}, ss_fd{};
    for (const auto& row : rows) {
        if (!row.ok) continue;
        for (int i = 0; i < 2; ++i) {
            ss_ipa[i] += (row.ipa[i] - rep.mean_ipa[i]) * (row.ipa[i] - rep.mean_ipa[i]);
            ss_fd[i] += (row.fd[i] - rep.mean_fd[i]) * (row.fd[i] - rep.mean_fd[i]);
        }
    }
    rep.pass = true;
    for (int i = 0; i < 2; ++i) {
        rep.se_ipa[i] = n_used > 1 ? std::sqrt(ss_ipa[i] / (n - 1.0)) / std::sqrt(n) : 0.0;
        rep.se_fd[i] = n_used > 1 ? std::sqrt(ss_fd[i] / (n - 1.0)) / std::sqrt(n) : 0.0;
        rep.pooled_se[i] = std::sqrt(rep.se_ipa[i] * rep.se_ipa[i] + rep.se_fd[i] * rep.se_fd[i]);
        rep.mean_diff[i] = rep.mean_ipa[i] - rep.mean_fd[i];
        const double scale = std::max({std::abs(rep.mean_ipa[i]), std::abs(rep.mean_fd[i]), 1e-8});
        const double bound = std::max(2.0 * rep.pooled_se[i], 1e-3 * scale);
        if (std::abs(rep.mean_diff[i]) > bound) rep.pass = false;
    }
    return rep;
}

}  // namespace ias

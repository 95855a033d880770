#pragma once

#include <array>
#include <cstdint>

#include "optimize.hpp"

namespace ias {

// One central-difference probe of the sample cost along a single threshold
// component under common random numbers.
struct FdProbe {
    double delta_requested = 0.0;
    double delta_used = 0.0;
    int retries = 0;
    bool matched = false;  // probes landed in the same smooth piece (K_T and
                           // per-event noise-cell signature equal)
    double fd = 0.0;
};

struct FdReport {
    double theta1 = 0.0;
    double theta2 = 0.0;
    uint64_t seed = 0;
    int K_T = 0;
    std::array<FdProbe, 2> probes{};
    std::array<double, 2> ipa{};
    std::array<double, 2> rel_err{};  // valid only where probes[i].matched
    bool all_matched = false;
};

struct UnbiasednessReport {
    int n_paths = 0;
    int n_used = 0;  // seed pairs where both FD probes matched
    std::array<double, 2> mean_ipa{};
    std::array<double, 2> mean_fd{};
    std::array<double, 2> se_ipa{};
    std::array<double, 2> se_fd{};
    std::array<double, 2> pooled_se{};
    std::array<double, 2> mean_diff{};
    bool pass = false;
};

// Central CRN finite difference of the sample cost: the same noise trace is
// simulated at theta +/- delta e_i. A probe is valid only when both sides
// reproduce the base path's event structure (count, kinds, and the noise
// cell containing each event); otherwise delta shrinks 10x, up to
// `max_retries` times. Uses only simulate + sample_cost.
FdReport fd_gradient(const ModelParams& p, const Thresholds& th, const SimConfig& sim,
                     const CostConfig& cost, const NoiseSettings& ns, uint64_t seed,
                     std::array<double, 2> delta, int max_retries = 3);

// Convenience: relative deltas delta_i = delta_rel * theta_i.
FdReport fd_gradient_rel(const ModelParams& p, const Thresholds& th, const SimConfig& sim,
                         const CostConfig& cost, const NoiseSettings& ns, uint64_t seed,
                         double delta_rel, int max_retries = 3);

// Compares the mean IPA gradient against the mean pathwise CRN-FD gradient
// over n_paths fresh seeds (n_paths >= 30). Passes when |mean difference|
// <= max(2 * pooled SE, 1e-3 relative floor) per component; the floor covers
// the zero-noise degenerate case where SE = 0 exactly.
UnbiasednessReport unbiasedness_check(const ModelParams& p, const Thresholds& th,
                                      const SimConfig& sim, const CostConfig& cost,
                                      const NoiseSettings& ns, int n_paths,
                                      double delta_rel = 1e-4, int threads = 1);

}  // namespace ias

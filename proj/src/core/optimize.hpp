#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cost.hpp"
#include "noise.hpp"
#include "simulate.hpp"

namespace ias {

// Noise generation settings shared by every run of an experiment.
struct NoiseSettings {
    double grid_dt = 0.5;
    std::array<double, 3> stds{0.02, 0.01, 0.08};
    uint64_t seed = 12345;
};

enum class StepSchedule { Constant, InverseLinear, InverseSqrt };
enum class SeedPolicy { Fresh, CrnPool };

struct OptConfig {
    double rho0 = 8.0;
    StepSchedule schedule = StepSchedule::InverseLinear;  // rho_l = rho0 / (1 + l)
    int max_iters = 200;
    int batch_size = 1;       // paths per gradient estimate; 1 = paper's scheme
    double grad_tol = 5e-3;   // componentwise, scaled by max(1, |theta_i|)
    SeedPolicy seed_policy = SeedPolicy::Fresh;
    int threads = 1;
    int retry_factor = 3;     // resample budget = retry_factor * batch_size

    void validate() const;
    double step_size(int iter) const;
};

struct GradientEstimate {
    std::array<double, 2> mean_dL{};
    std::array<double, 2> se{};    // standard error per component; 0 when undefined
    double mean_L = 0.0;
    bool se_defined = false;       // false for batch_size = 1
    int paths_used = 0;
    int paths_dropped = 0;         // failed paths resampled with reserve seeds
};

struct OptIterate {
    int iter = 0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double L_mean = 0.0;
    std::array<double, 2> dL{};
    std::array<double, 2> se{};
    double rho = 0.0;
    std::array<bool, 2> projection_active{};  // bound clamped the raw step
};

struct OptTrace {
    std::vector<OptIterate> iterates;
    bool converged = false;
    int total_paths = 0;
};

// Componentwise clamp of a raw point into the feasible box; the hysteresis
// gap follows from theta1_max < theta2_min.
Thresholds project(double theta1_raw, double theta2_raw, const Thresholds& bounds);

// Mean and standard error of the per-path IPA gradient over batch_size
// independently seeded paths. Failed paths (chatter, tangential crossings)
// are dropped and resampled from a deterministic reserve seed stream up to
// the retry budget.
GradientEstimate estimate_gradient(const ModelParams& p, const Thresholds& th,
                                   const SimConfig& sim, const CostConfig& cost,
                                   const NoiseSettings& ns, uint64_t batch_seed,
                                   int batch_size, int threads, int retry_factor);

// Projected stochastic gradient descent theta_{l+1} = P(theta_l - rho_l g_l).
// Stops when the componentwise theta-scaled projected-gradient residual
// drops below grad_tol (components pinned at an active bound with an outward
// gradient count as converged) or at max_iters.
std::pair<Thresholds, OptTrace> optimize(const ModelParams& p, const Thresholds& theta0,
                                         const SimConfig& sim, const CostConfig& cost,
                                         const NoiseSettings& ns, const OptConfig& oc);

}  // namespace ias

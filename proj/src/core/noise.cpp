#include "noise.hpp"

#include <cmath>
#include <random>

namespace ias {

NoiseTrace::NoiseTrace(double horizon, double grid_dt, std::array<double, 3> stds,
                       uint64_t seed)
    : grid_dt_(grid_dt), seed_(seed), stds_(stds) {
    if (!(grid_dt > 0.0)) throw ValidationError("noise.grid_dt must be > 0");
    if (!(horizon > 0.0)) throw ValidationError("noise horizon must be > 0");
    for (double s : stds) {
        if (!(s >= 0.0)) throw ValidationError("noise stds must be >= 0");
    }
    const auto n = static_cast<std::size_t>(std::ceil(horizon / grid_dt)) + 2;
    std::mt19937_64 engine(seed);
    for (int c = 0; c < 3; ++c) {
        values_[c].assign(n, 0.0);
        if (stds_[c] > 0.0) {
            std::normal_distribution<double> dist(0.0, stds_[c]);
            for (std::size_t k = 0; k < n; ++k) values_[c][k] = dist(engine);
        }
    }
}

std::size_t NoiseTrace::cell_index(double t) const {
    if (t <= 0.0) return 0;
    auto k = static_cast<std::size_t>(t / grid_dt_);
    const std::size_t last = values_[0].size() - 1;
    return k < last ? k : last;
}

double NoiseTrace::cell_end(double t) const {
    return static_cast<double>(cell_index(t) + 1) * grid_dt_;
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
    // splitmix64 on master + index
    uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace ias

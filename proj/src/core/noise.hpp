#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "model.hpp"

namespace ias {

// Seeded, replayable piecewise-constant noise realization on a uniform time
// grid. Each channel is i.i.d. zero-mean Gaussian per cell; a channel with
// zero standard deviation is identically zero and consumes no RNG draws.
// Immutable after construction: identical (seed, grid_dt, stds, horizon)
// gives a bit-identical trace.
class NoiseTrace {
public:
    NoiseTrace(double horizon, double grid_dt, std::array<double, 3> stds, uint64_t seed);

    double grid_dt() const { return grid_dt_; }
    uint64_t seed() const { return seed_; }
    const std::array<double, 3>& stds() const { return stds_; }
    std::size_t cells() const { return values_[0].size(); }

    // Index of the grid cell containing time t (values are constant within a
    // cell). Clamped to the last cell.
    std::size_t cell_index(double t) const;

    // Absolute end time of the cell containing t.
    double cell_end(double t) const;

    NoiseValues at_cell(std::size_t k) const {
        return {values_[0][k], values_[1][k], values_[2][k]};
    }
    NoiseValues at(double t) const { return at_cell(cell_index(t)); }

private:
    double grid_dt_;
    uint64_t seed_;
    std::array<double, 3> stds_;
    std::array<std::vector<double>, 3> values_;
};

// Deterministic stream of per-path seeds derived from a master seed
// (splitmix64 over the index).
uint64_t derive_seed(uint64_t master, uint64_t index);

}  // namespace ias

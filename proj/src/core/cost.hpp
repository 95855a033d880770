#pragma once

#include <array>
#include <cstdint>

#include "simulate.hpp"

namespace ias {

struct CostConfig {
    double W1 = 1.0;       // weight on average normalized PSA
    double W2 = 0.015;     // weight on average on-treatment cycle duration
    double psa_init = 0.0; // x1(0) + x2(0), the start of the first ON cycle
    double horizon = 0.0;  // T

    void validate() const;
};

struct GradientReport {
    double L = 0.0;
    std::array<double, 2> dL{};
    std::array<double, 2> term_psa{};         // W1 integral of (x1' + x2')
    std::array<double, 2> term_duration{};    // complete ON periods
    std::array<double, 2> term_incomplete{};  // trailing incomplete ON period
    int K_T = 0;
    int M_T = 0;
    uint64_t seed = 0;
};

// Sample cost L = (1/T)[ W1 int (x1+x2)/PSA_init dt + W2 int z1 dt ],
// integrated segment-by-segment on the dense samples (the integrands are
// non-smooth at events; sample pairs at tau split the mesh there).
double sample_cost(const SamplePath& path, const CostConfig& cc);

// Exact per-path cost gradient: the PSA-derivative integral plus the
// on-treatment duration terms built from the event-time derivatives, with
// the trailing term only when the path ends mid-ON-period (K_T odd). The
// three reported terms sum to dL exactly.
GradientReport sample_gradient(const SamplePath& path, const CostConfig& cc);

}  // namespace ias

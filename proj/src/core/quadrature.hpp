#pragma once

#include <cstddef>
#include <vector>

namespace ias {

// Integral over one cell [0, h] of the cubic Hermite interpolant through
// (f0, df0) and (f1, df1): the derivative-corrected trapezoid rule,
// 4th-order accurate on smooth integrands.
inline double corrected_trapezoid(double h, double f0, double f1, double df0, double df1) {
    return 0.5 * h * (f0 + f1) + (h * h / 12.0) * (df0 - df1);
}

// Integral over [a, b] of the quadratic through (t0,f0), (t1,f1), (t2,f2).
// Evaluated in coordinates local to `a` to stay well conditioned.
double quadratic_cell_integral(double a, double b, double t0, double f0, double t1, double f1,
                               double t2, double f2);

// Cumulative integral of samples (ts, fs) with a per-cell quadratic stencil.
// `piece` assigns each cell j (between ts[j] and ts[j+1]) a smoothness-piece
// id; the 3-point stencil is chosen from the same piece when possible so it
// never straddles an integrand kink (noise-cell boundaries). Returns
// cumulative values aligned with ts.
std::vector<double> cumulative_quadratic(const std::vector<double>& ts,
                                         const std::vector<double>& fs,
                                         const std::vector<int>& piece);

}  // namespace ias

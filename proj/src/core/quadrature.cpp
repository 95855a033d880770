#include "quadrature.hpp"

#include <stdexcept>

namespace ias {

double quadratic_cell_integral(double a, double b, double t0, double f0, double t1, double f1,
                               double t2, double f2) {
    const double s0 = t0 - a, s1 = t1 - a, s2 = t2 - a;
    const double L = b - a;
    // integral over [0, L] of (u - p)(u - q)
    auto ipq = [L](double p, double q) {
        return L * L * L / 3.0 - (p + q) * L * L / 2.0 + p * q * L;
    };
    const double w0 = ipq(s1, s2) / ((s0 - s1) * (s0 - s2));
    const double w1 = ipq(s0, s2) / ((s1 - s0) * (s1 - s2));
    const double w2 = ipq(s0, s1) / ((s2 - s0) * (s2 - s1));
    return w0 * f0 + w1 * f1 + w2 * f2;
}

std::vector<double> cumulative_quadratic(const std::vector<double>& ts,
                                         const std::vector<double>& fs,
                                         const std::vector<int>& piece) {
    const std::size_t n = ts.size();
    if (fs.size() != n || (n > 1 && piece.size() != n - 1)) {
        throw std::invalid_argument("cumulative_quadratic: size mismatch");
    }
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * (ts[1] - ts[0]) * (fs[0] + fs[1]);
        return out;
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (ts[j + 1] <= ts[j]) {  // zero-width cell (duplicated sample time)
            out[j + 1] = out[j];
            continue;
        }
        const int pc = piece[j];
        const bool next_ok = (j + 2 < n) && piece[j + 1] == pc;
        const bool prev_ok = (j >= 1) && piece[j - 1] == pc;
        std::size_t i0;
        if (next_ok) {
            i0 = j;
        } else if (prev_ok) {
            i0 = j - 1;
        } else if (j + 2 < n) {
            i0 = j;
        } else {
            i0 = j - 1;
        }
        out[j + 1] = out[j] + quadratic_cell_integral(ts[j], ts[j + 1], ts[i0], fs[i0],
                                                      ts[i0 + 1], fs[i0 + 1], ts[i0 + 2],
                                                      fs[i0 + 2]);
    }
    return out;
}

}  // namespace ias

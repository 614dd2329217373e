#pragma once

#include <cmath>
#include <span>

#include "nlslab/special.hpp"

namespace nlslab {

/*
 * σ_N ∫_0^R r^{N-1} g(r) dr for g sampled on the uniform grid r_j = j h.
 *
 * Composite trapezoid on f = r^{N-1} g.  For g even in r the Euler–Maclaurin
 * endpoint term at r = 0 vanishes except for N = 2, where f'(0) = g(0) and the
 * h^2/12 correction is applied.  The outer end is assumed decayed.
 */
inline double radial_integral(std::span<const double> g, double h, int N) {
    if (g.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 1; j < g.size(); ++j) {
        const double r = h * static_cast<double>(j);
        const double w = (N == 1) ? 1.0 : std::pow(r, N - 1);
        sum += w * g[j];
    }
    if (N == 1) sum += 0.5 * g[0];
    // last sample carries half weight
    const double r_last = h * static_cast<double>(g.size() - 1);
    const double w_last = (N == 1) ? 1.0 : std::pow(r_last, N - 1);
    if (g.size() > 1) sum -= 0.5 * w_last * g.back();
    double integral = h * sum;
    if (N == 2) integral += h * h / 12.0 * g[0];
    return sphere_area(N) * integral;
}

}  // namespace nlslab

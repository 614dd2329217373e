#pragma once

#include <cmath>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

/// Nonlinearity exponent p and dimension N of i u_t + Δu + |u|^{p-1} u = 0,
/// together with the scaling exponents derived from them.
struct EquationParams {
    double p = 0.0;
    int N = 0;
    double s_c = 0.0;    ///< critical Sobolev index N/2 - 2/(p-1)
    double k = 0.0;      ///< barrier exponent (p-1) s_c / 2
    double A = 0.0;      ///< 2 (N (p-1) - 4)
    double kappa = 0.0;  ///< mass exponent in the sharp GN inequality
    bool well_posed = true;

    bool energy_critical() const { return s_c == 1.0; }
    bool energy_subcritical() const { return s_c < 1.0; }

    /// 4 / (N (p-1)), the exponent on ∫|u|^{p+1} in the renormalised GN inequality.
    double gn_exponent() const { return 4.0 / (N * (p - 1.0)); }

    /// Exponent of alpha in the scale-invariant Gaussian amplitude beta / alpha^{1/(p-1)}.
    double gaussian_scaling_exponent() const { return 1.0 / (p - 1.0); }
};

namespace detail {

// s_c values this close to 1 (or kappa close to 0) are snapped so that the
// energy-critical branch is selected for p = (N+2)/(N-2) given in floating point.
inline constexpr double critical_snap = 1e-12;

inline bool local_wellposedness_holds(double p, int N) {
    if (std::abs(p - std::round(p)) < 1e-12 && static_cast<long>(std::round(p)) % 2 == 1) {
        return true;
    }
    if (N <= 7) return true;
    const double disc = static_cast<double>(N) * N - 4.0 * N - 28.0;
    return p > (N + 2.0 + std::sqrt(disc)) / 4.0;
}

}  // namespace detail

/// Builds the parameter record; rejects the mass-(sub)critical range s_c <= 0.
inline EquationParams make_params(double p, int N) {
    if (!std::isfinite(p) || p <= 1.0) {
        throw MalformedInput("make_params: nonlinearity p must be a finite number > 1");
    }
    if (N < 1) {
        throw MalformedInput("make_params: dimension N must be >= 1");
    }
    EquationParams e;
    e.p = p;
    e.N = N;
    e.s_c = 0.5 * N - 2.0 / (p - 1.0);
    if (std::abs(e.s_c - 1.0) < detail::critical_snap) e.s_c = 1.0;
    if (e.s_c <= 0.0 || std::abs(e.s_c) < detail::critical_snap) {
        throw OutOfRegime("make_params: s_c = " + std::to_string(e.s_c) +
                          " <= 0; need p > 1 + 4/N");
    }
    e.k = 0.5 * (p - 1.0) * e.s_c;
    e.A = 2.0 * (N * (p - 1.0) - 4.0);
    e.kappa = e.s_c == 1.0 ? 0.0 : 2.0 * (p + 1.0) / (N * (p - 1.0)) - 1.0;
    e.well_posed = e.s_c <= 1.0 || detail::local_wellposedness_holds(p, N);
    return e;
}

/// The energy-critical exponent (N+2)/(N-2), N >= 3.
inline double critical_exponent(int N) {
    if (N < 3) throw DomainError("critical_exponent: needs N >= 3");
    return (N + 2.0) / (N - 2.0);
}

}  // namespace nlslab

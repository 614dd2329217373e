#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "nlslab/error.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/params.hpp"
#include "nlslab/special.hpp"

namespace nlslab {

/// Exponent N(p-1)/2 + (p+1) carried by C_{p,N} in the mass/variance/L^{p+1} interpolation.
inline double interpolation_exponent(double p, int N) { return 0.5 * N * (p - 1.0) + (p + 1.0); }

/*
 * Sharp constant C_{p,N} in
 *     ||u||_2 <= C ( ||x u||_2^{N(p-1)/2} ||u||_{p+1}^{p+1} )^{1/(N(p-1)/2 + p + 1)}.
 * Valid for every p > 1; evaluated in log form so large N does not overflow.
 */
inline double interpolation_constant(double p, int N) {
    if (!(p > 1.0) || N < 1) throw MalformedInput("interpolation_constant: need p > 1, N >= 1");
    const double n = N;
    const double q = (p + 1.0) / (p - 1.0);
    const double log_pow = std::log(n / (2.0 * std::numbers::pi)) + std::log((p - 1.0) / (p + 1.0)) +
                           (n * (p - 1.0) / 4.0 + 1.0) *
                               std::log(std::numbers::pi * (1.0 + 2.0 * (p + 1.0) / (n * (p - 1.0)))) +
                           0.5 * (p - 1.0) * (log_gamma_fn(q) - log_gamma_fn(q + n / 2.0));
    return std::exp(log_pow / interpolation_exponent(p, N));
}

inline double interpolation_constant(const EquationParams& params) {
    return interpolation_constant(params.p, params.N);
}

/// (∫_{|y|<=1} (1-|y|^2)^{(p+1)/(p-1)} dy)^{(p-1)/(p+1)}.
inline double plateau_constant_D(double p, int N) {
    if (!(p > 1.0) || N < 1) throw MalformedInput("plateau_constant_D: need p > 1, N >= 1");
    const double a = 2.0 * p / (p - 1.0);
    const double log_inner =
        0.5 * N * std::log(std::numbers::pi) + log_gamma_fn(a) - log_gamma_fn(a + 0.5 * N);
    return std::exp((p - 1.0) / (p + 1.0) * log_inner);
}

inline double plateau_constant_D(const EquationParams& params) {
    return plateau_constant_D(params.p, params.N);
}

/// Best constant C_N of the Sobolev inequality ||f||_{2N/(N-2)} <= C_N ||∇f||_2.
inline double sobolev_best_constant(int N) {
    if (N < 3) throw DomainError("sobolev_best_constant: needs N >= 3");
    const double n = N;
    return std::pow(n * (n - 2.0) * std::numbers::pi, -0.5) * std::pow(gamma_fn(n) / gamma_fn(n / 2.0), 1.0 / n);
}

/// c_Q as the quotient (∫Q^{p+1})^{4/(N(p-1))} / (M[Q]^κ ∫|∇Q|^2) attained by the
/// ground state; accepts the mass-critical case s_c = 0 as well.
inline double gn_quotient(double p, int N, const GroundStateData& gs) {
    const double ex = 4.0 / (N * (p - 1.0));
    const double kappa = 2.0 * (p + 1.0) / (N * (p - 1.0)) - 1.0;
    const double mass_factor = std::abs(kappa) < 1e-12 ? 1.0 : std::pow(gs.mass(), kappa);
    return std::pow(gs.lp1, ex) / (mass_factor * gs.grad_sq);
}

struct SharpConstants {
    double c_gn = 0.0;  ///< ∫|f|^{p+1} <= c_gn ||∇f||^{N(p-1)/2} ||f||^{2-(N-2)(p-1)/2}
    double c_Q = 0.0;   ///< (∫|f|^{p+1})^{4/(N(p-1))} <= c_Q M^κ ∫|∇f|^2
    double C_pN = 0.0;
    double D_pN = 0.0;
    std::optional<double> E_W;       ///< s_c = 1 only
    std::optional<double> gradW_sq;  ///< s_c = 1 only
};

/*
 * Gagliardo–Nirenberg constant from the ground state, computed both from the
 * quotient attained by Q and from the Pohozaev-reduced energy expression.
 * For s_c > 1 no GN inequality exists and only C_pN, D_pN are filled.
 */
inline SharpConstants gn_constant(const EquationParams& params, const std::optional<GroundStateData>& gs,
                                  double rel_tol = 1e-6) {
    SharpConstants sc;
    sc.C_pN = interpolation_constant(params);
    sc.D_pN = plateau_constant_D(params);
    if (params.s_c > 1.0) return sc;
    if (!gs) throw NotApplicable("gn_constant: ground state required for 0 < s_c <= 1");

    const double p = params.p;
    const int N = params.N;
    const double ex = params.gn_exponent();
    const double mass_factor = params.energy_critical() ? 1.0 : std::pow(gs->mass(), params.kappa);
    const double quotient = gn_quotient(p, N, *gs);
    const double via_energy = std::pow(8.0 * (p + 1.0) / params.A, ex) * (params.s_c / N) *
                              std::pow(gs->energy, ex - 1.0) / mass_factor;
    if (std::abs(quotient - via_energy) > rel_tol * std::abs(quotient)) {
        throw InconsistencyError("gn_constant: the two c_Q expressions disagree beyond tolerance");
    }
    sc.c_Q = quotient;
    sc.c_gn = std::pow(quotient, N * (p - 1.0) / 4.0);
    if (params.energy_critical()) {
        sc.E_W = gs->energy;
        sc.gradW_sq = gs->grad_sq;
    }
    return sc;
}

}  // namespace nlslab

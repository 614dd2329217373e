#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include "nlslab/context.hpp"
#include "nlslab/criteria.hpp"
#include "nlslab/error.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/roots.hpp"
#include "nlslab/special.hpp"

namespace nlslab {

// For the real Gaussian β e^{-α|x|^2/2} every scale-invariant quantity depends on
// κ = β / α^{1/(p-1)} only, so each threshold is a root in κ at α = 1.

/// κ above which the Gaussian has negative energy.
inline double gaussian_energy_zero_threshold(const EquationParams& e) {
    const double p = e.p, n = e.N;
    return std::pow(0.25 * n * (p + 1.0) * std::pow(0.5 * (p + 1.0), 0.5 * n), 1.0 / (p - 1.0));
}

namespace detail {

/// Root of a function that changes sign once on (0, κ_E0).
inline double kappa_root_below_zero_energy(const EquationParams& e, const std::function<double(double)>& h) {
    const double top = gaussian_energy_zero_threshold(e);
    const double lo = top * 1e-6, hi = top * (1.0 - 1e-12);
    if (h(lo) * h(hi) > 0.0) throw NonConvergence("kappa threshold: no sign change below the zero-energy level");
    return brent(h, lo, hi, 1e-15, 1e-14).root;
}

}  // namespace detail

/// Two positive roots of (N/4)κ^2 - ½((N-2)/N)^{(N+2)/2} κ^{2N/(N-2)} - N^{(N-2)/2}(N-2)^{N/2} Γ(N/2)/Γ(N):
/// the energy-critical Gaussian has E > E[W] exactly for κ between them.
inline std::pair<double, double> kappa_energy_roots(int N) {
    if (N < 3) throw DomainError("kappa_energy_roots: needs N >= 3");
    const double n = N;
    const double c2 = 0.5 * std::pow((n - 2.0) / n, 0.5 * (n + 2.0));
    const double q = 2.0 * n / (n - 2.0);
    const double c0 = std::pow(n, 0.5 * (n - 2.0)) * std::pow(n - 2.0, 0.5 * n) * gamma_fn(0.5 * n) / gamma_fn(n);
    auto F = [&](double k) { return 0.25 * n * k * k - c2 * std::pow(k, q) - c0; };
    // F'(κ) = 0 at κ^{q-2} = (N/2) / (q c2)
    const double kstar = std::pow(0.5 * n / (q * c2), 1.0 / (q - 2.0));
    if (!(F(kstar) > 0.0)) throw NonConvergence("kappa_energy_roots: maximum is not positive");
    double hi = 2.0 * kstar;
    while (F(hi) > 0.0) hi *= 2.0;
    const double ks = brent(F, kstar * 1e-6, kstar, 1e-15, 1e-12 * c0).root;
    const double kb = brent(F, kstar, hi, 1e-15, 1e-12 * c0).root;
    return {ks, kb};
}

struct GaussianBlowupThresholds {
    double kappa_T1 = 0.0;  ///< uncertainty-based variance barrier fires for κ > kappa_T1
    double kappa_T2 = 0.0;  ///< interpolation-based variance barrier fires for κ > kappa_T2
};

/// κ thresholds of the two variance-barrier criteria on real Gaussians.
inline GaussianBlowupThresholds gaussian_blowup_thresholds(const EquationParams& e, double C_pN) {
    GaussianBlowupThresholds t;
    t.kappa_T1 = detail::kappa_root_below_zero_energy(
        e, [&](double k) { return uncertainty_variance_ratio(gaussian_functionals(1.0, k, e), e) - 1.0; });
    t.kappa_T2 = detail::kappa_root_below_zero_energy(
        e, [&](double k) { return interpolation_variance_ratio(gaussian_functionals(1.0, k, e), e, C_pN) - 1.0; });
    return t;
}

inline GaussianBlowupThresholds gaussian_blowup_thresholds(const EquationParams& e) {
    return gaussian_blowup_thresholds(e, interpolation_constant(e));
}

struct GaussianThresholdRoots {
    std::optional<double> kappa_s;  ///< ME = 1 on the small-κ side
    std::optional<double> kappa_b;  ///< ME = 1 on the large-κ side
    double kappa_renorm = 0.0;      ///< renormalised L^{p+1} quantity equals its ground-state value
    double kappa_peak = 0.0;        ///< location of the largest ME
    double peak_mass_energy = 0.0;
};

/// Mass-energy and L^{p+1} threshold crossings of the real Gaussian (0 < s_c <= 1).
inline GaussianThresholdRoots gaussian_threshold_roots(const ParamsContext& ctx) {
    detail::require_threshold_regime(ctx, "gaussian_threshold_roots");
    const auto& e = ctx.params;
    const double top = gaussian_energy_zero_threshold(e);
    auto me = [&](double k) {
        const auto f = gaussian_functionals(1.0, k, e);
        const auto& gs = *ctx.gs;
        if (e.energy_critical()) return f.energy / gs.energy;
        const double s = e.s_c;
        return std::pow(f.mass / gs.mass(), (1.0 - s) / s) * f.energy / gs.energy;
    };
    // golden-section search for the single maximum on (0, κ_E0)
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = top;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    while (b - a > 1e-13 * top) {
        if (me(c) > me(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    GaussianThresholdRoots out;
    out.kappa_peak = 0.5 * (a + b);
    out.peak_mass_energy = me(out.kappa_peak);
    auto h = [&](double k) { return me(k) - 1.0; };
    if (out.peak_mass_energy > 1.0) {
        out.kappa_s = brent(h, top * 1e-8, out.kappa_peak, 1e-15, 1e-14).root;
        out.kappa_b = brent(h, out.kappa_peak, top, 1e-15, 1e-14).root;
    }
    auto ren = [&](double k) {
        Functionals f = gaussian_functionals(1.0, k, e);
        const auto& gs = *ctx.gs;
        const double s = e.s_c;
        const double mfac = e.energy_critical() ? 1.0 : std::pow(f.mass / gs.mass(), 1.0 - s);
        return mfac * std::pow(f.lp1 / gs.lp1, s) - 1.0;
    };
    double hi = top;
    while (ren(hi) < 0.0) hi *= 2.0;
    out.kappa_renorm = brent(ren, top * 1e-8, hi, 1e-15, 1e-14).root;
    return out;
}

}  // namespace nlslab

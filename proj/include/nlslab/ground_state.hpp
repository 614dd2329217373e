#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "nlslab/error.hpp"
#include "nlslab/ode.hpp"
#include "nlslab/params.hpp"
#include "nlslab/quadrature.hpp"
#include "nlslab/special.hpp"

namespace nlslab {

enum class GroundStateKind { ClosedFormW, Shot1D, ShotRadial };

/// Radial ground state Q of ΔQ - (1 - s_c) Q + Q^p = 0 (or the explicit W when
/// s_c = 1) with its integral quantities.
struct GroundStateData {
    GroundStateKind kind = GroundStateKind::ShotRadial;
    int N = 0;
    double p = 0.0;
    double peak = 0.0;  ///< Q(0)
    double step = 0.0;  ///< grid spacing of the sampled profile

    // Sampled profile on r_j = j * step (empty for the closed-form W).
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<double> derivs;

    double lp1 = 0.0;      ///< ∫ Q^{p+1}
    double grad_sq = 0.0;  ///< ∫ |∇Q|^2
    double energy = 0.0;
    std::optional<double> mass_value;      ///< undefined for W when N <= 4
    std::optional<double> variance_value;  ///< ∫ |x|^2 Q^2, undefined for W when N <= 6

    double mass() const {
        if (!mass_value) throw NotApplicable("ground state mass is infinite (W not in L^2 for N <= 4)");
        return *mass_value;
    }
    double variance() const {
        if (!variance_value) throw NotApplicable("ground state variance is infinite (xW not in L^2 for N <= 6)");
        return *variance_value;
    }

    double outer_radius() const { return radii.empty() ? 0.0 : radii.back(); }

    /// Q(r); cubic Hermite between samples, 0 beyond the sampled range.
    double value_at(double r) const {
        r = std::abs(r);
        if (kind == GroundStateKind::ClosedFormW) {
            return std::pow(1.0 + r * r / (N * (N - 2.0)), -(N - 2.0) / 2.0);
        }
        if (radii.empty() || r >= radii.back()) return 0.0;
        const auto j = static_cast<std::size_t>(r / step);
        const double t = (r - radii[j]) / step;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        return h00 * values[j] + h10 * step * derivs[j] + h01 * values[j + 1] + h11 * step * derivs[j + 1];
    }
};

/// ∫|∇W|^2 and E[W] for the explicit energy-critical ground state.
struct SobolevWQuantities {
    double grad_sq;
    double energy;
};

inline SobolevWQuantities sobolev_W_quantities(int N) {
    if (N < 3) throw DomainError("sobolev_W_quantities: needs N >= 3");
    const double n = N;
    const double grad = std::pow(n * (n - 2.0) * std::numbers::pi, n / 2.0) * gamma_fn(n / 2.0) / gamma_fn(n);
    return {grad, grad / n};
}

/// Closed-form data for W = (1 + |x|^2 / (N(N-2)))^{-(N-2)/2}.
inline GroundStateData closed_form_W(int N) {
    const auto q = sobolev_W_quantities(N);
    GroundStateData g;
    g.kind = GroundStateKind::ClosedFormW;
    g.N = N;
    g.p = critical_exponent(N);
    g.peak = 1.0;
    g.grad_sq = q.grad_sq;
    g.lp1 = q.grad_sq;  // ∫|∇W|^2 = ∫W^{2N/(N-2)}
    g.energy = q.energy;
    const double n = N;
    const double scale = std::pow(n * (n - 2.0), n / 2.0) * sphere_area(N) / 2.0;
    // ∫_0^∞ t^{2a-1} (1+t^2)^{-(a+b)} dt = B(a, b) / 2
    if (N >= 5) g.mass_value = scale * beta_fn(n / 2.0, (n - 4.0) / 2.0);
    if (N >= 7) g.variance_value = scale * n * (n - 2.0) * beta_fn((n + 2.0) / 2.0, (n - 6.0) / 2.0);
    return g;
}

struct ShootingOptions {
    double tol = 1e-10;         ///< required relative bracket width on Q(0)
    double step = 2e-3;         ///< output grid spacing
    double tail_floor = 1e-11;  ///< profile is extended until Q < tail_floor * Q(0)
    double match_rel = 1e-6;    ///< divergence of the bracketing shots that ends the trusted core
    int max_iter = 300;
};

namespace detail {

struct RadialOde {
    int N;
    double p;
    double mu2;
    std::array<double, 2> operator()(double r, const std::array<double, 2>& y) const {
        const double q = y[0];
        const double nl = std::pow(std::abs(q), p - 1.0) * q;
        if (r == 0.0) return {y[1], (mu2 * q - nl) / N};
        return {y[1], -(N - 1.0) / r * y[1] + mu2 * q - nl};
    }
};

enum class Shot { Overshoot, Undershoot };

inline Shot classify_shot(const RadialOde& ode, double q0, double r_max) {
    DormandPrince<2> dp(1e-13, 1e-300);
    std::array<double, 2> y{q0, 0.0};
    double r = 0.0, h = 1e-3;
    const double chunk = 0.02;
    while (r < r_max) {
        dp.advance(ode, r, y, r + chunk, h);
        if (y[0] < 0.0) return Shot::Overshoot;
        if (y[1] > 0.0) return Shot::Undershoot;
    }
    return Shot::Undershoot;
}

// Samples the shot from q0 on r_j = j * step up to (and including) r_end.
inline void sample_shot(const RadialOde& ode, double q0, double step, std::size_t count,
                        std::vector<double>& vals, std::vector<double>& ders) {
    DormandPrince<2> dp(1e-13, 1e-300);
    std::array<double, 2> y{q0, 0.0};
    double r = 0.0, h = step;
    vals.assign(count, 0.0);
    ders.assign(count, 0.0);
    vals[0] = q0;
    for (std::size_t j = 1; j < count; ++j) {
        dp.advance(ode, r, y, step * static_cast<double>(j), h);
        vals[j] = y[0];
        ders[j] = y[1];
        if (!std::isfinite(y[0]) || std::abs(y[0]) > 10.0 * q0) {
            for (std::size_t i = j + 1; i < count; ++i) vals[i] = ders[i] = y[0];
            return;
        }
    }
}

}  // namespace detail

/*
 * Ground state by shooting on Q(0).
 *
 * Q(0) is bisected between an undershooting shot (Q' turns positive while
 * Q > 0) and an overshooting one (Q crosses zero) down to floating-point
 * resolution.  The profile is trusted until the two final bracketing shots
 * separate by match_rel relative to Q; beyond that point the decaying solution
 * r^{-ν} K_ν(μ r), ν = (N-2)/2, μ = sqrt(1 - s_c), of the linearised equation
 * is matched in amplitude.
 */
inline GroundStateData shoot_ground_state(double p, int N, const ShootingOptions& opt = {}) {
    if (!(p > 1.0) || N < 1) throw MalformedInput("shoot_ground_state: need p > 1, N >= 1");
    const double s_c = 0.5 * N - 2.0 / (p - 1.0);
    if (!(s_c > -1e-12 && s_c < 1.0 - 1e-12)) {
        throw OutOfRegime("shoot_ground_state: requires 0 <= s_c < 1");
    }
    const double mu2 = 1.0 - std::max(s_c, 0.0);
    const double mu = std::sqrt(mu2);
    const detail::RadialOde ode{N, p, mu2};
    const double r_max = 60.0 / mu + 2.0 * N;

    double lo = std::pow(mu2, 1.0 / (p - 1.0));  // constant solution: never crosses zero
    double hi = 1.5 * lo;
    int scans = 0;
    while (detail::classify_shot(ode, hi, r_max) != detail::Shot::Overshoot) {
        lo = hi;
        hi *= 1.5;
        if (++scans > 80) throw NonConvergence("shoot_ground_state: no overshooting Q(0) found");
    }
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (detail::classify_shot(ode, mid, r_max) == detail::Shot::Overshoot) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if (hi - lo > opt.tol * hi) {
        throw NonConvergence("shoot_ground_state: bracket did not shrink below tol within iteration cap");
    }

    const double step = opt.step;
    const auto count = static_cast<std::size_t>(std::ceil(r_max / step)) + 1;
    std::vector<double> v_lo, d_lo, v_hi, d_hi;
    detail::sample_shot(ode, lo, step, count, v_lo, d_lo);
    detail::sample_shot(ode, hi, step, count, v_hi, d_hi);

    std::size_t match = 1;
    while (match + 1 < count) {
        const double mid = 0.5 * (v_lo[match] + v_hi[match]);
        if (mid <= 0.0 || std::abs(v_hi[match] - v_lo[match]) > opt.match_rel * mid) break;
        ++match;
    }
    match = std::max<std::size_t>(match > 10 ? match - 10 : 1, 1);
    if (0.5 * (v_lo[match] + v_hi[match]) > 1e-2 * lo) {
        throw NonConvergence("shoot_ground_state: shots diverge before the profile has decayed");
    }

    const double nu = (N - 2.0) / 2.0;
    const double r_m = step * static_cast<double>(match);
    const double q_m = 0.5 * (v_lo[match] + v_hi[match]);
    const double k_m = boost::math::cyl_bessel_k(nu, mu * r_m);
    auto tail_value = [&](double r) {
        return q_m * std::pow(r_m / r, nu) * boost::math::cyl_bessel_k(nu, mu * r) / k_m;
    };
    auto tail_deriv = [&](double r) {
        return -mu * q_m * std::pow(r_m / r, nu) * boost::math::cyl_bessel_k(nu + 1.0, mu * r) / k_m;
    };

    GroundStateData g;
    g.kind = N == 1 ? GroundStateKind::Shot1D : GroundStateKind::ShotRadial;
    g.N = N;
    g.p = p;
    g.peak = 0.5 * (lo + hi);
    g.step = step;
    for (std::size_t j = 0; j <= match; ++j) {
        g.radii.push_back(step * static_cast<double>(j));
        g.values.push_back(0.5 * (v_lo[j] + v_hi[j]));
        g.derivs.push_back(0.5 * (d_lo[j] + d_hi[j]));
    }
    for (std::size_t j = match + 1;; ++j) {
        const double r = step * static_cast<double>(j);
        const double q = tail_value(r);
        g.radii.push_back(r);
        g.values.push_back(q);
        g.derivs.push_back(tail_deriv(r));
        if (q < opt.tail_floor * g.peak) break;
        if (j > 50 * count) throw NonConvergence("shoot_ground_state: tail does not decay");
    }

    const std::size_t n = g.values.size();
    std::vector<double> q2(n), qp(n), dq2(n), xq2(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double q = g.values[j];
        q2[j] = q * q;
        qp[j] = std::pow(q, p + 1.0);
        dq2[j] = g.derivs[j] * g.derivs[j];
        xq2[j] = g.radii[j] * g.radii[j] * q2[j];
    }
    // exponential tail closure beyond the last sample: ∫_R^∞ f ≈ f(R) / rate
    const double R = g.radii.back();
    const double wR = sphere_area(N) * std::pow(R, N - 1);
    g.mass_value = radial_integral(q2, step, N) + wR * q2.back() / (2 * mu);
    g.lp1 = radial_integral(qp, step, N) + wR * qp.back() / ((p + 1) * mu);
    g.grad_sq = radial_integral(dq2, step, N) + wR * dq2.back() / (2 * mu);
    g.variance_value = radial_integral(xq2, step, N) + wR * xq2.back() / (2 * mu);
    g.energy = 0.5 * g.grad_sq - g.lp1 / (p + 1.0);
    return g;
}

inline GroundStateData shoot_ground_state(const EquationParams& params, const ShootingOptions& opt) {
    if (!(params.s_c > 0.0 && params.s_c < 1.0)) {
        throw OutOfRegime("shoot_ground_state: requires 0 < s_c < 1");
    }
    return shoot_ground_state(params.p, params.N, opt);
}

inline GroundStateData shoot_ground_state(const EquationParams& params, double tol = 1e-10) {
    ShootingOptions opt;
    opt.tol = tol;
    return shoot_ground_state(params, opt);
}

/// Ground state for the parameter regime: shot Q for 0 < s_c < 1, explicit W for s_c = 1.
inline GroundStateData ground_state_for(const EquationParams& params) {
    if (params.energy_critical()) return closed_form_W(params.N);
    return shoot_ground_state(params);
}

}  // namespace nlslab

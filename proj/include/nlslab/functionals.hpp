#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nlslab/context.hpp"
#include "nlslab/error.hpp"
#include "nlslab/field.hpp"
#include "nlslab/quadrature.hpp"

namespace nlslab {

/// β e^{-α |x|^2 / 2}
struct Gaussian {
    double alpha = 1.0;
    double beta = 1.0;
};

/// λ^{2/(p-1)} Q(λ x), with Q the context's ground state (W when s_c = 1).
struct GroundStateScaled {
    double scale = 1.0;
};

struct GridData {
    FieldGrid field;
};

/// An initial datum, optionally multiplied by e^{iγ |x|^2}.
struct InitialData {
    std::variant<Gaussian, GroundStateScaled, GridData> shape;
    double phase_gamma = 0.0;
    bool radial = true;

    static InitialData gaussian(double alpha, double beta, double gamma = 0.0) {
        if (!(alpha > 0.0) || !(beta > 0.0)) throw MalformedInput("gaussian data: alpha and beta must be > 0");
        return {Gaussian{alpha, beta}, gamma, true};
    }
    static InitialData ground_state(double scale = 1.0, double gamma = 0.0) {
        if (!(scale > 0.0)) throw MalformedInput("ground_state data: scale must be > 0");
        return {GroundStateScaled{scale}, gamma, true};
    }
    static InitialData grid(FieldGrid field) { return {GridData{std::move(field)}, 0.0, true}; }
};

/// Conserved and initial quantities of a datum.
struct Functionals {
    double mass = 0.0;
    double energy = 0.0;
    double variance = 0.0;       ///< ∫ |x|^2 |u|^2
    double variance_rate = 0.0;  ///< 4 Im ∫ x·∇u ū
    double lp1 = 0.0;            ///< ∫ |u|^{p+1}
    double grad_sq = 0.0;        ///< ∫ |∇u|^2
    std::vector<double> momentum;
    bool real_valued = true;
    bool radial = true;

    bool is_zero() const { return mass == 0.0 && lp1 == 0.0 && grad_sq == 0.0; }
};

inline double energy_of(double grad_sq, double lp1, double p) { return 0.5 * grad_sq - lp1 / (p + 1.0); }

/*
 * Multiplication by e^{iγ|x|^2}: mass, variance and ∫|u|^{p+1} are unchanged,
 *   V_t      -> V_t + 8 γ V
 *   ∫|∇u|^2  -> ∫|∇u|^2 + γ V_t + 4 γ^2 V
 * and E - V_t^2 / (32 V) is invariant.
 */
inline Functionals modulate_quadratic_phase(const Functionals& f, double gamma, double p) {
    if (gamma == 0.0) return f;
    if (!(f.variance > 0.0)) throw DomainError("modulate_quadratic_phase: needs positive variance");
    Functionals out = f;
    out.grad_sq = f.grad_sq + gamma * f.variance_rate + 4.0 * gamma * gamma * f.variance;
    out.variance_rate = f.variance_rate + 8.0 * gamma * f.variance;
    out.energy = energy_of(out.grad_sq, out.lp1, p);
    out.real_valued = false;
    return out;
}

inline Functionals modulate_quadratic_phase(const Functionals& f, double gamma, const ParamsContext& ctx) {
    return modulate_quadratic_phase(f, gamma, ctx.params.p);
}

/// Closed-form functionals of β e^{-α|x|^2/2}.
inline Functionals gaussian_functionals(double alpha, double beta, const EquationParams& params) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw MalformedInput("gaussian_functionals: alpha, beta must be > 0");
    const double n = params.N, p = params.p;
    const double pi = std::numbers::pi;
    Functionals f;
    f.mass = beta * beta * std::pow(pi / alpha, n / 2.0);
    f.variance = n * beta * beta * std::pow(pi, n / 2.0) / (2.0 * std::pow(alpha, n / 2.0 + 1.0));
    f.grad_sq = 0.5 * beta * beta * n * alpha * std::pow(pi / alpha, n / 2.0);
    f.lp1 = std::pow(beta, p + 1.0) * std::pow(2.0 * pi / ((p + 1.0) * alpha), n / 2.0);
    f.energy = energy_of(f.grad_sq, f.lp1, p);
    f.momentum.assign(params.N, 0.0);
    return f;
}

inline Functionals gaussian_functionals(double alpha, double beta, const ParamsContext& ctx) {
    return gaussian_functionals(alpha, beta, ctx.params);
}

/// Functionals of λ^{2/(p-1)} Q(λx) from the ground-state data.
inline Functionals ground_state_functionals(double scale, const ParamsContext& ctx) {
    if (!ctx.gs) throw NotApplicable("ground_state data: no ground state exists for s_c > 1");
    if (!(scale > 0.0)) throw MalformedInput("ground_state data: scale must be > 0");
    const auto& gs = *ctx.gs;
    const double p = ctx.params.p, n = ctx.params.N;
    const double a = 4.0 / (p - 1.0);
    Functionals f;
    f.mass = gs.mass() * std::pow(scale, a - n);
    f.variance = gs.variance() * std::pow(scale, a - n - 2.0);
    f.grad_sq = gs.grad_sq * std::pow(scale, a + 2.0 - n);
    f.lp1 = gs.lp1 * std::pow(scale, 2.0 * (p + 1.0) / (p - 1.0) - n);
    f.energy = energy_of(f.grad_sq, f.lp1, p);
    f.momentum.assign(ctx.params.N, 0.0);
    return f;
}

namespace detail {

// Radial derivative, fourth-order centred differences; u is even in r and
// treated as zero beyond the last sample.
inline std::vector<cplx> radial_derivative(const FieldGrid& field) {
    const auto& u = field.values();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    auto at = [&](std::ptrdiff_t j) -> cplx {
        if (j < 0) j = -j;
        return j < n ? u[static_cast<std::size_t>(j)] : cplx{};
    };
    std::vector<cplx> d(u.size());
    const double inv = 1.0 / (12.0 * field.step());
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        d[static_cast<std::size_t>(j)] = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) * inv;
    }
    return d;
}

inline Functionals raw_grid_functionals(const FieldGrid& field, double p) {
    const int N = field.dimension();
    const double h = field.step();
    const auto& r = field.radii();
    const auto& u = field.values();
    const auto du = radial_derivative(field);
    const std::size_t n = u.size();
    std::vector<double> m(n), v(n), vt(n), g(n), l(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a2 = std::norm(u[j]);
        m[j] = a2;
        v[j] = r[j] * r[j] * a2;
        vt[j] = r[j] * (du[j] * std::conj(u[j])).imag();
        g[j] = std::norm(du[j]);
        l[j] = std::pow(a2, 0.5 * (p + 1.0));
    }
    Functionals f;
    f.mass = radial_integral(m, h, N);
    f.variance = radial_integral(v, h, N);
    f.variance_rate = 4.0 * radial_integral(vt, h, N);
    f.grad_sq = radial_integral(g, h, N);
    f.lp1 = radial_integral(l, h, N);
    f.energy = energy_of(f.grad_sq, f.lp1, p);
    f.momentum.assign(N, 0.0);
    f.real_valued = field.is_real();
    return f;
}

inline bool differs(double a, double b, double scale, double tol) {
    return std::abs(a - b) > tol * std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

}  // namespace detail

/*
 * Functionals of a sampled radial field by trapezoid quadrature with weight
 * σ_N r^{N-1}. Halving the resolution must move every functional by less than
 * resolution_tol (relative to its natural scale) or ResolutionError is thrown.
 */
inline Functionals grid_functionals(const FieldGrid& field, double p, double resolution_tol = 1e-4) {
    const double peak = field.max_abs();
    if (peak > 0.0) {
        double tail = 0.0;
        const auto& u = field.values();
        for (std::size_t j = u.size() - std::min<std::size_t>(u.size(), 4); j < u.size(); ++j) {
            tail = std::max(tail, std::abs(u[j]));
        }
        if (tail > 1e-8 * peak) {
            throw MalformedInput("grid_functionals: field does not decay below 1e-8 of its peak at the outer radius");
        }
    }
    auto f = detail::raw_grid_functionals(field, p);
    if (resolution_tol > 0.0 && peak > 0.0 && field.size() >= 16) {
        const auto c = detail::raw_grid_functionals(field.coarsened(), p);
        const double e_scale = 0.5 * f.grad_sq + f.lp1 / (p + 1.0);
        const double vt_scale = 4.0 * std::sqrt(f.variance * f.grad_sq);
        const bool bad = detail::differs(f.mass, c.mass, 0.0, resolution_tol) ||
                         detail::differs(f.variance, c.variance, 0.0, resolution_tol) ||
                         detail::differs(f.grad_sq, c.grad_sq, 0.0, resolution_tol) ||
                         detail::differs(f.lp1, c.lp1, 0.0, resolution_tol) ||
                         detail::differs(f.energy, c.energy, e_scale, resolution_tol) ||
                         detail::differs(f.variance_rate, c.variance_rate, vt_scale, resolution_tol);
        if (bad) throw ResolutionError("grid_functionals: halving the resolution changes a functional by more than " +
                                       std::to_string(resolution_tol) + " (relative); refine the grid");
    }
    return f;
}

inline Functionals grid_functionals(const FieldGrid& field, const ParamsContext& ctx, double resolution_tol = 1e-4) {
    if (field.dimension() != ctx.params.N) throw MalformedInput("grid_functionals: grid dimension differs from N");
    return grid_functionals(field, ctx.params.p, resolution_tol);
}

/// Radius beyond which the datum is below 1e-8 of its peak (before phase).
inline double natural_outer_radius(const InitialData& data, const ParamsContext& ctx) {
    if (const auto* g = std::get_if<Gaussian>(&data.shape)) return 12.0 / std::sqrt(g->alpha);
    if (const auto* s = std::get_if<GroundStateScaled>(&data.shape)) {
        if (!ctx.gs) throw NotApplicable("ground_state data: no ground state exists for s_c > 1");
        if (ctx.gs->kind == GroundStateKind::ClosedFormW) {
            const double n = ctx.params.N;
            return std::sqrt(n * (n - 2.0)) * std::pow(1e8, 1.0 / (n - 2.0)) / s->scale;
        }
        return ctx.gs->outer_radius() / s->scale;
    }
    return std::get<GridData>(data.shape).field.outer_radius();
}

/// Samples a datum on a uniform radial grid (grids are returned as stored).
inline FieldGrid sample_initial_data(const InitialData& data, const ParamsContext& ctx, std::size_t points = 4096,
                                     double outer_radius = 0.0) {
    const int N = ctx.params.N;
    const double p = ctx.params.p;
    const double gamma = data.phase_gamma;
    if (const auto* grid = std::get_if<GridData>(&data.shape)) {
        return gamma == 0.0 ? grid->field : apply_quadratic_phase(grid->field, gamma);
    }
    const double R = outer_radius > 0.0 ? outer_radius : natural_outer_radius(data, ctx);
    if (const auto* g = std::get_if<Gaussian>(&data.shape)) {
        return sample_field(N, R, points, [&](double r) {
            return g->beta * std::exp(-0.5 * g->alpha * r * r) * std::polar(1.0, gamma * r * r);
        });
    }
    const auto& s = std::get<GroundStateScaled>(data.shape);
    if (!ctx.gs) throw NotApplicable("ground_state data: no ground state exists for s_c > 1");
    const double amp = std::pow(s.scale, 2.0 / (p - 1.0));
    return sample_field(N, R, points, [&](double r) {
        return amp * ctx.gs->value_at(s.scale * r) * std::polar(1.0, gamma * r * r);
    });
}

/// Functionals of any datum: closed forms for the analytic families, quadrature for grids.
inline Functionals evaluate_functionals(const InitialData& data, const ParamsContext& ctx) {
    Functionals f;
    if (const auto* g = std::get_if<Gaussian>(&data.shape)) {
        f = modulate_quadratic_phase(gaussian_functionals(g->alpha, g->beta, ctx), data.phase_gamma, ctx);
    } else if (const auto* s = std::get_if<GroundStateScaled>(&data.shape)) {
        f = modulate_quadratic_phase(ground_state_functionals(s->scale, ctx), data.phase_gamma, ctx);
    } else {
        const auto& field = std::get<GridData>(data.shape).field;
        const auto phased = data.phase_gamma == 0.0 ? field : apply_quadratic_phase(field, data.phase_gamma);
        f = grid_functionals(phased, ctx);
    }
    f.radial = data.radial;
    return f;
}

/// V ∫|∇u|^2 - (N^2/4) M^2 - (V_t/4)^2; nonnegative by the uncertainty principle.
inline double uncertainty_gap(const Functionals& f, int N) {
    if (!(f.variance > 0.0)) throw DomainError("uncertainty_gap: needs positive variance");
    const double q = f.variance_rate / 4.0;
    return f.variance * f.grad_sq - 0.25 * N * N * f.mass * f.mass - q * q;
}

/*
 * V [∫|∇f|^2 - (∫|f|^{p+1})^{4/(N(p-1))} / (c_Q M^κ)] - (Im ∫ x·∇f f̄)^2,
 * nonnegative by the sharp GN inequality applied to e^{iλ|x|^2} f; zero for
 * f = e^{iλ|x|^2} Q.
 */
inline double banica_gap(const Functionals& f, const ParamsContext& ctx) {
    if (ctx.params.s_c > 1.0) throw NotApplicable("banica_gap: no GN inequality for s_c > 1");
    if (f.is_zero()) return 0.0;
    const auto& e = ctx.params;
    const double mass_factor = e.energy_critical() ? 1.0 : std::pow(f.mass, e.kappa);
    const double im = f.variance_rate / 4.0;
    return f.variance * (f.grad_sq - std::pow(f.lp1, e.gn_exponent()) / (ctx.sharp.c_Q * mass_factor)) - im * im;
}

inline double banica_gap(const FieldGrid& field, const ParamsContext& ctx) {
    return banica_gap(grid_functionals(field, ctx), ctx);
}

/// Both sides of ||u||_2 <= C_{p,N} (||x u||_2^{N(p-1)/2} ||u||_{p+1}^{p+1})^{1/(N(p-1)/2+p+1)}.
struct InequalitySides {
    double lhs;
    double rhs;
    double margin() const { return rhs - lhs; }
};

inline InequalitySides interpolation_sides(const Functionals& f, double p, int N, double C_pN) {
    const double e = 0.5 * N * (p - 1.0) + (p + 1.0);
    const double inner = std::pow(f.variance, 0.25 * N * (p - 1.0)) * f.lp1;
    return {std::sqrt(f.mass), C_pN * std::pow(inner, 1.0 / e)};
}

}  // namespace nlslab

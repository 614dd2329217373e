#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "nlslab/context.hpp"
#include "nlslab/criteria.hpp"
#include "nlslab/error.hpp"
#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/special.hpp"

namespace nlslab {

enum class Scheme { StrangSplit, CrankNicolson };

struct SolverConfig {
    double outer_radius = 40.0;
    int points = 32768;
    double dt = 5e-3;          ///< largest step; the phase cap may shorten it
    double t_max = 5.0;
    Scheme scheme = Scheme::StrangSplit;
    double blowup_factor = 1e3;
    double absorbing_layer_width = 0.0;  ///< 0 disables the damping layer
    double absorbing_strength = 5.0;
    double output_dt = 0.02;
    double phase_cap = 0.02;   ///< max nonlinear phase |u|^{p-1} dt per step
    double nonlinearity = 1.0; ///< coefficient of |u|^{p-1}u; 0 gives the free equation
    long max_steps = 2'000'000;

    void validate() const {
        if (!(dt > 0.0) || !(t_max > 0.0) || !(output_dt > 0.0)) throw MalformedInput("solver: dt, t_max, output_dt must be > 0");
        if (points < 256) throw MalformedInput("solver: needs at least 256 grid points");
        if (!(blowup_factor > 10.0)) throw MalformedInput("solver: blowup_factor must exceed 10");
        if (!(outer_radius > 0.0)) throw MalformedInput("solver: outer_radius must be > 0");
        if (absorbing_layer_width < 0.0 || absorbing_layer_width >= outer_radius) {
            throw MalformedInput("solver: absorbing layer must fit inside the grid");
        }
        if (!(phase_cap > 0.0)) throw MalformedInput("solver: phase_cap must be > 0");
        if (max_steps < 1) throw MalformedInput("solver: max_steps must be positive");
    }
};

struct TrajectoryPoint {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double variance = 0.0;
    double variance_rate = 0.0;
    double grad_sq = 0.0;
    double lp1 = 0.0;
    double sup_amp = 0.0;
    double width = 0.0;  ///< radius where |u| first drops to half its peak
};

struct Trajectory {
    int N = 1;
    double p = 3.0;
    double step = 0.0;
    bool absorbing = false;
    double nonlinearity = 1.0;
    std::vector<TrajectoryPoint> points;
    std::optional<double> alarm_time;  ///< first time the peak width fell to 4 grid cells
    bool halted = false;               ///< stopped early by the blow-up monitor
    bool step_budget_exhausted = false;
    FieldGrid final_field;

    std::vector<double> times() const {
        std::vector<double> t;
        t.reserve(points.size());
        for (const auto& q : points) t.push_back(q.t);
        return t;
    }
};

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,mass,energy,variance,variance_rate,grad_sq,lp1,sup_amp\n";
    out.precision(10);
    for (const auto& q : traj.points) {
        out << q.t << ',' << q.mass << ',' << q.energy << ',' << q.variance << ',' << q.variance_rate << ','
            << q.grad_sq << ',' << q.lp1 << ',' << q.sup_amp << '\n';
    }
}

namespace detail {

/*
 * Finite-volume radial Laplacian on r_j = j h: cell j covers [r_{j-1/2}, r_{j+1/2}]
 * (cell 0 is [0, h/2]) with weight w_j = ∫ r^{N-1} dr / h, and the flux through
 * r_{j+1/2} carries r_{j+1/2}^{N-1}. The operator is symmetric for Σ w_j ū v, so
 * Crank–Nicolson conserves the discrete mass exactly. Dirichlet beyond the grid.
 */
class RadialOperator {
public:
    RadialOperator(int N, double h, std::size_t n) : N_(N), h_(h), w_(n), a_(n) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = j == 0 ? 0.0 : (j - 0.5) * h;
            const double hi = (j + 0.5) * h;
            w_[j] = (std::pow(hi, N) - std::pow(lo, N)) / (N * h);
            a_[j] = std::pow(hi, N - 1);
        }
    }

    std::size_t size() const { return w_.size(); }
    double weight(std::size_t j) const { return w_[j]; }
    double flux(std::size_t j) const { return a_[j]; }  ///< through r_{j+1/2}

    /// Off-diagonal/diagonal coefficients of L at row j: L u_j = lo u_{j-1} + di u_j + up u_{j+1}.
    void row(std::size_t j, double& lo, double& di, double& up) const {
        const double s = 1.0 / (w_[j] * h_ * h_);
        lo = j == 0 ? 0.0 : a_[j - 1] * s;
        up = j + 1 < w_.size() ? a_[j] * s : 0.0;
        di = -(a_[j] + (j == 0 ? 0.0 : a_[j - 1])) * s;
    }

private:
    int N_;
    double h_;
    std::vector<double> w_, a_;
};

/// Solves (I - i c L) x = rhs for a tridiagonal L by the Thomas algorithm.
inline void implicit_solve(const RadialOperator& L, double c, std::vector<cplx>& rhs, std::vector<cplx>& scratch) {
    const std::size_t n = L.size();
    scratch.resize(n);
    const cplx ic(0.0, c);
    double lo, di, up;
    L.row(0, lo, di, up);
    cplx b = 1.0 - ic * di;
    cplx cu = -ic * up;
    scratch[0] = cu / b;
    rhs[0] /= b;
    for (std::size_t j = 1; j < n; ++j) {
        L.row(j, lo, di, up);
        const cplx al = -ic * lo;
        b = (1.0 - ic * di) - al * scratch[j - 1];
        scratch[j] = (-ic * up) / b;
        rhs[j] = (rhs[j] - al * rhs[j - 1]) / b;
    }
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= scratch[j] * rhs[j + 1];
}

/// (I + i c L) u
inline void explicit_apply(const RadialOperator& L, double c, const std::vector<cplx>& u, std::vector<cplx>& out) {
    const std::size_t n = L.size();
    out.resize(n);
    const cplx ic(0.0, c);
    double lo, di, up;
    for (std::size_t j = 0; j < n; ++j) {
        L.row(j, lo, di, up);
        cplx Lu = di * u[j];
        if (j > 0) Lu += lo * u[j - 1];
        if (j + 1 < n) Lu += up * u[j + 1];
        out[j] = u[j] + ic * Lu;
    }
}

inline TrajectoryPoint discrete_diagnostics(const RadialOperator& L, const std::vector<cplx>& u, double h, int N,
                                            double p, double lambda, double t) {
    const double area = sphere_area(N);
    TrajectoryPoint q;
    q.t = t;
    const std::size_t n = u.size();
    double mass = 0.0, var = 0.0, lp1 = 0.0, grad = 0.0, rate = 0.0, sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = j * h;
        const double a2 = std::norm(u[j]);
        const double w = L.weight(j);
        mass += w * a2;
        var += w * r * r * a2;
        lp1 += w * std::pow(a2, 0.5 * (p + 1.0));
        sup = std::max(sup, std::sqrt(a2));
        if (j + 1 < n) {
            grad += L.flux(j) * std::norm(u[j + 1] - u[j]);
            rate += L.flux(j) * (j + 0.5) * h * std::imag(std::conj(u[j]) * u[j + 1]);
        } else {
            grad += L.flux(j) * a2;  // Dirichlet ghost
        }
    }
    q.mass = area * h * mass;
    q.variance = area * h * var;
    q.lp1 = area * h * lp1;
    q.grad_sq = area * grad / h;
    q.variance_rate = 4.0 * area * rate;
    q.energy = 0.5 * q.grad_sq - lambda * q.lp1 / (p + 1.0);
    q.sup_amp = sup;
    std::size_t peak = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(u[j]) == sup) {
            peak = j;
            break;
        }
    }
    std::size_t j = peak;
    while (j + 1 < n && std::abs(u[j]) > 0.5 * sup) ++j;
    q.width = std::max(1.0, static_cast<double>(j)) * h;
    return q;
}

}  // namespace detail

/*
 * Radial NLS integrator. Strang splitting: half nonlinear phase rotation, a
 * Crank–Nicolson step of the radial Laplacian, half rotation. The CrankNicolson
 * scheme instead treats the nonlinearity at the midpoint by fixed-point iteration.
 * For N = 1 the grid is the half-line and data are even, which is the full-line
 * problem restricted to even functions.
 */
inline Trajectory evolve_field(const FieldGrid& field, const SolverConfig& cfg, double p) {
    cfg.validate();
    const int N = field.dimension();
    const double h = field.step();
    const std::size_t n = field.size();
    const double lambda = cfg.nonlinearity;
    detail::RadialOperator L(N, h, n);
    std::vector<cplx> u = field.values();
    std::vector<cplx> rhs, scratch, prev;

    std::vector<double> damping;
    if (cfg.absorbing_layer_width > 0.0) {
        damping.assign(n, 0.0);
        const double r0 = field.outer_radius() - cfg.absorbing_layer_width;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = j * h;
            if (r > r0) {
                const double z = (r - r0) / cfg.absorbing_layer_width;
                damping[j] = cfg.absorbing_strength * z * z;
            }
        }
    }

    Trajectory traj;
    traj.N = N;
    traj.p = p;
    traj.step = h;
    traj.absorbing = !damping.empty();
    traj.nonlinearity = lambda;
    auto record = [&](double t) {
        traj.points.push_back(detail::discrete_diagnostics(L, u, h, N, p, lambda, t));
        return traj.points.back();
    };
    const auto first = record(0.0);
    const double m0 = first.mass;
    if (m0 == 0.0) {
        traj.final_field = field;
        return traj;
    }

    auto rotate = [&](double tau) {
        if (lambda == 0.0) return;
        for (auto& z : u) z *= std::polar(1.0, tau * lambda * std::pow(std::norm(z), 0.5 * (p - 1.0)));
    };

    double t = 0.0;
    double next_out = cfg.output_dt;
    double sup = first.sup_amp;
    const double eps = 1e-12 * cfg.output_dt;
    long steps = 0;
    while (t < cfg.t_max - eps) {
        if (++steps > cfg.max_steps) {
            record(t);
            traj.halted = true;
            traj.step_budget_exhausted = true;
            break;
        }
        double dt = cfg.dt;
        if (lambda != 0.0) dt = std::min(dt, cfg.phase_cap / (lambda * std::pow(sup, p - 1.0)));
        const double target = std::min(next_out, cfg.t_max);
        if (t + dt > target - eps) dt = target - t;

        if (cfg.scheme == Scheme::StrangSplit) {
            rotate(0.5 * dt);
            detail::explicit_apply(L, 0.5 * dt, u, rhs);
            detail::implicit_solve(L, 0.5 * dt, rhs, scratch);
            u.swap(rhs);
            rotate(0.5 * dt);
        } else {
            detail::explicit_apply(L, 0.5 * dt, u, prev);  // fixed part of the right side
            std::vector<cplx> guess = u;
            for (int it = 0; it < 50; ++it) {
                rhs = prev;
                if (lambda != 0.0) {
                    for (std::size_t j = 0; j < n; ++j) {
                        const cplx mid = 0.5 * (u[j] + guess[j]);
                        rhs[j] += cplx(0.0, dt * lambda) * std::pow(std::norm(mid), 0.5 * (p - 1.0)) * mid;
                    }
                }
                detail::implicit_solve(L, 0.5 * dt, rhs, scratch);
                double change = 0.0, size = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    change = std::max(change, std::abs(rhs[j] - guess[j]));
                    size = std::max(size, std::abs(rhs[j]));
                }
                guess.swap(rhs);
                if (change <= 1e-14 * size || lambda == 0.0) break;
            }
            u.swap(guess);
        }
        if (!damping.empty()) {
            for (std::size_t j = 0; j < n; ++j) {
                if (damping[j] > 0.0) u[j] *= std::exp(-damping[j] * dt);
            }
        }
        t += dt;

        sup = 0.0;
        for (const auto& z : u) sup = std::max(sup, std::abs(z));
        if (!std::isfinite(sup)) throw InstabilityError("solver: non-finite field");

        const bool at_output = t >= target - eps;
        // monitor the peak every step: collapse can outrun the output cadence
        if (at_output || sup > 1.25 * traj.points.back().sup_amp) {
            const auto q = record(t);
            if (at_output) next_out += cfg.output_dt;
            const bool alarm = q.width <= 4.0 * h;
            if (alarm && !traj.alarm_time) traj.alarm_time = t;
            if (!alarm && damping.empty() && std::abs(q.mass - m0) > 1e-3 * m0) {
                throw InstabilityError("solver: mass drift above 1e-3 without a blow-up alarm; reduce dt");
            }
            // past the alarm the peak is under-resolved and the step size collapses
            if (alarm) {
                traj.halted = true;
                break;
            }
        }
    }
    std::vector<double> radii(n);
    for (std::size_t j = 0; j < n; ++j) radii[j] = j * h;
    traj.final_field = FieldGrid(N, std::move(radii), std::move(u));
    return traj;
}

/*
 * Newton-polishes a sampled real profile into the solution of L P - mu P + P^p = 0
 * for the discrete operator, so the ground state is stationary for the grid and
 * not only for the continuum. Unstable ground states otherwise amplify the
 * O(h^2) sampling mismatch exponentially.
 */
inline std::vector<double> discrete_ground_state(const FieldGrid& guess, double p, double mu, double tol = 1e-14) {
    const std::size_t n = guess.size();
    const double h = guess.step();
    detail::RadialOperator L(guess.dimension(), h, n);
    std::vector<double> P(n), F(n), lo(n), di(n), up(n), c(n);
    for (std::size_t j = 0; j < n; ++j) P[j] = std::abs(guess.values()[j]);
    double last_change = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
        double change = 0.0, size = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double l, d, u;
            L.row(j, l, d, u);
            double LP = d * P[j];
            if (j > 0) LP += l * P[j - 1];
            if (j + 1 < n) LP += u * P[j + 1];
            F[j] = LP - mu * P[j] + std::pow(std::abs(P[j]), p - 1.0) * P[j];
            lo[j] = l;
            up[j] = u;
            di[j] = d - mu + p * std::pow(std::abs(P[j]), p - 1.0);
            size = std::max(size, std::abs(P[j]));
        }
        // tridiagonal solve J dP = F
        c[0] = up[0] / di[0];
        F[0] /= di[0];
        for (std::size_t j = 1; j < n; ++j) {
            const double b = di[j] - lo[j] * c[j - 1];
            c[j] = up[j] / b;
            F[j] = (F[j] - lo[j] * F[j - 1]) / b;
        }
        for (std::size_t j = n - 1; j-- > 0;) F[j] -= c[j] * F[j + 1];
        for (std::size_t j = 0; j < n; ++j) {
            P[j] -= F[j];
            change = std::max(change, std::abs(F[j]));
        }
        // stop at the round-off floor: tiny updates that no longer shrink
        if (change <= tol * size || (change <= 1e-10 * size && change >= last_change)) return P;
        last_change = change;
    }
    throw NonConvergence("discrete_ground_state: Newton iteration did not converge");
}

/*
 * Samples a datum for the solver. Ground-state data are replaced by the discrete
 * ground state of the same frequency; under the CrankNicolson scheme the profile
 * is also rescaled by 1/cos(θ/2), tan(θ/2) = mu dt/2, which makes it an exact
 * rotating solution of the midpoint step with step cfg.dt.
 */
inline FieldGrid solver_initial_field(const InitialData& init, const SolverConfig& cfg, const ParamsContext& ctx) {
    if (std::holds_alternative<GridData>(init.shape)) return sample_initial_data(init, ctx);
    const auto pts = static_cast<std::size_t>(cfg.points);
    if (const auto* gsd = std::get_if<GroundStateScaled>(&init.shape); gsd && cfg.nonlinearity == 1.0) {
        const double p = ctx.params.p;
        const double mu = gsd->scale * gsd->scale * (1.0 - ctx.params.s_c);
        const auto sampled = sample_initial_data(InitialData::ground_state(gsd->scale), ctx, pts, cfg.outer_radius);
        if (!(mu > 0.0)) return sample_initial_data(init, ctx, pts, cfg.outer_radius);
        auto P = discrete_ground_state(sampled, p, mu);
        if (cfg.scheme == Scheme::CrankNicolson) {
            const double t = 0.5 * mu * cfg.dt;
            for (auto& v : P) v *= std::sqrt(1.0 + t * t);
        }
        std::vector<cplx> vals(P.size());
        for (std::size_t j = 0; j < P.size(); ++j) {
            const double r = sampled.radii()[j];
            vals[j] = P[j] * std::polar(1.0, init.phase_gamma * r * r);
        }
        return FieldGrid(sampled.dimension(), sampled.radii(), std::move(vals));
    }
    return sample_initial_data(init, ctx, pts, cfg.outer_radius);
}

inline Trajectory evolve(const InitialData& init, const SolverConfig& cfg, const ParamsContext& ctx) {
    cfg.validate();
    return evolve_field(solver_initial_field(init, cfg, ctx), cfg, ctx.params.p);
}

/// Number of leading output points before the gradient norm leaves 10x its start.
inline std::size_t smooth_prefix(const Trajectory& traj) {
    if (traj.points.empty()) return 0;
    const double g0 = traj.points.front().grad_sq;
    std::size_t k = 0;
    while (k < traj.points.size() && traj.points[k].grad_sq < 10.0 * g0) ++k;
    return k;
}

/*
 * Largest mismatch between the second difference of the variance and
 * 4N(p-1)E - 4(p-1)s_c ∫|∇u|^2 (8∫|∇u|^2 for the free equation) over interior
 * uniformly spaced output points, normalised by 4N(p-1)|E| + 1.
 */
inline double virial_residual(const Trajectory& traj, const EquationParams& e) {
    const std::size_t k = smooth_prefix(traj);
    const auto& P = traj.points;
    double worst = 0.0;
    std::size_t used = 0;
    const double lam = traj.nonlinearity;
    for (std::size_t i = 1; i + 1 < k; ++i) {
        const double d1 = P[i].t - P[i - 1].t, d2 = P[i + 1].t - P[i].t;
        if (std::abs(d1 - d2) > 1e-9 * d1) continue;
        const double vtt = (P[i + 1].variance - 2.0 * P[i].variance + P[i - 1].variance) / (d1 * d1);
        // V_tt = 8∫|∇u|^2 - (4N(p-1)/(p+1)) λ∫|u|^{p+1}, rewritten with E
        const double model = 8.0 * P[i].grad_sq - 4.0 * e.N * (e.p - 1.0) / (e.p + 1.0) * lam * P[i].lp1;
        worst = std::max(worst, std::abs(vtt - model) / (4.0 * e.N * (e.p - 1.0) * std::abs(P[i].energy) + 1.0));
        ++used;
    }
    if (used < 3) throw NotApplicable("virial_residual: needs at least 5 smooth, evenly spaced outputs");
    return worst;
}

/// Largest relative gap between the variance and V(0) + ∫ V_t dt (trapezoid in time).
inline double variance_tracking_error(const Trajectory& traj) {
    const std::size_t k = smooth_prefix(traj);
    const auto& P = traj.points;
    double integrated = P.front().variance, worst = 0.0;
    for (std::size_t i = 1; i < k; ++i) {
        integrated += 0.5 * (P[i].t - P[i - 1].t) * (P[i].variance_rate + P[i - 1].variance_rate);
        worst = std::max(worst, std::abs(integrated - P[i].variance) / P[i].variance);
    }
    return worst;
}

struct ConservationDrift {
    double mass = 0.0;
    double energy = 0.0;
};

inline ConservationDrift conservation_drift(const Trajectory& traj) {
    ConservationDrift d;
    const std::size_t k = smooth_prefix(traj);
    const auto& P = traj.points;
    const double escale = std::max(std::abs(P.front().energy), 0.5 * P.front().grad_sq * 1e-3);
    for (std::size_t i = 0; i < k; ++i) {
        d.mass = std::max(d.mass, std::abs(P[i].mass - P.front().mass) / P.front().mass);
        d.energy = std::max(d.energy, std::abs(P[i].energy - P.front().energy) / escale);
    }
    return d;
}

struct BlewUp {
    double t_star = 0.0;
};
struct BoundedUntilTmax {
    double max_grad_sq = 0.0;
    double max_lp1 = 0.0;
};
struct Inconclusive {
    std::string reason;
};

using EvolutionOutcome = std::variant<BlewUp, BoundedUntilTmax, Inconclusive>;

inline std::string outcome_name(const EvolutionOutcome& o) {
    if (std::holds_alternative<BlewUp>(o)) return "BlewUp";
    if (std::holds_alternative<BoundedUntilTmax>(o)) return "BoundedUntilTmax";
    return "Inconclusive";
}

inline EvolutionOutcome detect_blowup(const Trajectory& traj, const SolverConfig& cfg) {
    if (traj.points.empty()) throw MalformedInput("detect_blowup: empty trajectory");
    const auto& first = traj.points.front();
    double max_grad = 0.0, max_lp1 = 0.0, max_sup = 0.0;
    for (const auto& q : traj.points) {
        max_grad = std::max(max_grad, q.grad_sq);
        max_lp1 = std::max(max_lp1, q.lp1);
        max_sup = std::max(max_sup, q.sup_amp);
    }
    const bool grown = max_sup >= cfg.blowup_factor * first.sup_amp || max_grad >= cfg.blowup_factor * first.grad_sq;
    if (traj.alarm_time && grown) return BlewUp{traj.points.back().t};
    if (max_grad < 10.0 * first.grad_sq && max_lp1 < 10.0 * first.lp1) return BoundedUntilTmax{max_grad, max_lp1};
    if (traj.step_budget_exhausted) return Inconclusive{"step budget exhausted"};
    if (traj.halted) return Inconclusive{"peak reached the grid scale before the growth threshold"};
    return Inconclusive{"norms grew beyond 10x without a resolution alarm"};
}

struct VerificationResult {
    bool consistent = false;
    EvolutionOutcome outcome;
    std::string detail;
};

/// Runs the datum and checks the run against the classifier's forward-time conclusion.
inline VerificationResult verify_verdict(const InitialData& init, const CriterionReport& report, const SolverConfig& cfg,
                                         const ParamsContext& ctx) {
    if (report.verdict == Verdict::Unknown) throw NotApplicable("verify_verdict: verdict is Unknown");
    const auto traj = evolve(init, cfg, ctx);
    VerificationResult res;
    res.outcome = detect_blowup(traj, cfg);
    if (is_blowup(report.verdict)) {
        res.consistent = std::holds_alternative<BlewUp>(res.outcome);
        res.detail = res.consistent ? "blew up at t = " + std::to_string(std::get<BlewUp>(res.outcome).t_star)
                                    : "expected blow-up, run ended " + outcome_name(res.outcome);
        return res;
    }
    if (!std::holds_alternative<BoundedUntilTmax>(res.outcome)) {
        res.detail = "expected a bounded run, got " + outcome_name(res.outcome);
        return res;
    }
    const auto& P = traj.points;
    const double lp1_0 = P.front().lp1, lp1_end = P.back().lp1;
    bool below = true;
    if (ctx.gs && ctx.params.s_c <= 1.0) {
        const double s = ctx.params.s_c;
        const double level = ground_state_lp1_level(ctx);
        const double ren = ctx.params.energy_critical() ? lp1_end
                                                        : std::pow(P.front().mass, 1.0 - s) * std::pow(lp1_end, s);
        below = ren < level;
    }
    res.consistent = below && lp1_end < lp1_0;
    res.detail = "L^{p+1} norm " + std::to_string(lp1_0) + " -> " + std::to_string(lp1_end) +
                 (below ? ", below the ground-state level" : ", not below the ground-state level");
    return res;
}

/// Defaults: conservation runs keep the grid closed, verification runs add a damping layer.
inline SolverConfig default_solver_config(const ParamsContext& ctx, bool absorbing) {
    SolverConfig cfg;
    if (ctx.params.N >= 2) {
        cfg.points = 8192;
        cfg.outer_radius = 30.0;
    }
    if (absorbing) cfg.absorbing_layer_width = 0.1 * cfg.outer_radius;
    return cfg;
}

}  // namespace nlslab

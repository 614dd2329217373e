#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/context.hpp"
#include "nlslab/error.hpp"
#include "nlslab/functionals.hpp"

namespace nlslab {

// ---------------------------------------------------------------------------
// Barrier functions

/// f(x) = sqrt(1/(k x^k) + x - (1 + 1/k)); the radicand is >= 0 for x > 0 and
/// tiny negative round-off around x = 1 is clamped.
inline double barrier_f(double x, double k) {
    if (!(x > 0.0) || !(k > 0.0)) throw DomainError("barrier_f: needs x > 0, k > 0");
    double rad = 1.0 / (k * std::pow(x, k)) + x - (1.0 + 1.0 / k);
    if (rad < 0.0) {
        if (rad > -1e-12) return 0.0;
        throw InconsistencyError("barrier_f: negative radicand");
    }
    return std::sqrt(rad);
}

/// g = +f on (0, 1], -f on [1, ∞).
inline double signed_barrier_g(double x, double k) {
    const double f = barrier_f(x, k);
    return x <= 1.0 ? f : -f;
}

// ---------------------------------------------------------------------------
// Recorded inequalities

enum class Relation { Less, LessEqual, Greater, GreaterEqual, Equal };

inline const char* relation_symbol(Relation r) {
    switch (r) {
        case Relation::Less: return "<";
        case Relation::LessEqual: return "<=";
        case Relation::Greater: return ">";
        case Relation::GreaterEqual: return ">=";
        case Relation::Equal: return "==";
    }
    return "?";
}

inline bool evaluate_relation(double lhs, Relation r, double rhs) {
    switch (r) {
        case Relation::Less: return lhs < rhs;
        case Relation::LessEqual: return lhs <= rhs;
        case Relation::Greater: return lhs > rhs;
        case Relation::GreaterEqual: return lhs >= rhs;
        case Relation::Equal: return lhs == rhs;
    }
    return false;
}

struct Inequality {
    std::string id;
    double lhs = 0.0;
    Relation relation = Relation::Less;
    double rhs = 0.0;
    bool holds = false;

    Inequality() = default;
    Inequality(std::string name, double l, Relation r, double rr)
        : id(std::move(name)), lhs(l), relation(r), rhs(rr), holds(evaluate_relation(l, r, rr)) {}

    bool reevaluate() const { return evaluate_relation(lhs, relation, rhs); }
};

enum class Verdict {
    BlowsUpForward,
    BoundedLp1Forward,
    ScattersForward,
    ScattersBothDirections,
    BlowsUpBothDirections,
    Unknown,
};

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::BlowsUpForward: return "BlowsUpForward";
        case Verdict::BoundedLp1Forward: return "BoundedLp1Forward";
        case Verdict::ScattersForward: return "ScattersForward";
        case Verdict::ScattersBothDirections: return "ScattersBothDirections";
        case Verdict::BlowsUpBothDirections: return "BlowsUpBothDirections";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

inline Verdict parse_verdict(const std::string& s) {
    for (Verdict v : {Verdict::BlowsUpForward, Verdict::BoundedLp1Forward, Verdict::ScattersForward,
                      Verdict::ScattersBothDirections, Verdict::BlowsUpBothDirections, Verdict::Unknown}) {
        if (s == verdict_name(v)) return v;
    }
    throw MalformedInput("unknown verdict '" + s + "'");
}

inline bool is_blowup(Verdict v) { return v == Verdict::BlowsUpForward || v == Verdict::BlowsUpBothDirections; }
inline bool is_bounded(Verdict v) {
    return v == Verdict::BoundedLp1Forward || v == Verdict::ScattersForward || v == Verdict::ScattersBothDirections;
}

/// One evaluated criterion: its conditions, whether all of them hold, and the
/// conclusion it supports when they do.
struct CriterionRecord {
    std::string id;
    std::vector<Inequality> conditions;
    bool fired = false;
    Verdict conclusion = Verdict::Unknown;
};

struct CriterionReport {
    Verdict verdict = Verdict::Unknown;
    std::vector<std::string> caveats;
    std::vector<CriterionRecord> criteria;  ///< every evaluated criterion, fired or not
    std::optional<double> mass_energy;      ///< ME, or E/E[W] when s_c = 1
    std::optional<double> renorm_lp1;       ///< M^{1-s}(∫|u|^{p+1})^s over its ground-state value
    std::optional<double> sigma_m;
    std::optional<double> lp1_bound;        ///< ground-state level M[Q]^{1-s}(∫Q^{p+1})^s for BoundedLp1Forward
    std::vector<std::pair<std::string, double>> diagnostics;

    std::vector<const CriterionRecord*> fired() const {
        std::vector<const CriterionRecord*> out;
        for (const auto& c : criteria) {
            if (c.fired) out.push_back(&c);
        }
        return out;
    }
    bool has_fired(const std::string& id) const {
        for (const auto& c : criteria) {
            if (c.fired && c.id == id) return true;
        }
        return false;
    }
};

// ---------------------------------------------------------------------------
// Mechanical reduction of the variance inequality

struct ParticleReduction {
    double k = 0.0;
    double alpha_sub = 0.0;  ///< V = B^{1/(α+1)}
    double gamma_exp = 0.0;
    double delta_exp = 0.0;
    double omega = 0.0;
    double U_max = 0.0;
    double B_max = 0.0;
    double a_rate = 0.0;  ///< time rescaling s = a t
    double V_max = 0.0;   ///< B_max^{1/(α+1)}
};

/// Exponents of ω b'' <= b^γ - b^δ; the data-dependent scales need E > 0.
inline ParticleReduction particle_exponents(const EquationParams& e) {
    ParticleReduction r;
    const double np = e.N * (e.p - 1.0);
    r.k = e.k;
    r.alpha_sub = 0.5 * e.k;
    r.gamma_exp = (np - 4.0) / (np + 4.0);
    r.delta_exp = (np - 12.0) / (np + 4.0);
    r.omega = 64.0 / (np * (np + 4.0));
    r.U_max = 1.0 / (r.delta_exp + 1.0) - 1.0 / (r.gamma_exp + 1.0);
    return r;
}

inline ParticleReduction particle_reduction(const Functionals& f, const EquationParams& e) {
    if (!(f.energy > 0.0)) throw DomainError("particle_reduction: needs E > 0");
    auto r = particle_exponents(e);
    const double ns = e.N * e.s_c;
    r.V_max = ns * f.mass * f.mass / (4.0 * f.energy);
    r.B_max = std::pow(r.V_max, (e.N * (e.p - 1.0) + 4.0) / 8.0);
    r.a_rate = 8.0 * std::sqrt(2.0) / std::sqrt(ns) * f.energy / f.mass;
    return r;
}

/// Particle energy in the v variable (b = v^{α+1}), α = k/2.
inline double particle_energy(double v, double vs, double k) {
    const double a = 0.5 * k;
    const double v2a = std::pow(v, 2.0 * a);
    return (a + 1.0) / (2.0 * a + 1.0) * vs * vs * v2a + (a + 1.0) / (2.0 * a) * v2a -
           (a + 1.0) / (2.0 * a + 1.0) * v2a * v;
}

/// Collapse via conditions (A), (B) or (C) stated with the particle energy.
inline bool collapse_abc(double v0, double vs0, double k) {
    if (!(v0 > 0.0) || !(k > 0.0)) throw DomainError("collapse_abc: needs v0 > 0, k > 0");
    const double a = 0.5 * k;
    const double u_max = (a + 1.0) / (2.0 * a * (2.0 * a + 1.0));
    const double en = particle_energy(v0, vs0, k);
    const bool A = en < u_max && v0 < 1.0;
    const bool B = en > u_max && vs0 < 0.0;
    const bool C = en == u_max && vs0 < 0.0 && v0 < 1.0;
    return A || B || C;
}

/// The same condition merged into a single inequality on v_s(0).
inline bool collapse_merged(double v0, double vs0, double k) {
    return vs0 < (v0 < 1.0 ? barrier_f(v0, k) : -barrier_f(v0, k));
}

// ---------------------------------------------------------------------------
// Variance-barrier blow-up criteria

/// 4 E V / (N s_c M^2)
inline double uncertainty_variance_ratio(const Functionals& f, const EquationParams& e) {
    return 4.0 / (e.N * e.s_c) * f.energy * f.variance / (f.mass * f.mass);
}

/// C of the interpolation-based criterion, built from C_{p,N}.
inline double interpolation_barrier_constant(const EquationParams& e, double C_pN) {
    const double ex = 0.5 * e.N * (e.p - 1.0) + (e.p + 1.0);
    return std::pow(2.0 * (e.p + 1.0) / (e.s_c * (e.p - 1.0)) * std::pow(C_pN, ex), 2.0 / (e.N * (e.p - 1.0)));
}

/// C^2 E^{4/(N(p-1))} V / M^{1 + 2(p+1)/(N(p-1))}
inline double interpolation_variance_ratio(const Functionals& f, const EquationParams& e, double C_pN) {
    const double C = interpolation_barrier_constant(e, C_pN);
    const double np = e.N * (e.p - 1.0);
    return C * C * std::pow(f.energy, 4.0 / np) * f.variance / std::pow(f.mass, 1.0 + 2.0 * (e.p + 1.0) / np);
}

/// V_t(0)/M < sqrt(8 N s_c) g(4 E V / (N s_c M^2)); requires E > 0.
inline Inequality theorem1_inequality(const Functionals& f, const EquationParams& e) {
    if (!(f.energy > 0.0) || !(f.mass > 0.0)) throw DomainError("theorem1: needs E > 0 and M > 0");
    const double x = uncertainty_variance_ratio(f, e);
    return {"uncertainty_barrier", f.variance_rate / f.mass, Relation::Less,
            std::sqrt(8.0 * e.N * e.s_c) * signed_barrier_g(x, e.k)};
}

inline bool theorem1_check(const Functionals& f, const EquationParams& e) { return theorem1_inequality(f, e).holds; }

/// V_t(0)/M < 4 sqrt(2) (M^{1-s}E^s)^{1/N} / C  g(C^2 E^{4/(N(p-1))} V / M^{1+2(p+1)/(N(p-1))}).
inline Inequality theorem2_inequality(const Functionals& f, const EquationParams& e, double C_pN) {
    if (!(f.energy > 0.0) || !(f.mass > 0.0)) throw DomainError("theorem2: needs E > 0 and M > 0");
    const double C = interpolation_barrier_constant(e, C_pN);
    const double x = interpolation_variance_ratio(f, e, C_pN);
    const double me = std::pow(f.mass, 1.0 - e.s_c) * std::pow(f.energy, e.s_c);
    return {"interpolation_barrier", f.variance_rate / f.mass, Relation::Less,
            4.0 * std::sqrt(2.0) * std::pow(me, 1.0 / e.N) / C * signed_barrier_g(x, e.k)};
}

inline bool theorem2_check(const Functionals& f, const EquationParams& e, double C_pN) {
    return theorem2_inequality(f, e, C_pN).holds;
}

/// Real-data forms: V < (N s_c/4) M^2/E and V < K M^{1+2(p+1)/(N(p-1))}/E^{4/(N(p-1))}.
inline double real_variance_bound_1(double M, double E, const EquationParams& e) {
    return e.N * e.s_c / 4.0 * M * M / E;
}

inline double real_variance_bound_2(double M, double E, const EquationParams& e, double C_pN) {
    const double np = e.N * (e.p - 1.0);
    const double ex = 0.5 * np + (e.p + 1.0);
    const double K = std::pow(e.s_c * (e.p - 1.0) / (2.0 * (e.p + 1.0)) / std::pow(C_pN, ex), 4.0 / np);
    return K * std::pow(M, 1.0 + 2.0 * (e.p + 1.0) / np) / std::pow(E, 4.0 / np);
}

/// M^{1-s}E^{s} level above which the interpolation bound on V is the wider one.
inline double criterion_comparison(const EquationParams& e, double C_pN) {
    const double ex = 0.5 * e.N * (e.p - 1.0) + (e.p + 1.0);
    return std::pow(e.N * e.s_c / 4.0, 0.5 * e.N) *
           std::pow(2.0 * (e.p + 1.0) / (e.s_c * (e.p - 1.0)) * std::pow(C_pN, ex), 2.0 / (e.p - 1.0));
}

// ---------------------------------------------------------------------------
// Threshold quantities relative to the ground state

namespace detail {

// Ratios within this distance of 1 are treated as exactly 1 so that data built
// from the ground state land on the threshold rather than on a rounding side.
inline constexpr double unit_snap = 1e-9;

inline double snap_unit(double x) { return std::abs(x - 1.0) <= unit_snap ? 1.0 : x; }

inline void require_threshold_regime(const ParamsContext& ctx, const char* what) {
    if (ctx.params.s_c > 1.0 || !ctx.gs) throw NotApplicable(std::string(what) + ": only defined for 0 < s_c <= 1");
}

}  // namespace detail

/// M^{(1-s)/s} E normalised by its ground-state value (E/E[W] when s_c = 1).
inline double mass_energy(const Functionals& f, const ParamsContext& ctx) {
    detail::require_threshold_regime(ctx, "mass_energy");
    const auto& gs = *ctx.gs;
    if (ctx.params.energy_critical()) return detail::snap_unit(f.energy / gs.energy);
    const double s = ctx.params.s_c;
    const double ex = (1.0 - s) / s;
    return detail::snap_unit(std::pow(f.mass / gs.mass(), ex) * f.energy / gs.energy);
}

/// M^{1-s}(∫|u|^{p+1})^{s} normalised by its ground-state value.
inline double renormalized_lp1(const Functionals& f, const ParamsContext& ctx) {
    detail::require_threshold_regime(ctx, "renormalized_lp1");
    const auto& gs = *ctx.gs;
    if (ctx.params.energy_critical()) return detail::snap_unit(f.lp1 / gs.lp1);
    const double s = ctx.params.s_c;
    return detail::snap_unit(std::pow(f.mass / gs.mass(), 1.0 - s) * std::pow(f.lp1 / gs.lp1, s));
}

inline double ground_state_lp1_level(const ParamsContext& ctx) {
    detail::require_threshold_regime(ctx, "ground_state_lp1_level");
    const auto& gs = *ctx.gs;
    if (ctx.params.energy_critical()) return gs.lp1;
    const double s = ctx.params.s_c;
    return std::pow(gs.mass(), 1.0 - s) * std::pow(gs.lp1, s);
}

/// σ solving (M/M[Q])^{1-s} ((E - σ/16)/E[Q])^{s} = 1, in closed form.
inline double sigma_m(const Functionals& f, const ParamsContext& ctx) {
    detail::require_threshold_regime(ctx, "sigma_m");
    const auto& gs = *ctx.gs;
    if (ctx.params.energy_critical()) return 16.0 * (f.energy - gs.energy);
    const double s = ctx.params.s_c;
    return 16.0 * (f.energy - gs.energy * std::pow(gs.mass() / f.mass, (1.0 - s) / s));
}

/// Left side minus 1 of the defining equation for σ_m.
inline double sigma_m_residual(const Functionals& f, const ParamsContext& ctx, double sigma) {
    const auto& gs = *ctx.gs;
    const double s = ctx.params.s_c;
    const double mfac = ctx.params.energy_critical() ? 1.0 : std::pow(f.mass / gs.mass(), 1.0 - s);
    return mfac * std::pow((f.energy - sigma / 16.0) / gs.energy, s) - 1.0;
}

/// ME (1 - V_t^2 / (32 E V)) <= 1.
inline Inequality threshold_condition(const Functionals& f, const ParamsContext& ctx) {
    const double me = mass_energy(f, ctx);
    const double corr = f.variance_rate * f.variance_rate / (32.0 * f.energy * f.variance);
    return {"mass_energy_virial", detail::snap_unit(me * (1.0 - corr)), Relation::LessEqual, 1.0};
}

// ---------------------------------------------------------------------------
// Classification

inline bool negative_energy_check(const Functionals& f) { return f.energy <= 0.0 && !f.is_zero(); }

namespace detail {

inline CriterionRecord negative_energy_record(const Functionals& f) {
    CriterionRecord r;
    r.id = "negative_energy";
    // normalised so the recorded side is scale invariant
    const double scale = 0.5 * f.grad_sq + 1e-300;
    r.conditions.emplace_back("energy_sign", f.energy / scale, Relation::LessEqual, 0.0);
    r.fired = negative_energy_check(f);
    r.conclusion = Verdict::BlowsUpBothDirections;
    return r;
}

inline bool requires_radial_caveat(const EquationParams& e) { return e.energy_critical() && (e.N == 3 || e.N == 4); }

}  // namespace detail

/// Below the threshold (ME < 1): scattering or blow-up in both directions by
/// comparing the renormalised L^{p+1} quantity with its ground-state value.
inline std::vector<CriterionRecord> subthreshold_records(const Functionals& f, const ParamsContext& ctx) {
    const double me = mass_energy(f, ctx);
    if (!(me < 1.0)) throw NotApplicable("subthreshold_classify: requires ME < 1");
    const double ren = renormalized_lp1(f, ctx);
    CriterionRecord sc, bu;
    sc.id = "subthreshold_scattering";
    sc.conditions = {{"mass_energy", me, Relation::Less, 1.0}, {"renormalized_lp1", ren, Relation::Less, 1.0}};
    sc.conclusion = Verdict::ScattersBothDirections;
    bu.id = "subthreshold_blowup";
    bu.conditions = {{"mass_energy", me, Relation::Less, 1.0}, {"renormalized_lp1", ren, Relation::Greater, 1.0}};
    bu.conclusion = Verdict::BlowsUpBothDirections;
    for (auto* r : {&sc, &bu}) {
        r->fired = std::all_of(r->conditions.begin(), r->conditions.end(), [](const Inequality& q) { return q.holds; });
    }
    return {sc, bu};
}

inline Verdict subthreshold_classify(const Functionals& f, const ParamsContext& ctx) {
    for (const auto& r : subthreshold_records(f, ctx)) {
        if (r.fired) return r.conclusion;
    }
    return Verdict::Unknown;
}

/// Above (or at) the threshold with the virial-corrected condition.
inline std::vector<CriterionRecord> threshold_records(const Functionals& f, const ParamsContext& ctx) {
    const auto cond = threshold_condition(f, ctx);
    const double ren = renormalized_lp1(f, ctx);
    const bool still = f.variance_rate == 0.0;
    const double rate = f.variance_rate / f.mass;  // same sign as V_t, scale invariant
    CriterionRecord bu, sc;
    bu.id = "threshold_blowup";
    bu.conditions = {cond, {"renormalized_lp1", ren, Relation::Greater, 1.0},
                     {"variance_rate_over_mass", rate, Relation::LessEqual, 0.0}};
    bu.conclusion = still ? Verdict::BlowsUpBothDirections : Verdict::BlowsUpForward;
    sc.id = "threshold_scattering";
    sc.conditions = {cond, {"renormalized_lp1", ren, Relation::Less, 1.0},
                     {"variance_rate_over_mass", rate, Relation::GreaterEqual, 0.0}};
    sc.conclusion = !f.radial && detail::requires_radial_caveat(ctx.params)
                        ? Verdict::BoundedLp1Forward
                        : (still ? Verdict::ScattersBothDirections : Verdict::ScattersForward);
    for (auto* r : {&bu, &sc}) {
        r->fired = std::all_of(r->conditions.begin(), r->conditions.end(), [](const Inequality& q) { return q.holds; });
    }
    return {bu, sc};
}

/// Verdict of the threshold theorem alone (falls back to the subthreshold
/// dichotomy when ME < 1).
inline Verdict theoremBB_classify(const Functionals& f, const ParamsContext& ctx) {
    detail::require_threshold_regime(ctx, "theoremBB_classify");
    if (!(f.energy > 0.0)) return negative_energy_check(f) ? Verdict::BlowsUpBothDirections : Verdict::Unknown;
    if (mass_energy(f, ctx) < 1.0) return subthreshold_classify(f, ctx);
    for (const auto& r : threshold_records(f, ctx)) {
        if (r.fired) return r.conclusion;
    }
    return Verdict::Unknown;
}

/// e^{iγ|x|^2} λ^{2/(p-1)} Q(λx), γ != 0: scatters forward / blows up backward for
/// γ > 0 and the reverse for γ < 0 (0 < s_c < 1, or s_c = 1 with N >= 7).
inline std::optional<CriterionRecord> ground_state_phase_record(const InitialData& data, const ParamsContext& ctx) {
    if (!std::holds_alternative<GroundStateScaled>(data.shape) || data.phase_gamma == 0.0) return std::nullopt;
    const auto& e = ctx.params;
    if (!(e.s_c < 1.0 || (e.energy_critical() && e.N >= 7))) return std::nullopt;
    CriterionRecord r;
    r.id = "ground_state_phase";
    const bool forward_scatter = data.phase_gamma > 0.0;
    r.conditions.emplace_back("phase_gamma", data.phase_gamma, forward_scatter ? Relation::Greater : Relation::Less, 0.0);
    r.fired = true;
    r.conclusion = forward_scatter ? Verdict::ScattersForward : Verdict::BlowsUpForward;
    return r;
}

namespace detail {

inline CriterionRecord barrier_record(Inequality q) {
    CriterionRecord r;
    r.id = q.id;
    r.fired = q.holds;
    r.conditions = {std::move(q)};
    r.conclusion = Verdict::BlowsUpForward;
    return r;
}

inline int strength(Verdict v) {
    switch (v) {
        case Verdict::BlowsUpBothDirections:
        case Verdict::ScattersBothDirections: return 3;
        case Verdict::BlowsUpForward:
        case Verdict::ScattersForward: return 2;
        case Verdict::BoundedLp1Forward: return 1;
        case Verdict::Unknown: return 0;
    }
    return 0;
}

}  // namespace detail

/*
 * Runs every applicable criterion and combines their conclusions.
 *
 * Order: nonzero data with E <= 0 (short-circuit), then for 0 < s_c <= 1 the
 * ground-state phase family, the subthreshold dichotomy or the virial-corrected
 * threshold theorem, then the two variance-barrier criteria (E > 0 and local
 * well-posedness). The strongest conclusion wins; a blow-up conclusion next to a
 * boundedness one is reported as Unknown with a caveat.
 */
inline CriterionReport classify(const Functionals& f, const ParamsContext& ctx,
                                const InitialData* data = nullptr) {
    CriterionReport rep;
    const auto& e = ctx.params;
    if (f.is_zero()) return rep;
    if (!(f.variance > 0.0) || !std::isfinite(f.variance)) {
        throw MalformedInput("classify: every criterion needs finite, positive variance");
    }

    const bool threshold_regime = e.s_c <= 1.0 && ctx.gs.has_value();
    if (threshold_regime) {
        rep.mass_energy = mass_energy(f, ctx);
        rep.renorm_lp1 = renormalized_lp1(f, ctx);
        rep.sigma_m = sigma_m(f, ctx);
    }
    rep.diagnostics.emplace_back("variance_rate_over_mass", f.variance_rate / f.mass);
    if (f.energy > 0.0) {
        rep.diagnostics.emplace_back("uncertainty_variance_ratio", uncertainty_variance_ratio(f, e));
        rep.diagnostics.emplace_back("interpolation_variance_ratio",
                                     interpolation_variance_ratio(f, e, ctx.sharp.C_pN));
        rep.diagnostics.emplace_back("mass_energy_scale_free",
                                     std::pow(f.mass, 1.0 - e.s_c) * std::pow(f.energy, e.s_c) /
                                         criterion_comparison(e, ctx.sharp.C_pN));
    }

    rep.criteria.push_back(detail::negative_energy_record(f));
    if (rep.criteria.back().fired) {
        rep.verdict = Verdict::BlowsUpBothDirections;
        if (!e.well_posed) rep.caveats.emplace_back("local well-posedness condition fails for these (p, N)");
        return rep;
    }

    if (threshold_regime) {
        std::optional<CriterionRecord> phase;
        if (data) phase = ground_state_phase_record(*data, ctx);
        if (phase) {
            rep.criteria.push_back(*phase);
        } else if (*rep.mass_energy < 1.0) {
            for (auto& r : subthreshold_records(f, ctx)) rep.criteria.push_back(std::move(r));
        } else {
            for (auto& r : threshold_records(f, ctx)) rep.criteria.push_back(std::move(r));
        }
    }

    if (e.well_posed) {
        rep.criteria.push_back(detail::barrier_record(theorem2_inequality(f, e, ctx.sharp.C_pN)));
        rep.criteria.push_back(detail::barrier_record(theorem1_inequality(f, e)));
    } else {
        rep.caveats.emplace_back("local well-posedness condition fails; variance-barrier criteria skipped");
    }

    bool any_blowup = false, any_bounded = false;
    Verdict best = Verdict::Unknown;
    std::string best_id;
    for (const auto& r : rep.criteria) {
        if (!r.fired) continue;
        any_blowup |= is_blowup(r.conclusion);
        any_bounded |= is_bounded(r.conclusion);
        if (detail::strength(r.conclusion) > detail::strength(best)) {
            best = r.conclusion;
            best_id = r.id;
        }
    }
    if (any_blowup && any_bounded) {
        rep.verdict = Verdict::Unknown;
        rep.caveats.emplace_back("conflicting criteria fired (blow-up and boundedness); check the data");
        return rep;
    }
    rep.verdict = best;

    if (best_id == "ground_state_phase") {
        rep.caveats.emplace_back(best == Verdict::ScattersForward ? "blows up backward in time"
                                                                  : "globally defined and scatters backward in time");
    }
    if (is_bounded(best) && best != Verdict::BoundedLp1Forward && detail::requires_radial_caveat(e)) {
        rep.caveats.emplace_back("requires radial data");
    }
    if (best == Verdict::BoundedLp1Forward) rep.lp1_bound = ground_state_lp1_level(ctx);
    if (is_blowup(best) && e.s_c > 1.0) rep.caveats.emplace_back("assumes u_0 in the critical Sobolev space");
    return rep;
}

inline CriterionReport classify(const InitialData& data, const ParamsContext& ctx) {
    return classify(evaluate_functionals(data, ctx), ctx, &data);
}

}  // namespace nlslab

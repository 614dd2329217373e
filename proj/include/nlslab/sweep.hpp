#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "nlslab/criteria.hpp"
#include "nlslab/thresholds.hpp"

namespace nlslab {

/// Worker count from NLSLAB_THREADS, else the hardware concurrency (at least 1).
inline unsigned worker_count() {
    if (const char* env = std::getenv("NLSLAB_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1) throw MalformedInput("NLSLAB_THREADS must be a positive integer");
        return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/*
 * Evaluates fn(0..n-1) on a bounded pool. Results land in index order, so the
 * output does not depend on scheduling; the lowest-index exception is rethrown.
 */
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& fn, unsigned workers = worker_count()) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < count; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

/// n evenly spaced values on [lo, hi] (just lo when n == 1).
inline std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw MalformedInput("grid: need 0 < lo <= hi and at least one point");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
    return g;
}

/// Amplitudes κ = β / α^{1/(p-1)} of every threshold curve in the Gaussian plane.
struct GaussianCurves {
    double kappa_E0 = 0.0;
    std::optional<double> kappa_s;  ///< absent for s_c > 1 or when ME stays below 1
    std::optional<double> kappa_b;
    double kappa_T1 = 0.0;
    double kappa_T2 = 0.0;
};

inline GaussianCurves gaussian_curves(const ParamsContext& ctx) {
    GaussianCurves c;
    c.kappa_E0 = gaussian_energy_zero_threshold(ctx.params);
    const auto t = gaussian_blowup_thresholds(ctx.params, ctx.sharp.C_pN);
    c.kappa_T1 = t.kappa_T1;
    c.kappa_T2 = t.kappa_T2;
    if (ctx.params.s_c <= 1.0) {
        const auto roots = gaussian_threshold_roots(ctx);
        c.kappa_s = roots.kappa_s;
        c.kappa_b = roots.kappa_b;
    }
    return c;
}

struct CurveRow {
    double alpha = 0.0;
    double beta_E0 = 0.0;
    std::optional<double> beta_kappa_s;
    std::optional<double> beta_kappa_b;
    double beta_T1 = 0.0;
    double beta_T2 = 0.0;
};

inline std::vector<CurveRow> sweep_curves(const ParamsContext& ctx, const std::vector<double>& alphas) {
    const auto c = gaussian_curves(ctx);
    const double ex = ctx.params.gaussian_scaling_exponent();
    return parallel_map<CurveRow>(alphas.size(), [&](std::size_t i) {
        const double a = alphas[i];
        const double sc = std::pow(a, ex);
        CurveRow r;
        r.alpha = a;
        r.beta_E0 = c.kappa_E0 * sc;
        if (c.kappa_s) r.beta_kappa_s = *c.kappa_s * sc;
        if (c.kappa_b) r.beta_kappa_b = *c.kappa_b * sc;
        r.beta_T1 = c.kappa_T1 * sc;
        r.beta_T2 = c.kappa_T2 * sc;
        return r;
    });
}

/// %.10g, the fixed CSV number format.
inline std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::string csv_optional(const std::optional<double>& x) { return x ? csv_number(*x) : "NA"; }

inline void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
    out << "alpha,beta_E0,beta_kappa_s,beta_kappa_b,beta_T1,beta_T2\n";
    for (const auto& r : rows) {
        out << csv_number(r.alpha) << ',' << csv_number(r.beta_E0) << ',' << csv_optional(r.beta_kappa_s) << ','
            << csv_optional(r.beta_kappa_b) << ',' << csv_number(r.beta_T1) << ',' << csv_number(r.beta_T2) << '\n';
    }
}

struct PlanePoint {
    double alpha = 0.0;
    double beta = 0.0;
    Verdict verdict = Verdict::Unknown;
    std::string fired;  ///< fired criterion ids joined by ';'
};

/// Classifies every Gaussian β e^{-α|x|^2/2} of the α × β grid, row-major in α.
inline std::vector<PlanePoint> sweep_plane(const ParamsContext& ctx, const std::vector<double>& alphas,
                                           const std::vector<double>& betas) {
    const std::size_t nb = betas.size();
    return parallel_map<PlanePoint>(alphas.size() * nb, [&](std::size_t i) {
        PlanePoint pt;
        pt.alpha = alphas[i / nb];
        pt.beta = betas[i % nb];
        const auto rep = classify(InitialData::gaussian(pt.alpha, pt.beta), ctx);
        pt.verdict = rep.verdict;
        for (const auto* c : rep.fired()) pt.fired += (pt.fired.empty() ? "" : ";") + c->id;
        return pt;
    });
}

inline void write_plane_csv(std::ostream& out, const std::vector<PlanePoint>& pts) {
    out << "alpha,beta,verdict,fired\n";
    for (const auto& q : pts) {
        out << csv_number(q.alpha) << ',' << csv_number(q.beta) << ',' << verdict_name(q.verdict) << ','
            << q.fired << '\n';
    }
}

}  // namespace nlslab

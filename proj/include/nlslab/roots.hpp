#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>

#include "nlslab/error.hpp"

namespace nlslab {

struct RootResult {
    double root;
    double residual;
    std::size_t iterations;
};

/*
 * Brent's method on a sign-changing bracket [a, b].
 *
 * Stops when |f| <= ftol or the bracket is narrower than xtol (relative to
 * |root|, with an absolute floor of xtol itself).
 */
template <class F>
RootResult brent(F&& f, double a, double b, double xtol = 1e-15, double ftol = 1e-12,
                 std::size_t max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if (std::signbit(fa) == std::signbit(fb)) {
        throw NonConvergence("brent: interval does not bracket a root");
    }
    if (std::abs(fa) < std::abs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa, d = b - a;
    bool bisected = true;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        double s;
        if (fa != fc && fb != fc) {
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        const double tol = xtol * std::max(1.0, std::abs(b));
        const double lo = (3.0 * a + b) / 4.0;
        const bool outside = !((s > std::min(lo, b)) && (s < std::max(lo, b)));
        if (outside || (bisected && std::abs(s - b) >= std::abs(b - c) / 2.0) ||
            (!bisected && std::abs(s - b) >= std::abs(c - d) / 2.0) ||
            (bisected && std::abs(b - c) < tol) || (!bisected && std::abs(c - d) < tol)) {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        const double fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if (std::signbit(fa) != std::signbit(fs)) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::abs(fa) < std::abs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
        if (fb == 0.0 || std::abs(fb) <= ftol || std::abs(b - a) <= tol) {
            return {b, fb, it};
        }
    }
    throw NonConvergence("brent: iteration cap reached");
}

/// Scans x0, x0*factor, x0*factor^2, ... up to x_max for the first sign change
/// of f. Returns the bracketing pair.
template <class F>
std::optional<std::pair<double, double>> geometric_bracket(F&& f, double x0, double x_max,
                                                           double factor = 1.1) {
    double x = x0;
    double fx = f(x);
    while (x < x_max) {
        const double next = std::min(x * factor, x_max);
        const double fn = f(next);
        if (fx == 0.0) return std::pair{x, x};
        if (std::signbit(fx) != std::signbit(fn)) return std::pair{x, next};
        x = next;
        fx = fn;
    }
    return std::nullopt;
}

/// Root of f on [lo, hi] found by geometric scan then Brent refinement.
template <class F>
double find_first_root(F&& f, double lo, double hi, double factor = 1.1, double ftol = 1e-12) {
    const auto bracket = geometric_bracket(f, lo, hi, factor);
    if (!bracket) {
        throw NonConvergence("find_first_root: no sign change found in scan range");
    }
    if (bracket->first == bracket->second) return bracket->first;
    return brent(f, bracket->first, bracket->second, 1e-15, ftol).root;
}

}  // namespace nlslab

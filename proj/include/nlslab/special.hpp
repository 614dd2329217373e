#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "nlslab/error.hpp"

namespace nlslab {

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993227684700473478,
    676.520368121885098567009190444019,
    -1259.13921672240287047156078755283,
    771.3234287776530788486528258894,
    -176.61502916214059906584551354,
    12.507343278686904814458936853,
    -0.13857109526572011689554707,
    9.984369578019570859563e-6,
    1.50563273514931155834e-7,
};

// Sum A(x) for Gamma(x + 1), x >= -0.5.
inline double lanczos_sum(double x) {
    double a = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i) {
        a += lanczos_coef[i] / (x + static_cast<double>(i));
    }
    return a;
}

}  // namespace detail

/// Gamma function for x > 0 (Lanczos with reflection below 1/2).
inline double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gamma_fn: argument must be a positive finite number");
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    if (x == std::floor(x) && x <= 21.0) {
        double f = 1.0;
        for (int i = 2; i < static_cast<int>(x); ++i) {
            f *= i;
        }
        return f;
    }
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    // t^(z+1/2) split in two to delay overflow.
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * detail::lanczos_sum(z);
}

/// log Gamma(x) for x > 0.
inline double log_gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma_fn: argument must be a positive finite number");
    }
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma_fn(1.0 - x);
    }
    if (x < 30.0) {
        return std::log(gamma_fn(x));
    }
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(z));
}

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
inline double beta_fn(double a, double b) {
    return std::exp(log_gamma_fn(a) + log_gamma_fn(b) - log_gamma_fn(a + b));
}

/// Surface area of the unit sphere in R^N (2 for N = 1).
inline double sphere_area(int N) {
    const double h = 0.5 * N;
    return 2.0 * std::pow(std::numbers::pi, h) / gamma_fn(h);
}

}  // namespace nlslab

#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "nlslab/error.hpp"

namespace nlslab {

/// Dormand–Prince 5(4) integrator for small fixed-size systems.
template <std::size_t Dim>
class DormandPrince {
public:
    using State = std::array<double, Dim>;

    DormandPrince(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

    /// Advances y from t to t_end with adaptive substeps; h is the suggested
    /// first substep and is updated to the last accepted size.
    template <class Rhs>
    void advance(Rhs&& rhs, double& t, State& y, double t_end, double& h) const {
        int guard = 0;
        while (t < t_end) {
            if (++guard > 100000) throw NonConvergence("DormandPrince: too many substeps");
            double step = std::min(h, t_end - t);
            State y5, err;
            single_step(rhs, t, y, step, y5, err);
            double norm = 0.0;
            for (std::size_t i = 0; i < Dim; ++i) {
                const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
                norm = std::max(norm, std::abs(err[i]) / sc);
            }
            if (norm <= 1.0) {
                t = (step == t_end - t) ? t_end : t + step;
                y = y5;
            }
            const double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
            h = step * fac;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                throw NonConvergence("DormandPrince: step size underflow");
            }
        }
    }

private:
    template <class Rhs>
    static void single_step(Rhs& rhs, double t, const State& y, double h, State& y5, State& err) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                         b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State k1 = rhs(t, y), k2, k3, k4, k5, k6, k7, tmp;
        for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = rhs(t + c2 * h, tmp);
        for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(t + c3 * h, tmp);
        for (std::size_t i = 0; i < Dim; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(t + c4 * h, tmp);
        for (std::size_t i = 0; i < Dim; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(t + c5 * h, tmp);
        for (std::size_t i = 0; i < Dim; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = rhs(t + h, tmp);
        for (std::size_t i = 0; i < Dim; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = rhs(t + h, y5);
        for (std::size_t i = 0; i < Dim; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    double rtol_;
    double atol_;
};

}  // namespace nlslab

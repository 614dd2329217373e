#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "nlslab/functionals.hpp"
#include "support/oracles.hpp"

using namespace nlslab;

namespace {

const double pi = std::numbers::pi;

void expect_rel(double a, double b, double tol, const char* what) {
    EXPECT_LE(std::abs(a - b), tol * std::max(std::abs(b), 1e-300)) << what << ": " << a << " vs " << b;
}

}  // namespace

TEST(GaussianFunctionals, OneDimensionalEnergyFormula) {
    const auto e = make_params(7, 1);
    for (double alpha : {0.5, 1.0, 2.3}) {
        for (double beta : {0.3, 1.0, 1.4}) {
            const auto f = gaussian_functionals(alpha, beta, e);
            const double ref =
                beta * beta * std::sqrt(pi * alpha) * (0.25 - std::sqrt(2.0 / std::pow(8.0, 3)) * std::pow(beta, 6) / alpha);
            EXPECT_NEAR(f.energy, ref, 1e-12 * std::abs(ref) + 1e-14);
        }
    }
}

TEST(GaussianFunctionals, UnitMassInTwoDimensions) {
    EXPECT_NEAR(gaussian_functionals(pi, 1.0, make_params(4, 2)).mass, 1.0, 1e-15);
}

TEST(GaussianFunctionals, EnergyCriticalFormula) {
    // E = β^2 (π/α)^{N/2} [Nα/4 - ((N-2)/(2N)) β^{4/(N-2)} ((N-2)/(N-1)... written via lp1 directly
    for (int N = 3; N <= 8; ++N) {
        const double p = critical_exponent(N);
        const auto f = gaussian_functionals(1.7, 0.9, make_params(p, N));
        const double lp1 = oracle::radial([&](double r) { return std::pow(0.9 * std::exp(-0.85 * r * r), p + 1); }, N, 30);
        const double grad = oracle::radial([&](double r) { return std::pow(0.9 * 1.7 * r * std::exp(-0.85 * r * r), 2); }, N, 30);
        expect_rel(f.lp1, lp1, 1e-10, "lp1");
        expect_rel(f.grad_sq, grad, 1e-10, "grad");
    }
}

class SampledGaussian : public ::testing::TestWithParam<std::tuple<double, int, double>> {};

TEST_P(SampledGaussian, GridMatchesClosedForm) {
    const auto [p, N, gamma] = GetParam();
    const auto ctx = make_context(p, N);
    const double alpha = 1.3, beta = 0.8;
    const auto data = InitialData::gaussian(alpha, beta, gamma);
    const auto field = sample_initial_data(data, ctx, 4096);
    EXPECT_NEAR(field.outer_radius(), 12.0 / std::sqrt(alpha), 1e-12);
    const auto g = grid_functionals(field, ctx);
    const auto a = evaluate_functionals(data, ctx);
    expect_rel(g.mass, a.mass, 1e-6, "mass");
    expect_rel(g.variance, a.variance, 1e-6, "variance");
    expect_rel(g.grad_sq, a.grad_sq, 1e-6, "grad_sq");
    expect_rel(g.lp1, a.lp1, 1e-6, "lp1");
    expect_rel(g.energy, a.energy, 1e-6, "energy");
    EXPECT_NEAR(g.variance_rate, a.variance_rate, 1e-6 * std::max(1.0, std::abs(a.variance_rate)));
}

INSTANTIATE_TEST_SUITE_P(Cases, SampledGaussian,
                         ::testing::Values(std::tuple{7.0, 1, 0.0}, std::tuple{3.0, 3, 0.0}, std::tuple{5.0, 3, 0.0},
                                           std::tuple{3.0, 4, 0.0}, std::tuple{5.0, 4, 0.0}, std::tuple{4.0, 2, 0.0},
                                           std::tuple{7.0, 1, 0.4}, std::tuple{3.0, 3, -0.7}, std::tuple{5.0, 3, 0.25}));

TEST(GridFunctionals, SampledGroundStateEnergy) {
    for (auto [p, N] : {std::pair{7.0, 1}, std::pair{3.0, 3}}) {
        const auto ctx = make_context(p, N);
        const auto field = sample_initial_data(InitialData::ground_state(), ctx, 8192);
        const auto g = grid_functionals(field, ctx);
        EXPECT_NEAR(g.energy, ctx.gs->energy, 1e-6 * ctx.gs->grad_sq) << p << "," << N;
        expect_rel(g.mass, ctx.gs->mass(), 1e-6, "mass");
    }
}

TEST(GridFunctionals, ZeroField) {
    const auto f = grid_functionals(sample_field(3, 10.0, 512, [](double) { return cplx{}; }), 3.0);
    EXPECT_EQ(f.mass, 0.0);
    EXPECT_EQ(f.energy, 0.0);
    EXPECT_EQ(f.variance, 0.0);
    EXPECT_EQ(f.variance_rate, 0.0);
    EXPECT_EQ(f.grad_sq, 0.0);
    EXPECT_EQ(f.lp1, 0.0);
    EXPECT_TRUE(f.is_zero());
}

TEST(GridFunctionals, CoarseGridReported) {
    const auto coarse = sample_field(3, 12.0, 64, [](double r) { return cplx{std::exp(-8.0 * r * r), 0.0}; });
    EXPECT_THROW(grid_functionals(coarse, 3.0), ResolutionError);
}

TEST(GridFunctionals, UndecayedFieldRejected) {
    const auto wide = sample_field(3, 2.0, 512, [](double r) { return cplx{std::exp(-r * r), 0.0}; });
    EXPECT_THROW(grid_functionals(wide, 3.0), MalformedInput);
}

TEST(GridFunctionals, RealDataHasNoVarianceRateOrMomentum) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto b = oracle::random_bump(rng);
        const auto f = grid_functionals(sample_field(3, 14.0, 4096, [&](double r) { return cplx{b(r), 0.0}; }), 3.0);
        EXPECT_EQ(f.variance_rate, 0.0);
        for (double m : f.momentum) EXPECT_EQ(m, 0.0);
        EXPECT_TRUE(f.real_valued);
    }
}

TEST(GridFunctionals, MassAndVarianceLinearInDensity) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const auto b = oracle::random_bump(rng);
        const auto f1 = grid_functionals(sample_field(2, 14.0, 4096, [&](double r) { return cplx{b(r), 0.0}; }), 3.0);
        const auto f2 = grid_functionals(sample_field(2, 14.0, 4096, [&](double r) { return cplx{0.0, 1.7 * b(r)}; }), 3.0);
        expect_rel(f2.mass, 1.7 * 1.7 * f1.mass, 1e-13, "mass");
        expect_rel(f2.variance, 1.7 * 1.7 * f1.variance, 1e-13, "variance");
    }
}

TEST(QuadraticPhase, IdentityAndComposition) {
    const auto e = make_params(3, 3);
    auto f = gaussian_functionals(1.1, 0.7, e);
    f.variance_rate = 0.3;  // arbitrary starting rate
    f.grad_sq += 0.2;
    f.energy = energy_of(f.grad_sq, f.lp1, e.p);
    const auto same = modulate_quadratic_phase(f, 0.0, e.p);
    EXPECT_EQ(same.energy, f.energy);
    EXPECT_EQ(same.variance_rate, f.variance_rate);
    const auto twice = modulate_quadratic_phase(modulate_quadratic_phase(f, 0.4, e.p), -1.1, e.p);
    const auto once = modulate_quadratic_phase(f, -0.7, e.p);
    EXPECT_NEAR(twice.grad_sq, once.grad_sq, 1e-13);
    EXPECT_NEAR(twice.variance_rate, once.variance_rate, 1e-13);
    EXPECT_NEAR(twice.energy, once.energy, 1e-13);
    EXPECT_EQ(twice.mass, f.mass);
    EXPECT_EQ(twice.lp1, f.lp1);
    EXPECT_EQ(twice.variance, f.variance);
}

TEST(QuadraticPhase, InvariantCombination) {
    const auto e = make_params(5, 3);
    const auto f = gaussian_functionals(0.8, 1.2, e);
    auto inv = [](const Functionals& g) { return g.energy - g.variance_rate * g.variance_rate / (32 * g.variance); };
    for (double gamma : {-3.0, -0.5, 0.1, 2.0, 10.0}) {
        const auto g = modulate_quadratic_phase(f, gamma, e.p);
        EXPECT_NEAR(inv(g), inv(f), 1e-12 * std::max(1.0, std::abs(g.energy)));
    }
}

TEST(QuadraticPhase, EnergyGrowsQuadraticallyInGamma) {
    const auto e = make_params(7, 1);
    const auto f = gaussian_functionals(1.0, 1.0, e);
    const double g = 1e4;
    const auto big = modulate_quadratic_phase(f, g, e.p);
    EXPECT_NEAR(big.energy / (g * g * f.variance), 2.0, 1e-3);
    EXPECT_GT(modulate_quadratic_phase(f, -g, e.p).energy, 1e7);
}

TEST(QuadraticPhase, MatchesGridEvaluation) {
    const auto ctx = make_context(3, 3);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        const auto b = oracle::random_bump(rng);
        const auto field = sample_field(3, 14.0, 8192, [&](double r) { return cplx{b(r), 0.2 * b(r) * r}; });
        const auto base = grid_functionals(field, ctx);
        const auto direct = grid_functionals(apply_quadratic_phase(field, 0.6), ctx);
        const auto formula = modulate_quadratic_phase(base, 0.6, ctx);
        expect_rel(direct.grad_sq, formula.grad_sq, 1e-7, "grad");
        expect_rel(direct.variance_rate, formula.variance_rate, 1e-7, "rate");
    }
}

TEST(UncertaintyGap, NonnegativeOnRandomFields) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> ph(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const int N = 1 + i % 4;
        const auto b = oracle::random_bump(rng);
        const double c = ph(rng);
        const auto f = grid_functionals(
            sample_field(N, 14.0, 4096, [&](double r) { return b(r) * std::polar(1.0, c * std::sin(r * r)); }), 3.0 + N);
        EXPECT_GE(uncertainty_gap(f, N), -1e-12 * f.variance * f.grad_sq);
    }
}

TEST(UncertaintyGap, GaussianIsExtremal) {
    for (int N = 1; N <= 5; ++N) {
        const auto e = make_params(9, N);
        for (double gamma : {0.0, 0.7, -2.0}) {
            const auto f = modulate_quadratic_phase(gaussian_functionals(0.6, 1.3, e), gamma, e.p);
            EXPECT_NEAR(uncertainty_gap(f, N), 0.0, 1e-12 * f.variance * f.grad_sq);
        }
    }
}

TEST(UncertaintyGap, EqualsCauchySchwarzDefectOfTwoGaussians) {
    // u = e^{-r^2/2} + 0.5 e^{-2 r^2}, N = 3, real: gap = V G - (N^2/4) M^2 from direct integrals
    const int N = 3;
    auto u = [](double r) { return std::exp(-0.5 * r * r) + 0.5 * std::exp(-2 * r * r); };
    auto du = [](double r) { return -r * std::exp(-0.5 * r * r) - 2 * r * std::exp(-2 * r * r); };
    const double M = oracle::radial([&](double r) { return u(r) * u(r); }, N, 20);
    const double V = oracle::radial([&](double r) { return r * r * u(r) * u(r); }, N, 20);
    const double G = oracle::radial([&](double r) { return du(r) * du(r); }, N, 20);
    const auto f = grid_functionals(sample_field(N, 14.0, 4096, [&](double r) { return cplx{u(r), 0.0}; }), 3.0);
    const double ref = V * G - 2.25 * M * M;
    EXPECT_GT(ref, 0.0);
    EXPECT_NEAR(uncertainty_gap(f, N), ref, 1e-7 * V * G);
}

TEST(UncertaintyGap, ScalesWithNlsScaling) {
    const int N = 2;
    const double p = 4;
    std::mt19937_64 rng(23);
    const auto b = oracle::random_bump(rng);
    const auto field = sample_field(N, 14.0, 4096, [&](double r) { return cplx{b(r), 0.1 * b(r)}; });
    const double g1 = uncertainty_gap(grid_functionals(field, p), N);
    for (double lam : {0.5, 2.0}) {
        const double g2 = uncertainty_gap(grid_functionals(scale_field(field, lam, p), p), N);
        EXPECT_NEAR(g2 / g1, std::pow(lam, 2 * (4 / (p - 1) - N)), 1e-8);
    }
}

TEST(BanicaGap, VanishesOnPhasedGroundState) {
    for (auto [p, N] : {std::pair{7.0, 1}, std::pair{3.0, 3}}) {
        const auto ctx = make_context(p, N);
        for (double lam : {-1.0, 0.0, 0.5}) {
            // analytic route
            const auto fa = evaluate_functionals(InitialData::ground_state(1.0, lam), ctx);
            EXPECT_NEAR(banica_gap(fa, ctx), 0.0, 1e-9 * fa.variance * fa.grad_sq);
            // sampled route
            const auto field = sample_initial_data(InitialData::ground_state(1.0, lam), ctx, 16384);
            EXPECT_LT(std::abs(banica_gap(field, ctx)), 1e-6) << p << "," << N << " lam " << lam;
        }
    }
}

TEST(BanicaGap, PositiveOnRandomBumps) {
    const auto ctx = make_context(3, 3);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 50; ++i) {
        const auto b = oracle::random_bump(rng);
        const auto f = grid_functionals(sample_field(3, 14.0, 4096, [&](double r) { return cplx{b(r), 0.0}; }), ctx);
        EXPECT_GT(banica_gap(f, ctx), 0.0);
    }
}

TEST(GnVariational, SmallerGradientImpliesSmallerPotential) {
    // M^{1-s}(∫|∇f|^2)^s below the Q value forces M^{1-s}(∫|f|^{p+1})^s below the Q value.
    const auto ctx = make_context(3, 3);
    const double s = ctx.params.s_c;
    const auto& Q = *ctx.gs;
    const double grad_ref = std::pow(Q.grad_sq, s) * std::pow(Q.mass(), 1 - s);
    const double lp1_ref = std::pow(Q.lp1, s) * std::pow(Q.mass(), 1 - s);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> amp(0.3, 6.0);
    int premises = 0;
    for (int i = 0; i < 200; ++i) {
        const auto b = oracle::random_bump(rng);
        const double a = amp(rng);
        const auto f = grid_functionals(sample_field(3, 14.0, 4096, [&](double r) { return cplx{a * b(r), 0.0}; }), ctx);
        if (std::pow(f.grad_sq, s) * std::pow(f.mass, 1 - s) < grad_ref) {
            ++premises;
            EXPECT_LT(std::pow(f.lp1, s) * std::pow(f.mass, 1 - s), lp1_ref);
        }
    }
    EXPECT_GT(premises, 20);
}

TEST(InterpolationInequality, HoldsOnCompactProfiles) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const int N = 1 + i % 5;
        const double p = 1.5 + 6 * u(rng);
        const double a = 0.3 + 3 * u(rng), c1 = u(rng), c2 = 2 * u(rng) - 1;
        auto prof = [&](double r) { return std::pow(1 - r * r, a) * (1 + c1 * r + c2 * r * r); };
        Functionals f;
        f.mass = oracle::radial([&](double r) { return std::pow(prof(r), 2); }, N, 1);
        f.variance = oracle::radial([&](double r) { return r * r * std::pow(prof(r), 2); }, N, 1);
        f.lp1 = oracle::radial([&](double r) { return std::pow(std::abs(prof(r)), p + 1); }, N, 1);
        const auto sides = interpolation_sides(f, p, N, interpolation_constant(p, N));
        EXPECT_GE(sides.margin(), -1e-10) << "N=" << N << " p=" << p;
    }
}

TEST(InterpolationInequality, ExtremizerAttainsEquality) {
    for (auto [p, N] : {std::pair{3.0, 1}, std::pair{5.0, 3}, std::pair{2.0, 2}, std::pair{7.0, 4}, std::pair{1.5, 5}}) {
        auto phi = [&](double r) { return std::pow(1 - r * r, 1 / (p - 1)); };
        Functionals f;
        f.mass = oracle::radial([&](double r) { return std::pow(phi(r), 2); }, N, 1);
        f.variance = oracle::radial([&](double r) { return r * r * std::pow(phi(r), 2); }, N, 1);
        f.lp1 = oracle::radial([&](double r) { return std::pow(phi(r), p + 1); }, N, 1);
        const auto sides = interpolation_sides(f, p, N, interpolation_constant(p, N));
        EXPECT_NEAR(sides.lhs / sides.rhs, 1.0, 1e-6);
    }
}

TEST(FieldCsv, RoundTrip) {
    const auto field = sample_field(2, 5.0, 64, [](double r) { return cplx{std::exp(-r * r), 0.5 * r}; });
    std::stringstream ss;
    write_field_csv(ss, field);
    const auto back = read_field_csv(ss, 2);
    ASSERT_EQ(back.size(), field.size());
    for (std::size_t j = 0; j < field.size(); ++j) {
        EXPECT_EQ(back.values()[j], field.values()[j]);
        EXPECT_EQ(back.radii()[j], field.radii()[j]);
    }
}

TEST(FieldCsv, RejectsMalformed) {
    std::stringstream bad_header("x,y,z\n0,1,0\n");
    EXPECT_THROW(read_field_csv(bad_header, 1), MalformedInput);
    std::stringstream descending("r,re,im\n0,1,0\n0.2,1,0\n0.1,1,0\n0.3,0,0\n0.4,0,0\n0.5,0,0\n0.6,0,0\n0.7,0,0\n");
    EXPECT_THROW(read_field_csv(descending, 1), MalformedInput);
    std::stringstream junk("r,re,im\n0,abc,0\n");
    EXPECT_THROW(read_field_csv(junk, 1), MalformedInput);
}

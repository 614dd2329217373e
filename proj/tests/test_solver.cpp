#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "nlslab/solver.hpp"
#include "nlslab/thresholds.hpp"

using namespace nlslab;

namespace {

const ParamsContext& septic() {
    static const ParamsContext ctx = make_context(7, 1);
    return ctx;
}

SolverConfig closed_config(int points = 8192, double R = 30.0) {
    SolverConfig c;
    c.points = points;
    c.outer_radius = R;
    c.output_dt = 0.02;
    return c;
}

double max_modulus_gap(const FieldGrid& a, const FieldGrid& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(std::abs(a.values()[j]) - std::abs(b.values()[j])));
    return worst;
}

}  // namespace

TEST(SolverConfig, Validation) {
    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.points = 100;
    EXPECT_THROW(c.validate(), MalformedInput);
    c = SolverConfig{};
    c.blowup_factor = 5.0;
    EXPECT_THROW(c.validate(), MalformedInput);
    c = SolverConfig{};
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), MalformedInput);
    c = SolverConfig{};
    c.absorbing_layer_width = c.outer_radius;
    EXPECT_THROW(c.validate(), MalformedInput);
}

TEST(Solver, FreeEvolutionConservesMassAndGrowsVarianceQuadratically) {
    const auto& ctx = septic();
    auto c = closed_config(8192, 40.0);
    c.nonlinearity = 0.0;
    c.t_max = 2.0;
    const auto traj = evolve(InitialData::gaussian(1.0, 1.0), c, ctx);
    const auto& P = traj.points;
    const auto& q0 = P.front();
    for (const auto& q : P) {
        EXPECT_NEAR(q.mass, q0.mass, 1e-10 * q0.mass);
        // V_tt = 8 ∫|∇u|^2 is constant and V_t(0) = 0
        const double model = q0.variance + 4.0 * q0.grad_sq * q.t * q.t;
        EXPECT_NEAR(q.variance, model, 1e-4 * model) << q.t;
    }
    EXPECT_LT(virial_residual(traj, ctx.params), 1e-4);
}

TEST(Solver, GroundStateIsStationary) {
    const auto& ctx = septic();
    auto c = closed_config(8192, 20.0);
    c.scheme = Scheme::CrankNicolson;
    c.t_max = 5.0;
    const auto init = solver_initial_field(InitialData::ground_state(), c, ctx);
    const auto traj = evolve_field(init, c, 7.0);
    EXPECT_LT(max_modulus_gap(traj.final_field, init), 1e-4);
    EXPECT_TRUE(std::holds_alternative<BoundedUntilTmax>(detect_blowup(traj, c)));
    // the prepared profile is the continuum ground state up to discretisation error
    const auto sampled = sample_initial_data(InitialData::ground_state(), ctx, 8192, 20.0);
    EXPECT_LT(max_modulus_gap(init, sampled), 1e-4);
}

TEST(Solver, DiscreteGroundStateSolvesTheGridEquation) {
    const auto& ctx = septic();
    const auto sampled = sample_initial_data(InitialData::ground_state(), ctx, 4096, 20.0);
    const double mu = 1.0 - ctx.params.s_c;
    const auto P = discrete_ground_state(sampled, 7.0, mu);
    detail::RadialOperator L(1, sampled.step(), sampled.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < P.size(); ++j) {
        double lo, di, up;
        L.row(j, lo, di, up);
        double LP = di * P[j] + (j > 0 ? lo * P[j - 1] : 0.0) + (j + 1 < P.size() ? up * P[j + 1] : 0.0);
        worst = std::max(worst, std::abs(LP - mu * P[j] + std::pow(P[j], 7.0)));
    }
    EXPECT_LT(worst, 1e-7);
}

TEST(Solver, SmoothRunConservationAndVirial) {
    const auto& ctx = septic();
    auto c = closed_config(16384, 60.0);
    c.t_max = 3.0;
    c.dt = 2e-3;
    const auto traj = evolve(InitialData::gaussian(1.0, 0.9, 0.1), c, ctx);
    const auto drift = conservation_drift(traj);
    EXPECT_LT(drift.mass, 1e-6);
    EXPECT_LT(drift.energy, 1e-4);
    EXPECT_LT(virial_residual(traj, ctx.params), 1e-3);
    EXPECT_LT(variance_tracking_error(traj), 1e-3);
}

TEST(Solver, StrangSplittingIsSecondOrderInTime) {
    const auto& ctx = septic();
    std::vector<double> errs;
    for (double dt : {0.02, 0.01, 0.005}) {
        auto c = closed_config(4096, 30.0);
        c.t_max = 1.0;
        c.dt = dt;
        c.output_dt = 0.1;
        c.phase_cap = 10.0;
        const auto traj = evolve(InitialData::gaussian(1.0, 1.1), c, ctx);
        const auto drift = conservation_drift(traj);
        EXPECT_LT(drift.mass, 1e-6);
        errs.push_back(std::abs(traj.points.back().energy - traj.points.front().energy));
    }
    EXPECT_GT(errs[0] / errs[1], 3.5);
    EXPECT_GT(errs[1] / errs[2], 3.5);
}

TEST(Solver, TimeReversal) {
    const auto& ctx = septic();
    auto c = closed_config(4096, 30.0);
    c.t_max = 1.0;
    c.dt = 5e-3;
    c.output_dt = 0.1;
    c.phase_cap = 10.0;
    const auto init = sample_initial_data(InitialData::gaussian(1.0, 1.0, 0.2), ctx, 4096, 30.0);
    auto there = evolve_field(init, c, 7.0).final_field;
    std::vector<cplx> v = there.values();
    for (auto& z : v) z = std::conj(z);
    auto back = evolve_field(FieldGrid(1, there.radii(), v), c, 7.0).final_field;
    double worst = 0.0;
    for (std::size_t j = 0; j < init.size(); ++j) {
        worst = std::max(worst, std::abs(std::conj(back.values()[j]) - init.values()[j]));
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(Solver, PhasedGroundStateForwardBehaviour) {
    const auto& ctx = septic();
    const auto cfg = default_solver_config(ctx, true);
    auto c = cfg;
    c.t_max = 10.0;
    const auto down = InitialData::ground_state(1.0, -0.3);
    const auto rep_down = classify(down, ctx);
    const auto res_down = verify_verdict(down, rep_down, c, ctx);
    EXPECT_EQ(rep_down.verdict, Verdict::BlowsUpForward);
    EXPECT_TRUE(std::holds_alternative<BlewUp>(res_down.outcome)) << res_down.detail;
    EXPECT_TRUE(res_down.consistent) << res_down.detail;

    const auto up = InitialData::ground_state(1.0, 0.3);
    const auto rep_up = classify(up, ctx);
    const auto res_up = verify_verdict(up, rep_up, c, ctx);
    EXPECT_EQ(rep_up.verdict, Verdict::ScattersForward);
    EXPECT_TRUE(std::holds_alternative<BoundedUntilTmax>(res_up.outcome)) << res_up.detail;
    EXPECT_TRUE(res_up.consistent) << res_up.detail;
}

TEST(Solver, SepticGaussiansAgreeWithClassifier) {
    const auto& ctx = septic();
    auto c = default_solver_config(ctx, true);
    c.t_max = 10.0;
    for (double kappa : {0.9, 2.0}) {
        const auto data = InitialData::gaussian(1.0, kappa);
        const auto rep = classify(data, ctx);
        const auto res = verify_verdict(data, rep, c, ctx);
        EXPECT_TRUE(res.consistent) << kappa << ": " << res.detail;
        if (kappa < 1.0) {
            EXPECT_TRUE(std::holds_alternative<BoundedUntilTmax>(res.outcome));
        } else {
            EXPECT_TRUE(std::holds_alternative<BlewUp>(res.outcome));
        }
    }
}

TEST(Solver, OutcomesStableUnderRefinement) {
    const auto& ctx = septic();
    for (double gamma : {-0.3, 0.3}) {
        std::vector<std::string> names;
        for (int pts : {16384, 32768}) {
            auto c = default_solver_config(ctx, true);
            c.points = pts;
            c.t_max = 6.0;
            names.push_back(outcome_name(detect_blowup(evolve(InitialData::ground_state(1.0, gamma), c, ctx), c)));
        }
        EXPECT_EQ(names[0], names[1]) << gamma;
        EXPECT_NE(names[0], "Inconclusive") << gamma;
    }
}

TEST(Solver, RadialNegativeEnergyCollapse) {
    const auto ctx = make_context(3, 3);
    const auto data = InitialData::gaussian(1.0, 4.0);
    ASSERT_LT(evaluate_functionals(data, ctx).energy, 0.0);
    auto c = default_solver_config(ctx, false);
    c.t_max = 2.0;
    // in 3-d the cubic gradient norm grows only like 1/width, so 1e3 is out of reach at 4 cells
    c.blowup_factor = 20.0;
    const auto traj = evolve(data, c, ctx);
    ASSERT_TRUE(traj.alarm_time);
    EXPECT_TRUE(std::holds_alternative<BlewUp>(detect_blowup(traj, c)));
}

TEST(Solver, RadialSmoothRunConserves) {
    const auto ctx = make_context(3, 3);
    auto c = default_solver_config(ctx, false);
    c.t_max = 1.0;
    c.dt = 2e-3;
    const auto traj = evolve(InitialData::gaussian(1.0, 0.8), c, ctx);
    const auto drift = conservation_drift(traj);
    EXPECT_LT(drift.mass, 1e-6);
    EXPECT_LT(drift.energy, 1e-4);
    EXPECT_LT(virial_residual(traj, ctx.params), 1e-3);
}

TEST(DetectBlowup, InconclusiveWhenNormsGrowWithoutAlarm) {
    Trajectory t;
    TrajectoryPoint a;
    a.grad_sq = 1.0;
    a.lp1 = 1.0;
    a.sup_amp = 1.0;
    t.points.push_back(a);
    a.grad_sq = 50.0;
    t.points.push_back(a);
    EXPECT_TRUE(std::holds_alternative<Inconclusive>(detect_blowup(t, SolverConfig{})));
    EXPECT_THROW(detect_blowup(Trajectory{}, SolverConfig{}), MalformedInput);
}

TEST(DetectBlowup, VerifyRejectsUnknownVerdict) {
    EXPECT_THROW(verify_verdict(InitialData::gaussian(1.0, 1.0), CriterionReport{}, SolverConfig{}, septic()),
                 NotApplicable);
}

TEST(Trajectory, CsvHeader) {
    Trajectory t;
    t.points.push_back(TrajectoryPoint{});
    std::ostringstream out;
    write_trajectory_csv(out, t);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t,mass,energy,variance,variance_rate,grad_sq,lp1,sup_amp");
}

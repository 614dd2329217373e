#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlslab/nlslab.hpp"

namespace nlslab::cli {

enum ExitCode { Ok = 0, Failure = 1, UnknownVerdict = 2, InconclusiveRun = 3 };

inline std::string error_kind(const Error& e) {
    if (dynamic_cast<const MalformedInput*>(&e)) return "MalformedInput";
    if (dynamic_cast<const OutOfRegime*>(&e)) return "OutOfRegime";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const NotApplicable*>(&e)) return "NotApplicable";
    if (dynamic_cast<const NonConvergence*>(&e)) return "NonConvergence";
    if (dynamic_cast<const InconsistencyError*>(&e)) return "InconsistencyError";
    if (dynamic_cast<const ResolutionError*>(&e)) return "ResolutionError";
    if (dynamic_cast<const InstabilityError*>(&e)) return "InstabilityError";
    return "Error";
}

/// Runs fn on the named file, or on `fallback` when the path is empty or "-".
inline void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream out(path);
    if (!out) throw MalformedInput("cannot write '" + path + "'");
    fn(out);
}

inline json constants_document(const ParamsContext& ctx) {
    const auto& e = ctx.params;
    const auto& sc = ctx.sharp;
    json j;
    j["p"] = e.p;
    j["N"] = e.N;
    j["s_c"] = e.s_c;
    j["k"] = e.k;
    j["A"] = e.A;
    j["kappa"] = e.kappa;
    j["well_posed"] = e.well_posed;
    j["C_pN"] = sc.C_pN;
    j["D_pN"] = sc.D_pN;
    if (e.s_c <= 1.0) {
        j["c_Q"] = sc.c_Q;
        j["c_gn"] = sc.c_gn;
    }
    if (sc.E_W) j["E_W"] = *sc.E_W;
    if (sc.gradW_sq) j["grad_W_sq"] = *sc.gradW_sq;
    if (ctx.gs) {
        const auto& g = *ctx.gs;
        json q;
        q["kind"] = g.kind == GroundStateKind::ClosedFormW ? "closed_form_w"
                    : g.kind == GroundStateKind::Shot1D  ? "shot_1d"
                                                         : "shot_radial";
        q["peak"] = g.peak;
        q["mass"] = g.mass_value ? json(*g.mass_value) : json(nullptr);
        q["energy"] = g.energy;
        q["lp1"] = g.lp1;
        q["grad_sq"] = g.grad_sq;
        q["variance"] = g.variance_value ? json(*g.variance_value) : json(nullptr);
        j["ground_state"] = q;
    }
    return j;
}

/// Options shared by the commands that take an equation and a datum.
struct DataOptions {
    std::string input;
    std::optional<double> p;
    std::optional<int> N;
    std::string data;

    void attach(CLI::App* sub) {
        sub->add_option("--input", input, "run spec JSON file (a classify report also works)");
        sub->add_option("--p", p, "nonlinearity exponent");
        sub->add_option("--N", N, "dimension");
        sub->add_option("--data", data, "initial-data JSON descriptor");
    }

    RunSpec resolve(Command cmd) const {
        if (!input.empty()) {
            auto spec = run_spec_from_json(read_json_file(input), cmd);
            spec.command = cmd;
            return spec;
        }
        if (!p || !N) throw MalformedInput("give --input, or --p and --N");
        json j;
        j["command"] = command_name(cmd);
        j["p"] = *p;
        j["N"] = *N;
        if (!data.empty()) j["data"] = parse_json_text(data);
        return run_spec_from_json(j, cmd);
    }
};

struct SolverOptions {
    std::optional<double> t_max, dt, radius, blowup_factor, nonlinearity, output_dt;
    std::optional<int> points;
    std::string scheme;
    bool absorbing = false;

    void attach(CLI::App* sub) {
        sub->add_option("--t-max", t_max, "final time");
        sub->add_option("--dt", dt, "largest time step");
        sub->add_option("--radius", radius, "outer radius of the grid");
        sub->add_option("--points", points, "grid points");
        sub->add_option("--blowup-factor", blowup_factor, "growth factor that counts as blow-up");
        sub->add_option("--nonlinearity", nonlinearity, "coefficient of |u|^{p-1}u (0 = free equation)");
        sub->add_option("--output-dt", output_dt, "spacing of recorded points");
        sub->add_option("--scheme", scheme, "strang | crank_nicolson")->check(CLI::IsMember({"strang", "crank_nicolson"}));
        sub->add_flag("--absorbing", absorbing, "damp outgoing radiation near the outer boundary");
    }

    SolverConfig config(const ParamsContext& ctx) const {
        auto c = default_solver_config(ctx, absorbing);
        if (t_max) c.t_max = *t_max;
        if (dt) c.dt = *dt;
        if (radius) {
            c.outer_radius = *radius;
            if (absorbing) c.absorbing_layer_width = 0.1 * c.outer_radius;
        }
        if (points) c.points = *points;
        if (blowup_factor) c.blowup_factor = *blowup_factor;
        if (nonlinearity) c.nonlinearity = *nonlinearity;
        if (output_dt) c.output_dt = *output_dt;
        if (scheme == "crank_nicolson") c.scheme = Scheme::CrankNicolson;
        c.validate();
        return c;
    }
};

inline json outcome_document(const EvolutionOutcome& o) {
    json j;
    j["outcome"] = outcome_name(o);
    if (const auto* b = std::get_if<BlewUp>(&o)) j["t_star"] = b->t_star;
    if (const auto* b = std::get_if<BoundedUntilTmax>(&o)) {
        j["max_grad_sq"] = b->max_grad_sq;
        j["max_lp1"] = b->max_lp1;
    }
    if (const auto* b = std::get_if<Inconclusive>(&o)) j["reason"] = b->reason;
    return j;
}

/// Parses argv and runs one command; returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Blow-up and scattering criteria for the focusing NLS"};
    app.require_subcommand(1);

    double cp = 0.0;
    int cN = 0;
    std::string output;
    auto* constants = app.add_subcommand("constants", "sharp constants and ground-state quantities (JSON)");
    constants->add_option("--p", cp, "nonlinearity exponent")->required();
    constants->add_option("--N", cN, "dimension")->required();
    constants->add_option("--output,-o", output, "output file");

    DataOptions classify_opts;
    auto* classify_cmd = app.add_subcommand("classify", "evaluate every criterion on a datum (JSON report)");
    classify_opts.attach(classify_cmd);
    classify_cmd->add_option("--output,-o", output, "output file");

    std::string table;
    int n_min = 3, n_max = 8;
    auto* tables = app.add_subcommand("tables", "energy-critical Gaussian threshold tables (CSV, 4 decimals)");
    tables->add_option("table", table, "kappa_energy | gaussian_thresholds")->required();
    tables->add_option("--N-min", n_min, "smallest dimension");
    tables->add_option("--N-max", n_max, "largest dimension");
    tables->add_option("--output,-o", output, "output file");

    double sp = 0.0;
    int sN = 0;
    double a_min = 0.1, a_max = 4.0, b_min = 0.1, b_max = 4.0;
    int a_count = 40, b_count = 0;
    std::string plane;
    auto* sweep = app.add_subcommand("sweep", "threshold curves in the Gaussian (alpha, beta) plane (CSV)");
    sweep->add_option("--p", sp, "nonlinearity exponent")->required();
    sweep->add_option("--N", sN, "dimension")->required();
    sweep->add_option("--alpha-min", a_min);
    sweep->add_option("--alpha-max", a_max);
    sweep->add_option("--alpha-count", a_count);
    sweep->add_option("--beta-min", b_min);
    sweep->add_option("--beta-max", b_max);
    sweep->add_option("--beta-count", b_count, "beta points of the classified plane (0 skips it)");
    sweep->add_option("--plane", plane, "CSV file for the classified alpha x beta plane");
    sweep->add_option("--output,-o", output, "curve CSV file");

    DataOptions sim_data, ver_data;
    SolverOptions sim_solver, ver_solver;
    std::string report_path, trajectory_path;
    auto* simulate = app.add_subcommand("simulate", "evolve a radial datum (trajectory CSV)");
    sim_data.attach(simulate);
    sim_solver.attach(simulate);
    simulate->add_option("--output,-o", output, "trajectory CSV file");
    simulate->add_option("--report", report_path, "JSON file for the run outcome");
    auto* verify = app.add_subcommand("verify", "run a datum and compare with its classification (JSON)");
    ver_data.attach(verify);
    ver_solver.attach(verify);
    verify->add_option("--output,-o", output, "JSON result file");
    verify->add_option("--trajectory", trajectory_path, "trajectory CSV file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Failure;
    }

    try {
        if (constants->parsed()) {
            const auto doc = constants_document(make_context(cp, cN));
            with_output(output, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
            return Ok;
        }
        if (classify_cmd->parsed()) {
            const auto spec = classify_opts.resolve(Command::Classify);
            const auto ctx = make_context(spec.p, spec.N);
            const auto rep = classify(spec.data->data, ctx);
            with_output(output, out, [&](std::ostream& o) { o << classify_document(spec, rep).dump(2) << '\n'; });
            return rep.verdict == Verdict::Unknown ? UnknownVerdict : Ok;
        }
        if (tables->parsed()) {
            const auto kind = parse_table_kind(table);
            const auto rows = threshold_table(kind, n_min, n_max);
            with_output(output, out, [&](std::ostream& o) { write_table_csv(o, kind, rows); });
            return Ok;
        }
        if (sweep->parsed()) {
            const auto ctx = make_context(sp, sN);
            const auto alphas = linear_grid(a_min, a_max, a_count);
            const auto rows = sweep_curves(ctx, alphas);
            with_output(output, out, [&](std::ostream& o) { write_curves_csv(o, rows); });
            if (b_count > 0) {
                const auto pts = sweep_plane(ctx, alphas, linear_grid(b_min, b_max, b_count));
                with_output(plane, out, [&](std::ostream& o) { write_plane_csv(o, pts); });
            }
            return Ok;
        }
        if (simulate->parsed()) {
            const auto spec = sim_data.resolve(Command::Simulate);
            const auto ctx = make_context(spec.p, spec.N);
            const auto cfg = sim_solver.config(ctx);
            try {
                const auto traj = evolve(spec.data->data, cfg, ctx);
                const auto outcome = detect_blowup(traj, cfg);
                with_output(output, out, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
                if (!report_path.empty()) {
                    with_output(report_path, out, [&](std::ostream& o) { o << outcome_document(outcome).dump(2) << '\n'; });
                }
                if (std::holds_alternative<Inconclusive>(outcome)) {
                    err << "inconclusive: " << std::get<Inconclusive>(outcome).reason << '\n';
                    return InconclusiveRun;
                }
                return Ok;
            } catch (const InstabilityError& e) {
                err << "error (InstabilityError): " << e.what() << '\n';
                return InconclusiveRun;
            }
        }
        if (verify->parsed()) {
            const auto spec = ver_data.resolve(Command::Verify);
            const auto ctx = make_context(spec.p, spec.N);
            const auto cfg = ver_solver.config(ctx);
            const auto rep = classify(spec.data->data, ctx);
            if (rep.verdict == Verdict::Unknown) {
                err << "verdict is Unknown; nothing to verify\n";
                return UnknownVerdict;
            }
            try {
                if (!trajectory_path.empty()) {
                    const auto traj = evolve(spec.data->data, cfg, ctx);
                    with_output(trajectory_path, out, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
                }
                const auto res = verify_verdict(spec.data->data, rep, cfg, ctx);
                json doc;
                doc["verdict"] = verdict_name(rep.verdict);
                const json outcome = outcome_document(res.outcome);
                for (const auto& [k, v] : outcome.items()) doc[k] = v;
                doc["consistent"] = res.consistent;
                doc["detail"] = res.detail;
                with_output(output, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
                if (std::holds_alternative<Inconclusive>(res.outcome)) return InconclusiveRun;
                if (!res.consistent) {
                    err << "run does not confirm the verdict: " << res.detail << '\n';
                    return Failure;
                }
                return Ok;
            } catch (const InstabilityError& e) {
                err << "error (InstabilityError): " << e.what() << '\n';
                return InconclusiveRun;
            }
        }
    } catch (const Error& e) {
        err << "error (" << error_kind(e) << "): " << e.what() << '\n';
        return Failure;
    } catch (const json::exception& e) {
        err << "error (MalformedInput): " << e.what() << '\n';
        return Failure;
    }
    return Failure;
}

}  // namespace nlslab::cli

#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nlslab/criteria.hpp"
#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

using json = nlohmann::ordered_json;

namespace detail {

// JSON has no literal for inf/nan; they travel as strings so reports round-trip.
inline json real_to_json(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

inline double real_from_json(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw MalformedInput("expected a number for '" + what + "'");
}

inline const json& require_key(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw MalformedInput(where + ": missing '" + key + "'");
    return j.at(key);
}

inline double finite_number(const json& j, const char* key, const std::string& where) {
    const json& v = require_key(j, key, where);
    if (!v.is_number()) throw MalformedInput(where + ": '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw MalformedInput(where + ": '" + key + "' must be finite");
    return x;
}

inline double optional_number(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? finite_number(j, key, where) : fallback;
}

inline const char* relation_key(Relation r) {
    switch (r) {
        case Relation::Less: return "lt";
        case Relation::LessEqual: return "le";
        case Relation::Greater: return "gt";
        case Relation::GreaterEqual: return "ge";
        case Relation::Equal: return "eq";
    }
    return "eq";
}

inline Relation parse_relation(const std::string& s) {
    for (Relation r : {Relation::Less, Relation::LessEqual, Relation::Greater, Relation::GreaterEqual, Relation::Equal}) {
        if (s == relation_key(r)) return r;
    }
    throw MalformedInput("unknown relation '" + s + "'");
}

inline json optional_to_json(const std::optional<double>& x) { return x ? real_to_json(*x) : json(nullptr); }

inline std::optional<double> optional_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return real_from_json(j.at(key), key);
}

}  // namespace detail

/// Initial-data descriptor as written in JSON; grid data keeps its file path.
struct DataSpec {
    InitialData data;
    std::string grid_file;
};

inline json data_to_json(const DataSpec& spec) {
    json j;
    const auto& d = spec.data;
    if (const auto* g = std::get_if<Gaussian>(&d.shape)) {
        j["type"] = "gaussian";
        j["alpha"] = g->alpha;
        j["beta"] = g->beta;
    } else if (const auto* s = std::get_if<GroundStateScaled>(&d.shape)) {
        j["type"] = "ground_state";
        j["scale"] = s->scale;
    } else {
        j["type"] = "grid";
        j["file"] = spec.grid_file;
    }
    j["phase_gamma"] = d.phase_gamma;
    if (!d.radial) j["radial"] = false;
    return j;
}

/// Parses a data descriptor; grid files are read as r,re,im CSV in dimension N.
inline DataSpec data_from_json(const json& j, int N) {
    const std::string where = "data";
    if (!j.is_object()) throw MalformedInput("data: expected a JSON object");
    const json& type = detail::require_key(j, "type", where);
    if (!type.is_string()) throw MalformedInput("data: 'type' must be a string");
    const auto t = type.get<std::string>();
    const double gamma = detail::optional_number(j, "phase_gamma", 0.0, where);
    DataSpec spec;
    if (t == "gaussian") {
        spec.data = InitialData::gaussian(detail::finite_number(j, "alpha", where),
                                          detail::finite_number(j, "beta", where), gamma);
    } else if (t == "ground_state") {
        spec.data = InitialData::ground_state(detail::optional_number(j, "scale", 1.0, where), gamma);
    } else if (t == "grid") {
        const json& file = detail::require_key(j, "file", where);
        if (!file.is_string()) throw MalformedInput("data: 'file' must be a string");
        spec.grid_file = file.get<std::string>();
        spec.data = InitialData::grid(read_field_csv(spec.grid_file, N));
        spec.data.phase_gamma = gamma;
    } else {
        throw MalformedInput("data: unknown type '" + t + "'");
    }
    if (j.contains("radial")) {
        if (!j.at("radial").is_boolean()) throw MalformedInput("data: 'radial' must be a boolean");
        spec.data.radial = j.at("radial").get<bool>();
    }
    return spec;
}

/// Rejects descriptors whose variance ∫|x|^2|u|^2 is infinite.
inline void require_finite_variance(const DataSpec& spec, const EquationParams& e) {
    if (std::holds_alternative<GroundStateScaled>(spec.data.shape) && e.energy_critical() && e.N <= 6) {
        throw MalformedInput("data: |x| W is not square integrable for N <= 6; the variance is infinite");
    }
    if (std::holds_alternative<GroundStateScaled>(spec.data.shape) && e.s_c > 1.0) {
        throw MalformedInput("data: no ground state exists for s_c > 1");
    }
}

inline json report_to_json(const CriterionReport& rep) {
    json j;
    j["verdict"] = verdict_name(rep.verdict);
    json fired = json::array();
    for (const auto* c : rep.fired()) fired.push_back(c->id);
    j["fired"] = fired;
    j["caveats"] = rep.caveats;
    json criteria = json::array();
    for (const auto& c : rep.criteria) {
        json cj;
        cj["id"] = c.id;
        cj["fired"] = c.fired;
        cj["conclusion"] = verdict_name(c.conclusion);
        json conds = json::array();
        for (const auto& q : c.conditions) {
            conds.push_back({{"id", q.id},
                             {"lhs", detail::real_to_json(q.lhs)},
                             {"relation", detail::relation_key(q.relation)},
                             {"rhs", detail::real_to_json(q.rhs)},
                             {"holds", q.holds}});
        }
        cj["conditions"] = conds;
        criteria.push_back(cj);
    }
    j["criteria"] = criteria;
    j["mass_energy"] = detail::optional_to_json(rep.mass_energy);
    j["renorm_lp1"] = detail::optional_to_json(rep.renorm_lp1);
    j["sigma_m"] = detail::optional_to_json(rep.sigma_m);
    j["lp1_bound"] = detail::optional_to_json(rep.lp1_bound);
    json diag = json::array();
    for (const auto& [name, value] : rep.diagnostics) diag.push_back({{"name", name}, {"value", detail::real_to_json(value)}});
    j["diagnostics"] = diag;
    return j;
}

inline CriterionReport report_from_json(const json& j) {
    const std::string where = "report";
    CriterionReport rep;
    rep.verdict = parse_verdict(detail::require_key(j, "verdict", where).get<std::string>());
    if (j.contains("caveats")) rep.caveats = j.at("caveats").get<std::vector<std::string>>();
    if (j.contains("criteria")) {
        for (const auto& cj : j.at("criteria")) {
            CriterionRecord c;
            c.id = detail::require_key(cj, "id", where).get<std::string>();
            c.fired = detail::require_key(cj, "fired", where).get<bool>();
            c.conclusion = parse_verdict(detail::require_key(cj, "conclusion", where).get<std::string>());
            for (const auto& qj : detail::require_key(cj, "conditions", where)) {
                Inequality q;
                q.id = detail::require_key(qj, "id", where).get<std::string>();
                q.lhs = detail::real_from_json(detail::require_key(qj, "lhs", where), "lhs");
                q.relation = detail::parse_relation(detail::require_key(qj, "relation", where).get<std::string>());
                q.rhs = detail::real_from_json(detail::require_key(qj, "rhs", where), "rhs");
                q.holds = detail::require_key(qj, "holds", where).get<bool>();
                c.conditions.push_back(std::move(q));
            }
            rep.criteria.push_back(std::move(c));
        }
    }
    rep.mass_energy = detail::optional_from_json(j, "mass_energy");
    rep.renorm_lp1 = detail::optional_from_json(j, "renorm_lp1");
    rep.sigma_m = detail::optional_from_json(j, "sigma_m");
    rep.lp1_bound = detail::optional_from_json(j, "lp1_bound");
    if (j.contains("diagnostics")) {
        for (const auto& dj : j.at("diagnostics")) {
            rep.diagnostics.emplace_back(detail::require_key(dj, "name", where).get<std::string>(),
                                         detail::real_from_json(detail::require_key(dj, "value", where), "value"));
        }
    }
    return rep;
}

enum class Command { Constants, Classify, Tables, Sweep, Simulate, Verify };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Constants: return "constants";
        case Command::Classify: return "classify";
        case Command::Tables: return "tables";
        case Command::Sweep: return "sweep";
        case Command::Simulate: return "simulate";
        case Command::Verify: return "verify";
    }
    return "constants";
}

inline Command parse_command(const std::string& s) {
    for (Command c : {Command::Constants, Command::Classify, Command::Tables, Command::Sweep, Command::Simulate,
                      Command::Verify}) {
        if (s == command_name(c)) return c;
    }
    throw MalformedInput("unknown command '" + s + "'");
}

/// One CLI invocation as a JSON document: {"command", "p", "N", "data", "output", "format"}.
/// A classify report carries the same keys, so it can be fed back as input.
struct RunSpec {
    Command command = Command::Classify;
    double p = 0.0;
    int N = 0;
    std::optional<DataSpec> data;
    std::string output;
    std::string format = "json";

    bool needs_equation() const { return command != Command::Tables; }
    bool needs_data() const {
        return command == Command::Classify || command == Command::Simulate || command == Command::Verify;
    }
};

inline RunSpec run_spec_from_json(const json& j, Command fallback = Command::Classify) {
    const std::string where = "run spec";
    if (!j.is_object()) throw MalformedInput("run spec: expected a JSON object");
    RunSpec spec;
    spec.command = j.contains("command") ? parse_command(j.at("command").get<std::string>()) : fallback;
    if (spec.needs_equation()) {
        const json& eq = j.contains("equation") ? j.at("equation") : j;
        spec.p = detail::finite_number(eq, "p", where);
        const double n = detail::finite_number(eq, "N", where);
        if (n != std::floor(n)) throw MalformedInput("run spec: 'N' must be an integer");
        spec.N = static_cast<int>(n);
        make_params(spec.p, spec.N);
    }
    if (j.contains("output")) spec.output = j.at("output").get<std::string>();
    if (j.contains("format")) {
        spec.format = j.at("format").get<std::string>();
        if (spec.format != "json" && spec.format != "csv") throw MalformedInput("run spec: format must be json or csv");
    }
    if (spec.needs_data()) {
        spec.data = data_from_json(detail::require_key(j, "data", where), spec.N);
        require_finite_variance(*spec.data, make_params(spec.p, spec.N));
    }
    return spec;
}

/// Full classify output: the equation, the datum and the report.
inline json classify_document(const RunSpec& spec, const CriterionReport& rep) {
    json j;
    j["command"] = "classify";
    j["equation"] = {{"p", spec.p}, {"N", spec.N}, {"s_c", make_params(spec.p, spec.N).s_c}};
    if (spec.data) j["data"] = data_to_json(*spec.data);
    const json body = report_to_json(rep);
    for (const auto& [key, value] : body.items()) j[key] = value;
    return j;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw MalformedInput("'" + path + "' is not valid JSON: " + err.what());
    }
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& err) {
        throw MalformedInput(std::string("invalid JSON: ") + err.what());
    }
}

}  // namespace nlslab

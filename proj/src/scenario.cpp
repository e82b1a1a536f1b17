#include "tyc/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "tyc/errors.hpp"
#include "tyc/io.hpp"

namespace tyc {

using nlohmann::json;

const char* to_string(Command c) {
    switch (c) {
    case Command::simulate: return "simulate";
    case Command::steady_states_cmd: return "steady-states";
    case Command::bifurcate: return "bifurcate";
    case Command::compare_models: return "compare-models";
    case Command::probe_dependence: return "probe-dependence";
    case Command::validate: return "validate";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            fail("unknown key \"" + key + "\" in " + where +
                 " (strict parsing rejects unrecognized keys)");
}

double get_num(const json& obj, const std::string& where, const char* key, double dflt) {
    if (!obj.contains(key))
        return dflt;
    const json& v = obj.at(key);
    if (!v.is_number())
        fail(where + "." + key + ": expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key, int dflt) {
    if (!obj.contains(key))
        return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail(where + "." + key + ": expected an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool dflt) {
    if (!obj.contains(key))
        return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        fail(where + "." + key + ": expected true or false");
    return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& where, const char* key,
                    const std::string& dflt) {
    if (!obj.contains(key))
        return dflt;
    const json& v = obj.at(key);
    if (!v.is_string())
        fail(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

CoefficientSpec parse_coefficient(const json& v, const std::string& where) {
    CoefficientSpec spec;
    if (v.is_number()) {
        spec.constant = v.get<double>();
        return spec;
    }
    if (v.is_object()) {
        check_keys(v, where, {"kind", "value"});
        const std::string kind = get_str(v, where, "kind", "constant");
        if (kind != "constant")
            fail(where + ".kind: \"" + kind + "\" is not supported (use \"constant\")");
        spec.constant = get_num(v, where, "value", 1.0);
        return spec;
    }
    fail(where + ": expected a number or {\"kind\": \"constant\", \"value\": ...}");
}

MuSchedule parse_mu(const json& v, const std::string& where) {
    if (!v.is_object())
        fail(where + ": expected an object");
    check_keys(v, where, {"kind", "mu0", "gamma", "t_off"});
    MuSchedule mu;
    const std::string kind = get_str(v, where, "kind", "constant");
    if (kind == "constant")
        mu.kind = MuKind::constant;
    else if (kind == "exponential-decay")
        mu.kind = MuKind::exponential_decay;
    else if (kind == "step-off")
        mu.kind = MuKind::step_off;
    else
        fail(where + ".kind: \"" + kind +
             "\" is not a schedule (constant | exponential-decay | step-off)");
    mu.mu0 = get_num(v, where, "mu0", 0.0);
    mu.gamma = get_num(v, where, "gamma", 0.0);
    mu.t_off = get_num(v, where, "t_off", 0.0);
    return mu;
}

Parameters parse_params(const json& v) {
    if (!v.is_object())
        fail("params: expected an object");
    check_keys(v, "params",
               {"beta", "K", "d1", "d2", "d3", "d4", "a1", "a2", "a3", "a4", "a0",
                "D0", "D1", "mu", "clip_all_growth"});
    Parameters p;
    p.beta = get_num(v, "params", "beta", p.beta);
    p.K = get_num(v, "params", "K", p.K);
    p.d1 = get_num(v, "params", "d1", p.d1);
    p.d2 = get_num(v, "params", "d2", p.d2);
    p.d3 = get_num(v, "params", "d3", p.d3);
    p.d4 = get_num(v, "params", "d4", p.d4);
    p.a0 = get_num(v, "params", "a0", p.a0);
    p.D0 = get_num(v, "params", "D0", p.D0);
    p.D1 = get_num(v, "params", "D1", p.D1);
    if (v.contains("a1")) p.a1 = parse_coefficient(v.at("a1"), "params.a1");
    if (v.contains("a2")) p.a2 = parse_coefficient(v.at("a2"), "params.a2");
    if (v.contains("a3")) p.a3 = parse_coefficient(v.at("a3"), "params.a3");
    if (v.contains("a4")) p.a4 = parse_coefficient(v.at("a4"), "params.a4");
    if (v.contains("mu")) p.mu = parse_mu(v.at("mu"), "params.mu");
    p.clip_all_growth = get_bool(v, "params", "clip_all_growth", false);
    return p;
}

GridSpec parse_grid(const json& v) {
    if (!v.is_object())
        fail("grid: expected an object");
    check_keys(v, "grid", {"dim", "extents", "cells"});
    GridSpec g;
    g.dim = get_int(v, "grid", "dim", 1);
    if (v.contains("extents")) {
        if (!v.at("extents").is_array())
            fail("grid.extents: expected an array of numbers");
        g.extents.clear();
        for (const auto& e : v.at("extents")) {
            if (!e.is_number())
                fail("grid.extents: expected an array of numbers");
            g.extents.push_back(e.get<double>());
        }
    }
    if (v.contains("cells")) {
        if (!v.at("cells").is_array())
            fail("grid.cells: expected an array of integers");
        g.cells.clear();
        for (const auto& e : v.at("cells")) {
            if (!e.is_number_integer())
                fail("grid.cells: expected an array of integers");
            g.cells.push_back(e.get<int>());
        }
    }
    if (g.dim == 2 && g.extents.size() == 1) {
        g.extents.push_back(g.extents[0]);
    }
    if (g.dim == 2 && g.cells.size() == 1) {
        g.cells.push_back(g.cells[0]);
    }
    return g;
}

std::array<double, 4> parse_vec4(const json& v, const std::string& where,
                                 std::array<double, 4> dflt) {
    if (!v.is_array() || v.size() != 4)
        fail(where + ": expected an array of 4 numbers [f, m, s, r]");
    std::array<double, 4> out = dflt;
    for (size_t k = 0; k < 4; ++k) {
        if (!v[k].is_number())
            fail(where + ": expected an array of 4 numbers [f, m, s, r]");
        out[k] = v[k].get<double>();
    }
    return out;
}

IcSpec parse_ic(const json& v) {
    if (!v.is_object())
        fail("ic: expected an object");
    check_keys(v, "ic", {"kind", "f", "m", "s", "r", "path", "branch", "scale", "fallback"});
    IcSpec ic;
    const std::string kind = get_str(v, "ic", "kind", "constant");
    if (kind == "constant") {
        ic.kind = IcKind::constant;
        ic.values[0] = get_num(v, "ic", "f", ic.values[0]);
        ic.values[1] = get_num(v, "ic", "m", ic.values[1]);
        ic.values[2] = get_num(v, "ic", "s", ic.values[2]);
        ic.values[3] = get_num(v, "ic", "r", ic.values[3]);
    } else if (kind == "random") {
        ic.kind = IcKind::random_uniform;
    } else if (kind == "file") {
        ic.kind = IcKind::file;
        ic.path = get_str(v, "ic", "path", "");
        if (ic.path.empty())
            fail("ic.path: required for kind \"file\"");
    } else if (kind == "near-branch") {
        ic.kind = IcKind::near_branch;
        const std::string branch = get_str(v, "ic", "branch", "auto");
        if (branch == "auto")
            ic.branch = SweepBranchChoice::auto_attracting;
        else if (branch == "plus")
            ic.branch = SweepBranchChoice::plus;
        else if (branch == "minus")
            ic.branch = SweepBranchChoice::minus;
        else
            fail("ic.branch: \"" + branch + "\" is not a branch (auto | plus | minus)");
        ic.scale = get_num(v, "ic", "scale", ic.scale);
        if (!(ic.scale > 0) || ic.scale > 1)
            fail("ic.scale: must lie in (0, 1] so the state stays within [0, K]");
        if (v.contains("fallback"))
            ic.fallback = parse_vec4(v.at("fallback"), "ic.fallback", ic.fallback);
    } else {
        fail("ic.kind: \"" + kind +
             "\" is not an initial-condition kind (constant | random | file | near-branch)");
    }
    return ic;
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Report the position as line/column for quick fixes.
        size_t line = 1, col = 1;
        const size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail("config is not valid JSON (line " + std::to_string(line) + ", column " +
             std::to_string(col) + "): " + e.what());
    }
    if (!root.is_object())
        fail("config root must be a JSON object");

    check_keys(root, "config",
               {"model", "params", "grid", "ic", "stepper", "dt", "t_max",
                "output_interval", "tolerances", "seed", "out_dir", "sweep", "probe"});

    ScenarioConfig cfg;
    const std::string model = get_str(root, "config", "model", "modified");
    if (model == "modified")
        cfg.model = ModelVariant::modified;
    else if (model == "original")
        cfg.model = ModelVariant::original;
    else
        fail("model: \"" + model + "\" is not a model variant (modified | original)");

    if (root.contains("params"))
        cfg.params = parse_params(root.at("params"));
    if (root.contains("grid"))
        cfg.grid = parse_grid(root.at("grid"));
    if (root.contains("ic"))
        cfg.ic = parse_ic(root.at("ic"));

    const std::string stepper = get_str(root, "config", "stepper", "explicit");
    if (stepper == "explicit")
        cfg.stepper = StepperKind::explicit_euler;
    else if (stepper == "imex")
        cfg.stepper = StepperKind::imex;
    else
        fail("stepper: \"" + stepper + "\" is not a stepper (explicit | imex)");

    cfg.dt = get_num(root, "config", "dt", cfg.dt);
    cfg.t_max = get_num(root, "config", "t_max", cfg.t_max);
    cfg.output_interval = get_num(root, "config", "output_interval", cfg.output_interval);

    if (root.contains("tolerances")) {
        const json& tol = root.at("tolerances");
        if (!tol.is_object())
            fail("tolerances: expected an object");
        check_keys(tol, "tolerances",
                   {"convergence_tol", "convergence_window", "cg_rel_tol", "cg_max_iter",
                    "bounds_rel_tol"});
        cfg.convergence_tol = get_num(tol, "tolerances", "convergence_tol", cfg.convergence_tol);
        cfg.convergence_window =
            get_int(tol, "tolerances", "convergence_window", cfg.convergence_window);
        cfg.cg_rel_tol = get_num(tol, "tolerances", "cg_rel_tol", cfg.cg_rel_tol);
        cfg.cg_max_iter = get_int(tol, "tolerances", "cg_max_iter", cfg.cg_max_iter);
        cfg.bounds_rel_tol = get_num(tol, "tolerances", "bounds_rel_tol", cfg.bounds_rel_tol);
    }

    if (root.contains("seed")) {
        const json& v = root.at("seed");
        if (!v.is_number_unsigned() && !v.is_number_integer())
            fail("seed: expected a nonnegative integer");
        if (v.is_number_integer() && v.get<long long>() < 0)
            fail("seed: expected a nonnegative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    cfg.out_dir = get_str(root, "config", "out_dir", cfg.out_dir);

    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        if (!sw.is_object())
            fail("sweep: expected an object");
        check_keys(sw, "sweep", {"beta_min", "beta_max", "count", "parallel"});
        cfg.sweep.beta_min = get_num(sw, "sweep", "beta_min", cfg.sweep.beta_min);
        cfg.sweep.beta_max = get_num(sw, "sweep", "beta_max", cfg.sweep.beta_max);
        cfg.sweep.count = get_int(sw, "sweep", "count", cfg.sweep.count);
        cfg.sweep.parallel = get_bool(sw, "sweep", "parallel", cfg.sweep.parallel);
    }
    if (root.contains("probe")) {
        const json& pr = root.at("probe");
        if (!pr.is_object())
            fail("probe: expected an object");
        check_keys(pr, "probe", {"epsilon"});
        cfg.probe.epsilon = get_num(pr, "probe", "epsilon", cfg.probe.epsilon);
    }

    validate_params_or_throw(cfg.params);
    if (cfg.dt < 0 || !std::isfinite(cfg.dt))
        fail("dt: must be 0 (automatic) or a positive step");
    if (!(cfg.t_max > 0) || !std::isfinite(cfg.t_max))
        fail("t_max: must be positive");
    if (!(cfg.output_interval > 0) || !std::isfinite(cfg.output_interval))
        fail("output_interval: must be positive");
    if (cfg.convergence_window < 2)
        fail("tolerances.convergence_window: must be at least 2 samples");
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

Grid make_grid(const ScenarioConfig& cfg) {
    return build_grid(cfg.grid.dim, cfg.grid.extents, cfg.grid.cells);
}

SimState build_initial_state(const ScenarioConfig& cfg, const Grid& g) {
    SimState st(g);
    const size_t n = static_cast<size_t>(g.cell_count());
    switch (cfg.ic.kind) {
    case IcKind::constant:
        for (int k = 0; k < 4; ++k)
            st.species(k).v.assign(n, cfg.ic.values[static_cast<size_t>(k)]);
        break;
    case IcKind::random_uniform: {
        // Deterministic for a given seed: species filled in f, m, s, r
        // order, cells in storage order.
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> uni(0.0, cfg.params.K);
        for (int k = 0; k < 4; ++k)
            for (size_t i = 0; i < n; ++i)
                st.species(k)[i] = uni(rng);
        break;
    }
    case IcKind::file:
        st = read_state_csv(cfg.ic.path, g);
        break;
    case IcKind::near_branch: {
        SweepIc sic;
        sic.near_branch = true;
        sic.branch = cfg.ic.branch;
        sic.scale = cfg.ic.scale;
        sic.fallback = cfg.ic.fallback;
        const auto branches = steady_states(cfg.params);
        const auto c = resolve_sweep_ic(sic, cfg.params, branches);
        for (int k = 0; k < 4; ++k)
            st.species(k).v.assign(n, c[static_cast<size_t>(k)]);
        break;
    }
    }

    std::vector<std::string> issues;
    for (int k = 0; k < 4; ++k) {
        const Field& u = st.species(k);
        for (size_t i = 0; i < n; ++i) {
            if (!std::isfinite(u[i]) || u[i] < 0.0 || u[i] > cfg.params.K) {
                issues.push_back(std::string("initial ") + kSpeciesNames[k] + " contains " +
                                 fmt_num(u[i]) + " at cell " + std::to_string(i) +
                                 ": initial data must lie in [0, K] pointwise with K = " +
                                 fmt_num(cfg.params.K));
                break; // one message per species is enough to act on
            }
        }
    }
    if (!issues.empty()) {
        std::string msg = "invalid initial data:";
        for (const auto& s : issues)
            msg += "\n  - " + s;
        throw ConfigError(msg, std::move(issues));
    }
    return st;
}

RunSpec make_run_spec(const ScenarioConfig& cfg) {
    RunSpec spec;
    spec.grid = make_grid(cfg);
    spec.params = cfg.params;
    spec.model = cfg.model;
    spec.stepper = cfg.stepper;
    spec.initial = build_initial_state(cfg, spec.grid);
    spec.t_max = cfg.t_max;
    spec.output_interval = cfg.output_interval;
    spec.dt_override = cfg.dt;
    spec.convergence_tol = cfg.convergence_tol;
    spec.convergence_window = cfg.convergence_window;
    spec.bounds_rel_tol = cfg.bounds_rel_tol;
    spec.cg_rel_tol = cfg.cg_rel_tol;
    spec.cg_max_iter = cfg.cg_max_iter;
    return spec;
}

namespace {

json json_eigen(const Eigenpair& ev) {
    json arr = json::array();
    for (const auto& l : ev)
        arr.push_back({{"re", l.real()}, {"im", l.imag()}});
    return arr;
}

json json_steady_state(const SteadyState& st) {
    return {
        {"branch", to_string(st.branch)},
        {"f", st.f_star},
        {"m", st.m_star},
        {"jacobian", {{st.jac.a11, st.jac.a12}, {st.jac.a21, st.jac.a22}}},
        {"trace", st.jac.trace()},
        {"det", st.jac.det()},
        {"eigenvalues", json_eigen(st.eigenvalues)},
        {"classification", to_string(st.classification)},
        {"trace_det_rule", to_string(classify_trace_det(st.jac))},
    };
}

json json_result(const SimulationResult& res) {
    json events = json::array();
    for (const auto& ev : res.bounds_events)
        events.push_back({{"t", ev.t},
                          {"step", ev.step},
                          {"species", kSpeciesNames[ev.species]},
                          {"cell", ev.cell},
                          {"value", ev.value},
                          {"side", ev.below ? "below" : "above"}});
    json j{
        {"converged", res.converged},
        {"steps", res.total_steps},
        {"dt", res.dt},
        {"bounds_event_count", res.bounds_event_count},
        {"bounds_events", std::move(events)},
        {"below_counts",
         {res.below_counts[0], res.below_counts[1], res.below_counts[2], res.below_counts[3]}},
        {"above_counts",
         {res.above_counts[0], res.above_counts[1], res.above_counts[2], res.above_counts[3]}},
    };
    j["converged_at"] = res.converged ? json(res.converged_at) : json(nullptr);
    const auto& last = res.series.back();
    j["final"] = {{"t", last.t},
                  {"l2", {last.l2[0], last.l2[1], last.l2[2], last.l2[3]}},
                  {"min", {last.mn[0], last.mn[1], last.mn[2], last.mn[3]}},
                  {"max", {last.mx[0], last.mx[1], last.mx[2], last.mx[3]}}};
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot open for writing: " + path);
    os << j.dump(2) << '\n';
}

std::string out_path(const ScenarioConfig& cfg, const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void do_simulate(const ScenarioConfig& cfg, std::ostream& log) {
    RunSpec spec = make_run_spec(cfg);
    SimulationResult res = run(spec);

    write_timeseries_csv(out_path(cfg, "timeseries.csv"), res.series);
    write_state_csv(out_path(cfg, "final_state.csv"), res.final_state, spec.grid);
    json j = json_result(res);
    j["model"] = to_string(cfg.model);
    j["stepper"] = to_string(cfg.stepper);
    j["seed"] = cfg.seed;
    write_json(out_path(cfg, "result.json"), j);

    log << "simulate: " << res.total_steps << " steps, dt = " << fmt_num(res.dt) << ", "
        << (res.converged ? "converged at t = " + fmt_num(res.converged_at)
                          : "reached t_max")
        << ", wall " << fmt_num(res.wall_seconds) << " s\n";
    if (res.bounds_event_count > 0)
        log << "  bounds events: " << res.bounds_event_count << "\n";
}

void do_steady_states(const ScenarioConfig& cfg, std::ostream& log) {
    const Parameters& p = cfg.params;
    const auto states = steady_states(p);
    const double beta0 = critical_beta(p.d1, p.d2, p.K);

    json j{{"beta", p.beta}, {"beta0", beta0}};
    j["branch_parameter"] =
        p.beta >= beta0 ? json(branch_parameter(p.beta, p.d1, p.d2, p.K)) : json(nullptr);
    j["minus_branch_stability_threshold"] =
        p.beta > beta0 ? json(stability_threshold_minus_branch(p)) : json(nullptr);
    json arr = json::array();
    for (const auto& st : states)
        arr.push_back(json_steady_state(st));
    j["steady_states"] = std::move(arr);
    write_json(out_path(cfg, "steady_states.json"), j);

    log << "steady-states: beta = " << fmt_num(p.beta) << ", beta0 = " << fmt_num(beta0)
        << ", " << states.size() << " state(s)\n";
    for (const auto& st : states)
        log << "  " << to_string(st.branch) << " (" << fmt_num(st.f_star) << ", "
            << fmt_num(st.m_star) << "): " << to_string(st.classification) << "\n";
}

void do_bifurcate(const ScenarioConfig& cfg, std::ostream& log) {
    RunSpec base = make_run_spec(cfg);
    SweepIc sic;
    if (cfg.ic.kind == IcKind::near_branch) {
        sic.near_branch = true;
        sic.branch = cfg.ic.branch;
        sic.scale = cfg.ic.scale;
        sic.fallback = cfg.ic.fallback;
    } else if (cfg.ic.kind == IcKind::constant) {
        sic.near_branch = false;
        for (size_t k = 0; k < 4; ++k)
            sic.fallback[k] = cfg.ic.values[k] / cfg.params.K;
    } else {
        fail("bifurcate: the sweep supports constant or near-branch initial conditions");
    }

    const auto grid = beta_grid(cfg.sweep.beta_min, cfg.sweep.beta_max, cfg.sweep.count);
    const auto records = sweep(grid, base, sic, cfg.sweep.parallel);

    write_bifurcation_csv(out_path(cfg, "bifurcation.csv"), records);

    const double threshold =
        1e-2 * cfg.params.K * std::sqrt(base.grid.domain_measure());
    json j{{"beta0", critical_beta(cfg.params.d1, cfg.params.d2, cfg.params.K)},
           {"f_norm_threshold", threshold}};
    json recs = json::array();
    for (const auto& rec : records) {
        json r{{"beta", rec.beta},
               {"branch_count", rec.branches.size()},
               {"asymptotic_l2",
                {rec.asymptotic_l2[0], rec.asymptotic_l2[1], rec.asymptotic_l2[2],
                 rec.asymptotic_l2[3]}},
               {"f_mean", rec.f_mean},
               {"m_mean", rec.m_mean},
               {"converged", rec.converged}};
        json branches = json::array();
        for (const auto& st : rec.branches)
            branches.push_back(json_steady_state(st));
        r["branches"] = std::move(branches);
        if (!rec.error.empty())
            r["error"] = rec.error;
        recs.push_back(std::move(r));
    }
    j["records"] = std::move(recs);

    std::string sweep_error;
    try {
        const auto est = detect_transition(records, threshold);
        j["transition"] = {{"beta_star", est.beta_star},
                           {"half_width", est.half_width},
                           {"below_beta", records[static_cast<size_t>(est.below_index)].beta},
                           {"above_beta", records[static_cast<size_t>(est.above_index)].beta}};
        log << "bifurcate: transition at beta* = " << fmt_num(est.beta_star) << " +- "
            << fmt_num(est.half_width) << "\n";
    } catch (const NumericalError& e) {
        j["transition"] = nullptr;
        sweep_error = e.what();
    }
    write_json(out_path(cfg, "bifurcation.json"), j);
    if (!sweep_error.empty())
        throw NumericalError(sweep_error); // artifacts are on disk for inspection
}

void do_compare_models(const ScenarioConfig& cfg, std::ostream& log) {
    RunSpec spec = make_run_spec(cfg);

    RunSpec spec_mod = spec;
    spec_mod.model = ModelVariant::modified;
    SimulationResult res_mod = run(spec_mod);

    RunSpec spec_orig = std::move(spec);
    spec_orig.model = ModelVariant::original;
    SimulationResult res_orig = run(spec_orig);

    write_timeseries_csv(out_path(cfg, "timeseries_modified.csv"), res_mod.series);
    write_timeseries_csv(out_path(cfg, "timeseries_original.csv"), res_orig.series);
    write_state_csv(out_path(cfg, "final_state_modified.csv"), res_mod.final_state,
                    spec_mod.grid);
    write_state_csv(out_path(cfg, "final_state_original.csv"), res_orig.final_state,
                    spec_orig.grid);

    auto negative_s = [](const SimulationResult& res) {
        return res.below_counts[2];
    };
    json j{{"modified", json_result(res_mod)}, {"original", json_result(res_orig)}};
    j["negative_s_events"] = {{"modified", negative_s(res_mod)},
                              {"original", negative_s(res_orig)}};
    const BoundsEvent* first_neg_s = nullptr;
    for (const auto& ev : res_orig.bounds_events)
        if (ev.species == 2 && ev.below) {
            first_neg_s = &ev;
            break;
        }
    j["first_negative_s_original"] =
        first_neg_s ? json{{"t", first_neg_s->t},
                           {"cell", first_neg_s->cell},
                           {"value", first_neg_s->value}}
                    : json(nullptr);
    j["pathology_only_in_original"] =
        res_mod.bounds_event_count == 0 && negative_s(res_orig) > 0;
    write_json(out_path(cfg, "compare.json"), j);

    log << "compare-models: modified events = " << res_mod.bounds_event_count
        << ", original events = " << res_orig.bounds_event_count
        << " (negative s: " << negative_s(res_orig) << ")\n";
}

void do_probe(const ScenarioConfig& cfg, std::ostream& log) {
    RunSpec base = make_run_spec(cfg);
    base.check_convergence = false; // fixed horizon so both runs sample alike

    const double eps = cfg.probe.epsilon;
    ProbeReport full = continuous_dependence_probe(base, eps, cfg.seed);
    ProbeReport half = continuous_dependence_probe(base, eps / 2.0, cfg.seed);

    json j{{"epsilon", full.epsilon},
           {"sup_ratio", full.sup_ratio},
           {"final_ratio", full.final_ratio},
           {"half",
            {{"epsilon", half.epsilon},
             {"sup_ratio", half.sup_ratio},
             {"final_ratio", half.final_ratio}}}};
    write_json(out_path(cfg, "probe.json"), j);

    std::ofstream os(out_path(cfg, "probe.csv"));
    if (!os)
        throw ConfigError("cannot open for writing: " + out_path(cfg, "probe.csv"));
    os << "t,distance,distance_half\n";
    const size_t rows = std::min(full.distance_series.size(), half.distance_series.size());
    for (size_t i = 0; i < rows; ++i)
        os << fmt_num(full.distance_series[i].first) << ','
           << fmt_num(full.distance_series[i].second) << ','
           << fmt_num(half.distance_series[i].second) << '\n';

    log << "probe-dependence: epsilon = " << fmt_num(eps) << ", sup ratio = "
        << fmt_num(full.sup_ratio) << ", final ratio = " << fmt_num(full.final_ratio) << "\n";
}

void do_validate(const ScenarioConfig& cfg, std::ostream& log) {
    // Parameters were validated during parsing; the grid and initial
    // data checks run here so every violated bound is reported at once.
    const Grid g = make_grid(cfg);
    build_initial_state(cfg, g);
    json j{{"valid", true},
           {"model", to_string(cfg.model)},
           {"cells", g.cell_count()},
           {"dim", g.dim}};
    write_json(out_path(cfg, "validation.json"), j);
    log << "validate: configuration is valid (" << g.cell_count() << " cells, dim "
        << g.dim << ")\n";
}

} // namespace

void run_scenario(const ScenarioConfig& cfg, Command cmd, std::ostream& log) {
    std::filesystem::create_directories(cfg.out_dir);
    switch (cmd) {
    case Command::simulate: do_simulate(cfg, log); break;
    case Command::steady_states_cmd: do_steady_states(cfg, log); break;
    case Command::bifurcate: do_bifurcate(cfg, log); break;
    case Command::compare_models: do_compare_models(cfg, log); break;
    case Command::probe_dependence: do_probe(cfg, log); break;
    case Command::validate: do_validate(cfg, log); break;
    }
}

} // namespace tyc

#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "tyc/errors.hpp"
#include "tyc/integrator.hpp"
#include "oracles.hpp"

using namespace tyc;

namespace {

Grid grid1d(double L, int n) {
    std::array<double, 1> ext{L};
    std::array<int, 1> cells{n};
    return build_grid(1, ext, cells);
}

SimState constant_state(const Grid& g, double f, double m, double s, double r) {
    SimState st(g);
    st.f.v.assign(st.f.size(), f);
    st.m.v.assign(st.m.size(), m);
    st.s.v.assign(st.s.size(), s);
    st.r.v.assign(st.r.size(), r);
    return st;
}

Parameters base_params(double beta) {
    Parameters p;
    p.beta = beta;
    return p;
}

} // namespace

TEST_CASE("reaction step ceilings") {
    Parameters p = base_params(16.0); // K = 1, D1 = 10
    const double expl = reaction_dt_limit(p, StepperKind::explicit_euler);
    const double imex = reaction_dt_limit(p, StepperKind::imex);
    CHECK(expl == doctest::Approx(1.0 / 420.0).epsilon(1e-15));
    CHECK(imex == doctest::Approx(0.9 / 72.0).epsilon(1e-15));
    CHECK(expl < imex);
}

TEST_CASE("explicit step leaves the uniform rest state untouched") {
    Grid g = grid1d(1.0, 8);
    Parameters p = base_params(16.0);
    SimState st = constant_state(g, 0.25, 0.25, 0.0, 0.0);
    const SimState before = st;
    StepContext ctx(g, p);
    for (int k = 0; k < 5; ++k)
        step_explicit(st, 0.01, ctx);
    CHECK(st.f.v == before.f.v); // bitwise: all increments are exactly zero
    CHECK(st.m.v == before.m.v);
    CHECK(st.s.v == before.s.v);
    CHECK(st.r.v == before.r.v);
    CHECK(st.step == 5);
    CHECK(st.t == doctest::Approx(0.05));
}

TEST_CASE("zero state with silent introduction schedule stays zero") {
    Grid g = grid1d(1.0, 4);
    Parameters p = base_params(20.0);
    p.mu = {MuKind::constant, 0.0, 0.0, 0.0};
    SimState st(g);
    StepContext ctx(g, p);
    for (int k = 0; k < 10; ++k)
        step_explicit(st, 0.005, ctx);
    for (size_t i = 0; i < st.f.size(); ++i) {
        CHECK(st.f[i] == 0.0);
        CHECK(st.m[i] == 0.0);
        CHECK(st.s[i] == 0.0);
        CHECK(st.r[i] == 0.0);
    }
}

TEST_CASE("steppers coincide on spatially constant data") {
    // Diffusion annihilates constants, so the implicit solve is exact at
    // its warm start and IMEX reproduces the explicit update bitwise.
    Grid g = grid1d(2.0, 6);
    Parameters p = base_params(24.0);
    p.mu = {MuKind::constant, 0.3, 0.0, 0.0};
    SimState se = constant_state(g, 0.3, 0.2, 0.1, 0.15);
    SimState si = se;
    StepContext ce(g, p), ci(g, p);
    step_explicit(se, 0.002, ce);
    step_imex(si, 0.002, ci);
    CHECK(se.f.v == si.f.v);
    CHECK(se.m.v == si.m.v);
    CHECK(se.s.v == si.s.v);
    CHECK(se.r.v == si.r.v);
}

TEST_CASE("implicit-explicit update is first-order consistent in dt") {
    Grid g = grid1d(1.0, 16);
    Parameters p = base_params(20.0);
    SimState st(g);
    for (int i = 0; i < 16; ++i) {
        const double x = g.center_x(i);
        st.f[static_cast<size_t>(i)] = 0.3 + 0.2 * std::cos(std::numbers::pi * x);
        st.m[static_cast<size_t>(i)] = 0.25;
        st.s[static_cast<size_t>(i)] = 0.05;
        st.r[static_cast<size_t>(i)] = 0.1;
    }
    auto delta = [&](double dt) {
        SimState w = st;
        StepContext ctx(g, p);
        step_imex(w, dt, ctx);
        double acc = 0.0;
        for (int k = 0; k < 4; ++k)
            for (size_t i = 0; i < w.f.size(); ++i) {
                const double d = w.species(k)[i] - st.species(k)[i];
                acc += d * d;
            }
        return std::sqrt(acc);
    };
    const double d1 = delta(1e-3);
    const double d2 = delta(5e-4);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("explicit and implicit trajectories approach each other as dt shrinks") {
    Grid g = grid1d(1.0, 12);
    Parameters p = base_params(24.0);
    SimState ic(g);
    for (int i = 0; i < 12; ++i) {
        const double x = g.center_x(i);
        ic.f[static_cast<size_t>(i)] = 0.25 + 0.15 * std::cos(std::numbers::pi * x);
        ic.m[static_cast<size_t>(i)] = 0.25 - 0.1 * std::cos(std::numbers::pi * x);
        ic.s[static_cast<size_t>(i)] = 0.02;
        ic.r[static_cast<size_t>(i)] = 0.03;
    }
    auto gap = [&](double dt) {
        SimState a = ic, b = ic;
        StepContext ca(g, p), cb(g, p);
        const int steps = static_cast<int>(std::lround(0.2 / dt));
        for (int k = 0; k < steps; ++k) {
            step_explicit(a, dt, ca);
            step_imex(b, dt, cb);
        }
        return state_distance(a, b, g);
    };
    const double g1 = gap(2e-4);
    const double g2 = gap(1e-4);
    CHECK(g1 / g2 > 1.5);
    CHECK(g1 / g2 < 2.5);
}

TEST_CASE("spatially uniform run reproduces the reference ODE trajectory") {
    // Uniform data with constant coefficients stay uniform, so the PDE
    // trajectory must match an independently coded 4-variable reference
    // integration of the same kinetics.
    Grid g = grid1d(1.0, 4);
    Parameters p = base_params(24.0);
    p.d1 = 1.0;
    p.d2 = 1.0;
    p.d3 = 0.8;
    p.d4 = 1.2;
    p.mu = {MuKind::exponential_decay, 0.2, 0.7, 0.0};

    RunSpec spec;
    spec.grid = g;
    spec.params = p;
    spec.initial = constant_state(g, 0.3, 0.3, 0.1, 0.05);
    spec.t_max = 2.0;
    spec.output_interval = 0.5;
    spec.dt_override = 1e-4;
    spec.check_convergence = false;
    SimulationResult res = run(spec);

    auto rhs = [&](const oracle::V4& u, double t) {
        oracle::Kinetics k{p.beta, p.K, p.d1, p.d2, p.d3, p.d4,
                           0.2 * std::exp(-0.7 * t), false};
        return oracle::rhs_modified(u, k);
    };
    const oracle::V4 ref = oracle::rk4({0.3, 0.3, 0.1, 0.05}, 0.0, 2.0, 1e-5, rhs);

    double scale = 0.0;
    for (double v : ref)
        scale = std::max(scale, std::abs(v));
    for (int k = 0; k < 4; ++k) {
        const double got = res.final_state.species(k)[0];
        CHECK(std::abs(got - ref[static_cast<size_t>(k)]) <= 2e-3 * scale);
        // Uniformity is preserved exactly.
        for (size_t i = 1; i < res.final_state.species(k).size(); ++i)
            CHECK(res.final_state.species(k)[i] == got);
    }
}

TEST_CASE("introduction multiplier scales the sampled rate per cell") {
    Grid g = grid1d(1.0, 4);
    Parameters half = base_params(16.0);
    half.mu = {MuKind::constant, 0.4, 0.0, 0.0};
    Parameters full = base_params(16.0);
    full.mu = {MuKind::constant, 0.8, 0.0, 0.0};

    SimState a = constant_state(g, 0.2, 0.2, 0.05, 0.1);
    SimState b = a;
    Field mult(g, 0.5);
    StepContext ca(g, half);
    StepContext cb(g, full);
    cb.mu_multiplier = &mult;
    for (int k = 0; k < 20; ++k) {
        step_explicit(a, 0.002, ca);
        step_explicit(b, 0.002, cb);
    }
    for (size_t i = 0; i < a.r.size(); ++i)
        CHECK(a.r[i] == doctest::Approx(b.r[i]).epsilon(1e-14));
}

TEST_CASE("convergence detector verdicts") {
    ConvergenceDetector constant_series(3, 1e-6, 1.0);
    constant_series.push_scalar(0.0, 1.0);
    constant_series.push_scalar(1.0, 1.0);
    CHECK_FALSE(constant_series.converged()); // window not yet full
    constant_series.push_scalar(2.0, 1.0);
    CHECK(constant_series.converged());

    ConvergenceDetector growing(3, 0.5, 1.0);
    for (int k = 0; k < 10; ++k) {
        growing.push_scalar(k, static_cast<double>(k));
        CHECK_FALSE(growing.converged());
    }

    ConvergenceDetector decaying(4, 1e-3, 1.0);
    bool converged_early = false;
    for (int k = 0; k <= 8; ++k) {
        decaying.push_scalar(k, std::exp(-static_cast<double>(k)));
        if (k < 6)
            converged_early = converged_early || decaying.converged();
    }
    CHECK_FALSE(converged_early); // still sliding down the exponential
    for (int k = 9; k <= 40; ++k)
        decaying.push_scalar(k, std::exp(-static_cast<double>(k)));
    CHECK(decaying.converged()); // plateau reached

    CHECK_THROWS_AS(ConvergenceDetector(1, 1e-6, 1.0), ConfigError);
    CHECK_THROWS_AS(ConvergenceDetector(3, 0.0, 1.0), ConfigError);
}

TEST_CASE("state distance") {
    Grid g = grid1d(2.0, 8); // |Omega| = 2
    SimState a = constant_state(g, 0.3, 0.1, 0.0, 0.0);
    SimState b = a;
    for (size_t i = 0; i < b.f.size(); ++i)
        b.f[i] += 0.25;
    CHECK(state_distance(a, b, g) ==
          doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(state_distance(a, a, g) == 0.0);
}

TEST_CASE("run preserves bounds for the four-species model") {
    Grid g = grid1d(6.4, 64);
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        Parameters p = base_params(4.0 + 40.0 * uni(rng));
        p.d1 = 0.1 + 2.0 * uni(rng);
        p.d2 = 0.1 + 2.0 * uni(rng);
        p.d3 = 0.1 + 2.0 * uni(rng);
        p.d4 = 0.1 + 2.0 * uni(rng);
        p.a1.constant = 0.2 + uni(rng);
        p.a2.constant = 0.2 + uni(rng);
        p.a3.constant = 0.2 + uni(rng);
        p.a4.constant = 0.2 + uni(rng);
        p.mu = {MuKind::exponential_decay, uni(rng), 0.5, 0.0};

        RunSpec spec;
        spec.grid = g;
        spec.params = p;
        spec.stepper = trial % 2 == 0 ? StepperKind::explicit_euler : StepperKind::imex;
        spec.initial = SimState(g);
        for (int k = 0; k < 4; ++k)
            for (size_t i = 0; i < spec.initial.species(k).size(); ++i)
                spec.initial.species(k)[i] = uni(rng);
        spec.t_max = 1.5;
        spec.check_convergence = false;
        SimulationResult res = run(spec);
        CHECK(res.bounds_event_count == 0);
        for (const auto& ns : res.series)
            for (int k = 0; k < 4; ++k) {
                CHECK(ns.mn[static_cast<size_t>(k)] >= 0.0);
                CHECK(ns.mx[static_cast<size_t>(k)] <= p.K * (1 + 1e-10));
            }
    }
}

TEST_CASE("oversized steps trip the invariant monitor") {
    Grid g = grid1d(1.0, 4);
    Parameters p = base_params(16.0);
    RunSpec spec;
    spec.grid = g;
    spec.params = p;
    spec.initial = constant_state(g, 0.9, 0.9, 0.9, 0.9);
    spec.t_max = 1.0;
    spec.dt_override = 0.5; // far beyond the derived ceiling
    CHECK_THROWS_AS(run(spec), InvariantViolation);
}

TEST_CASE("comparison model records its negativity instead of aborting") {
    Grid g = grid1d(1.0, 2);
    Parameters p = base_params(16.0);
    p.mu = {MuKind::constant, 0.1, 0.0, 0.0};
    RunSpec spec;
    spec.grid = g;
    spec.params = p;
    spec.model = ModelVariant::original;
    spec.initial = constant_state(g, 0.9, 0.9, 0.0, 0.9); // crowded, s empty
    spec.t_max = 0.3;
    spec.check_convergence = false;
    SimulationResult res = run(spec);
    CHECK(res.bounds_event_count > 0);
    CHECK(res.below_counts[2] > 0); // negative supermale density
    CHECK(res.bounds_events.size() <= 100);
    CHECK_FALSE(res.bounds_events.empty());
    CHECK(res.bounds_events.front().species == 2);
    CHECK(res.bounds_events.front().below);
    CHECK(res.bounds_events.front().value < 0.0);
}

TEST_CASE("run is deterministic") {
    Grid g = grid1d(1.0, 16);
    Parameters p = base_params(20.0);
    p.mu = {MuKind::exponential_decay, 0.3, 1.0, 0.0};
    RunSpec spec;
    spec.grid = g;
    spec.params = p;
    spec.stepper = StepperKind::imex;
    spec.initial = SimState(g);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 4; ++k)
        for (size_t i = 0; i < spec.initial.species(k).size(); ++i)
            spec.initial.species(k)[i] = uni(rng);
    spec.t_max = 1.0;
    SimulationResult r1 = run(spec);
    SimulationResult r2 = run(spec);
    CHECK(r1.final_state.f.v == r2.final_state.f.v);
    CHECK(r1.final_state.m.v == r2.final_state.m.v);
    CHECK(r1.final_state.s.v == r2.final_state.s.v);
    CHECK(r1.final_state.r.v == r2.final_state.r.v);
    CHECK(r1.total_steps == r2.total_steps);
}

TEST_CASE("run validates its inputs") {
    Grid g = grid1d(1.0, 4);
    RunSpec spec;
    spec.grid = g;
    spec.params = base_params(16.0);
    spec.initial = constant_state(g, 1.5, 0.0, 0.0, 0.0); // above K
    CHECK_THROWS_AS(run(spec), ConfigError);

    spec.initial = constant_state(g, 0.5, 0.1, 0.0, 0.0);
    spec.t_max = -1.0;
    CHECK_THROWS_AS(run(spec), ConfigError);

    spec.t_max = 1.0;
    spec.mu_multiplier = Field(g, 2.0); // outside [0, 1]
    CHECK_THROWS_AS(run(spec), ConfigError);
}

TEST_CASE("perturbation probe: zero epsilon and first-order regime") {
    Grid g = grid1d(1.0, 16);
    Parameters p = base_params(8.0); // extinction regime: contracting flow
    p.mu = {MuKind::exponential_decay, 0.2, 1.0, 0.0};
    RunSpec spec;
    spec.grid = g;
    spec.params = p;
    spec.initial = constant_state(g, 0.2, 0.2, 0.05, 0.05);
    spec.t_max = 3.0;
    spec.check_convergence = false;

    ProbeReport zero = continuous_dependence_probe(spec, 0.0, 5);
    for (const auto& [t, d] : zero.distance_series)
        CHECK(d == 0.0);
    CHECK(zero.sup_ratio == 0.0);

    ProbeReport full = continuous_dependence_probe(spec, 1e-3, 5);
    ProbeReport half = continuous_dependence_probe(spec, 5e-4, 5);
    CHECK(full.sup_ratio > 0.0);
    CHECK(full.sup_ratio < 10.0);
    CHECK(std::abs(full.sup_ratio - half.sup_ratio) <= 0.2 * full.sup_ratio);
    // Contracting regime: the final ratio has dropped below the sup.
    CHECK(full.final_ratio <= full.sup_ratio);

    CHECK_THROWS_AS(continuous_dependence_probe(spec, -1e-3, 5), ConfigError);
}

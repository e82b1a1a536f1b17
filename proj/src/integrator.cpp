#include "tyc/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "tyc/errors.hpp"

namespace tyc {

const char* const kSpeciesNames[4] = {"f", "m", "s", "r"};

const char* to_string(ModelVariant m) {
    return m == ModelVariant::modified ? "modified" : "original";
}

const char* to_string(StepperKind s) {
    return s == StepperKind::explicit_euler ? "explicit" : "imex";
}

const Field& SimState::species(int k) const {
    switch (k) {
    case 0: return f;
    case 1: return m;
    case 2: return s;
    default: return r;
    }
}

Field& SimState::species(int k) {
    switch (k) {
    case 0: return f;
    case 1: return m;
    case 2: return s;
    default: return r;
    }
}

double stable_dt(const Grid& g, double a_max, double safety) {
    if (!(a_max > 0))
        throw ConfigError("stable_dt: a_max must be positive");
    double hmin = g.h[0];
    if (g.dim == 2)
        hmin = std::min(hmin, g.h[1]);
    return safety * hmin * hmin / (2.0 * g.dim * a_max);
}

double reaction_dt_limit(const Parameters& p, StepperKind stepper) {
    // Derivation sketch, valid whenever every species lies in [0, K] so
    // the growth factor is >= -3 (local totals <= 4K):
    //   largest birth slope toward the K bound: 2 beta K (m equation)
    //   largest decay rate away from 0:        1.5 beta K + D1 (f), 4 D1 (r)
    // Explicit steps must leave the diffusion update its 10% convex
    // weight at the CFL limit, hence the extra factor of 10; implicit
    // diffusion is monotone, so IMEX only needs the reaction half to
    // respect the bounds.
    if (stepper == StepperKind::explicit_euler)
        return 1.0 / (20.0 * p.beta * p.K + 10.0 * p.D1);
    return 0.9 / (2.0 * p.beta * p.K + 4.0 * p.D1);
}

StepContext::StepContext(const Grid& g, const Parameters& p, ModelVariant mv)
    : grid(g), params(p), model(mv) {
    all_constant_ = p.a1.is_constant() && p.a2.is_constant() &&
                    p.a3.is_constant() && p.a4.is_constant();
}

double StepContext::max_coeff_bound() const {
    return std::max({params.a1.max_bound(params.a0), params.a2.max_bound(params.a0),
                     params.a3.max_bound(params.a0), params.a4.max_bound(params.a0)});
}

void StepContext::refresh_coefficients(double t) {
    if (all_constant_ && constants_ready_)
        return;
    if (!all_constant_ && t == cache_t_)
        return;

    const CoefficientSpec* specs[4] = {&params.a1, &params.a2, &params.a3, &params.a4};
    const double lo = params.a0, hi = 1.0 / params.a0;
    for (int k = 0; k < 4; ++k) {
        Field& a = coeff_[k];
        a.v.assign(static_cast<size_t>(grid.cell_count()), specs[k]->constant);
        if (!specs[k]->is_constant()) {
            for (int j = 0; j < grid.ny(); ++j) {
                for (int i = 0; i < grid.nx(); ++i) {
                    const double v = specs[k]->fn(grid.center_x(i), grid.center_y(j), t);
                    if (!std::isfinite(v) || v < lo || v > hi) {
                        std::ostringstream os;
                        os << "a" << (k + 1) << "(" << grid.center_x(i);
                        if (grid.dim == 2)
                            os << ", " << grid.center_y(j);
                        os << "; t = " << t << ") = " << v
                           << ": diffusivity samples must lie in [a0, 1/a0] = [" << lo
                           << ", " << hi << "]";
                        throw ConfigError(os.str());
                    }
                    a[static_cast<size_t>(grid.index(i, j))] = v;
                }
            }
        }
    }
    constants_ready_ = true;
    cache_t_ = t;
}

namespace {

Vec4 eval_reaction(const StatePoint& p, const Parameters& params, ModelVariant model,
                   double mu_value) {
    if (model == ModelVariant::modified)
        return reaction_modified(p, params, mu_value);
    // The comparison model has one death rate; paired runs reuse d1.
    return reaction_original(p, params.beta, params.K, params.d1, mu_value);
}

} // namespace

void step_explicit(SimState& st, double dt, StepContext& ctx) {
    const Grid& g = ctx.grid;
    ctx.refresh_coefficients(st.t);
    const double mu_t = mu_sample(ctx.params.mu, st.t);

    static thread_local std::array<Field, 4> lap;
    for (int k = 0; k < 4; ++k)
        diffusion_apply(st.species(k), ctx.coeff(k), g, lap[k]);

    const int n = g.cell_count();
    for (int i = 0; i < n; ++i) {
        const StatePoint p{st.f[i], st.m[i], st.s[i], st.r[i]};
        const double mu_val =
            ctx.mu_multiplier ? mu_t * (*ctx.mu_multiplier)[i] : mu_t;
        const Vec4 F = eval_reaction(p, ctx.params, ctx.model, mu_val);
        st.f[i] += dt * (lap[0][i] + F[0]);
        st.m[i] += dt * (lap[1][i] + F[1]);
        st.s[i] += dt * (lap[2][i] + F[2]);
        st.r[i] += dt * (lap[3][i] + F[3]);
    }
    st.t += dt;
    ++st.step;
}

void step_imex(SimState& st, double dt, StepContext& ctx) {
    const Grid& g = ctx.grid;
    ctx.refresh_coefficients(st.t);
    const double mu_t = mu_sample(ctx.params.mu, st.t);

    static thread_local std::array<Field, 4> rhs;
    const int n = g.cell_count();
    for (int k = 0; k < 4; ++k)
        rhs[k].v.resize(static_cast<size_t>(n));

    for (int i = 0; i < n; ++i) {
        const StatePoint p{st.f[i], st.m[i], st.s[i], st.r[i]};
        const double mu_val =
            ctx.mu_multiplier ? mu_t * (*ctx.mu_multiplier)[i] : mu_t;
        const Vec4 F = eval_reaction(p, ctx.params, ctx.model, mu_val);
        rhs[0][i] = st.f[i] + dt * F[0];
        rhs[1][i] = st.m[i] + dt * F[1];
        rhs[2][i] = st.s[i] + dt * F[2];
        rhs[3][i] = st.r[i] + dt * F[3];
    }
    for (int k = 0; k < 4; ++k)
        implicit_diffusion_solve(rhs[k], ctx.coeff(k), g, dt, st.species(k),
                                 ctx.cg_rel_tol, ctx.cg_max_iter);
    st.t += dt;
    ++st.step;
}

ConvergenceDetector::ConvergenceDetector(int window, double tol, double cell_volume)
    : window_(window), tol_(tol), vol_(cell_volume) {
    if (window_ < 2)
        throw ConfigError("ConvergenceDetector: window must be at least 2 samples");
    if (!(tol_ > 0))
        throw ConfigError("ConvergenceDetector: tolerance must be positive");
}

void ConvergenceDetector::push(double t, const SimState& st) {
    std::vector<double> flat;
    flat.reserve(st.f.size() * 4);
    for (int k = 0; k < 4; ++k)
        flat.insert(flat.end(), st.species(k).v.begin(), st.species(k).v.end());
    push_flat(t, std::move(flat));
}

void ConvergenceDetector::push_scalar(double t, double value) {
    push_flat(t, {value});
}

void ConvergenceDetector::push_flat(double t, std::vector<double> flat) {
    buf_.emplace_back(t, std::move(flat));
    while (static_cast<int>(buf_.size()) > window_)
        buf_.pop_front();
}

bool ConvergenceDetector::converged() const {
    if (static_cast<int>(buf_.size()) < window_)
        return false;
    const auto& [t_end, z_end] = buf_.back();
    auto dist_to_end = [&](const std::vector<double>& z) {
        double acc = 0.0;
        for (size_t i = 0; i < z.size(); ++i) {
            const double d = z[i] - z_end[i];
            acc += d * d;
        }
        return std::sqrt(acc * vol_);
    };
    for (size_t k = 0; k + 1 < buf_.size(); ++k)
        if (dist_to_end(buf_[k].second) >= tol_)
            return false;
    const auto& [t_prev, z_prev] = buf_[buf_.size() - 2];
    const double rate = dist_to_end(z_prev) / (t_end - t_prev);
    return rate < tol_;
}

double state_distance(const SimState& a, const SimState& b, const Grid& g) {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Field& u = a.species(k);
        const Field& v = b.species(k);
        for (size_t i = 0; i < u.size(); ++i) {
            const double d = u[i] - v[i];
            acc += d * d;
        }
    }
    return std::sqrt(acc * g.cell_volume());
}

namespace {

constexpr int kMaxRecordedEvents = 100;

struct RunSetup {
    double dt;
    double conv_tol;
};

RunSetup prepare(const RunSpec& spec) {
    validate_params_or_throw(spec.params);
    if (!(spec.t_max > 0))
        throw ConfigError("t_max must be positive");
    if (!(spec.output_interval > 0))
        throw ConfigError("output_interval must be positive");
    const int n = spec.grid.cell_count();
    for (int k = 0; k < 4; ++k)
        if (static_cast<int>(spec.initial.species(k).size()) != n)
            throw ConfigError(std::string("initial field ") + kSpeciesNames[k] +
                              " does not match the grid cell count");
    if (!spec.mu_multiplier.empty()) {
        if (static_cast<int>(spec.mu_multiplier.size()) != n)
            throw ConfigError("mu multiplier field does not match the grid cell count");
        for (double v : spec.mu_multiplier.v)
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw ConfigError("mu multiplier values must lie in [0, 1]");
    }
    for (int k = 0; k < 4; ++k) {
        const Field& u = spec.initial.species(k);
        for (size_t i = 0; i < u.size(); ++i)
            if (!std::isfinite(u[i]) || u[i] < 0.0 || u[i] > spec.params.K)
                throw ConfigError(std::string("initial ") + kSpeciesNames[k] +
                                  " contains " + std::to_string(u[i]) + " at cell " +
                                  std::to_string(i) +
                                  ": initial data must lie in [0, K] pointwise");
    }

    RunSetup s{};
    if (spec.dt_override > 0) {
        s.dt = spec.dt_override;
    } else {
        const double react = reaction_dt_limit(spec.params, spec.stepper);
        if (spec.stepper == StepperKind::explicit_euler) {
            StepContext probe_ctx(spec.grid, spec.params, spec.model);
            s.dt = std::min(stable_dt(spec.grid, probe_ctx.max_coeff_bound()), react);
        } else {
            s.dt = react;
        }
    }
    s.dt = std::min({s.dt, spec.output_interval, spec.t_max});
    s.conv_tol = spec.convergence_tol > 0
                     ? spec.convergence_tol
                     : 1e-6 * spec.params.K * std::sqrt(spec.grid.domain_measure());
    return s;
}

NormSample take_sample(const SimState& st, const Grid& g) {
    NormSample ns;
    ns.t = st.t;
    for (int k = 0; k < 4; ++k) {
        ns.l2[k] = l2_norm(st.species(k), g);
        auto [lo, hi] = field_bounds(st.species(k));
        ns.mn[k] = lo;
        ns.mx[k] = hi;
    }
    return ns;
}

void monitor_bounds(const SimState& st, const RunSpec& spec, SimulationResult& res) {
    const double lo = -spec.bounds_rel_tol;
    const double hi = spec.params.K * (1.0 + spec.bounds_rel_tol);
    for (int k = 0; k < 4; ++k) {
        const Field& u = st.species(k);
        for (size_t i = 0; i < u.size(); ++i) {
            const double v = u[i];
            if (!std::isfinite(v))
                throw NumericalError(std::string("non-finite value in species ") +
                                     kSpeciesNames[k] + " at cell " + std::to_string(i) +
                                     ", t = " + std::to_string(st.t) +
                                     ": the integration became unstable");
            if (v < lo || v > hi) {
                if (spec.model == ModelVariant::modified) {
                    std::ostringstream os;
                    os << "bounds violation under the four-species model: " << kSpeciesNames[k]
                       << "[" << i << "] = " << v << " at t = " << st.t
                       << " (allowed [" << lo << ", " << hi << "])";
                    throw InvariantViolation(os.str());
                }
                ++res.bounds_event_count;
                if (v < lo)
                    ++res.below_counts[static_cast<size_t>(k)];
                else
                    ++res.above_counts[static_cast<size_t>(k)];
                if (static_cast<int>(res.bounds_events.size()) < kMaxRecordedEvents)
                    res.bounds_events.push_back(
                        {st.t, st.step, k, static_cast<int>(i), v, v < lo});
            }
        }
    }
}

} // namespace

SimulationResult run(const RunSpec& spec) {
    const RunSetup setup = prepare(spec);
    const auto t_start = std::chrono::steady_clock::now();

    SimulationResult res;
    res.dt = setup.dt;

    SimState st = spec.initial;
    st.t = 0.0;
    st.step = 0;

    StepContext ctx(spec.grid, spec.params, spec.model);
    ctx.mu_multiplier = spec.mu_multiplier.empty() ? nullptr : &spec.mu_multiplier;
    ctx.cg_rel_tol = spec.cg_rel_tol;
    ctx.cg_max_iter = spec.cg_max_iter;

    ConvergenceDetector detector(spec.convergence_window, setup.conv_tol,
                                 spec.grid.cell_volume());

    res.series.push_back(take_sample(st, spec.grid));
    detector.push(st.t, st);

    const double dt = setup.dt;
    const long max_steps = static_cast<long>(std::ceil(spec.t_max / dt - 1e-9));
    long next_sample_idx = 1;

    for (long k = 1; k <= max_steps; ++k) {
        if (spec.stepper == StepperKind::explicit_euler)
            step_explicit(st, dt, ctx);
        else
            step_imex(st, dt, ctx);
        st.t = dt * static_cast<double>(k); // avoid accumulated drift

        monitor_bounds(st, spec, res);

        const double sample_t = spec.output_interval * static_cast<double>(next_sample_idx);
        if (st.t >= sample_t - 0.5 * dt || k == max_steps) {
            res.series.push_back(take_sample(st, spec.grid));
            detector.push(st.t, st);
            ++next_sample_idx;
            if (spec.check_convergence && detector.converged()) {
                res.converged = true;
                res.converged_at = st.t;
                break;
            }
        }
    }

    res.final_state = std::move(st);
    res.total_steps = res.final_state.step;
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

ProbeReport continuous_dependence_probe(const RunSpec& base, double epsilon,
                                        std::uint64_t seed) {
    if (epsilon < 0 || !std::isfinite(epsilon))
        throw ConfigError("probe epsilon must be finite and nonnegative");
    const RunSetup setup = prepare(base);
    const Grid& g = base.grid;

    ProbeReport report;
    report.epsilon = epsilon;

    const double dt = setup.dt;
    const long max_steps = static_cast<long>(std::ceil(base.t_max / dt - 1e-9));

    if (epsilon == 0.0) {
        // Identical configs integrate to identical trajectories; the
        // distance is exactly zero without running (0/0 guard).
        double t = 0.0;
        report.distance_series.emplace_back(0.0, 0.0);
        for (long k = 1; k <= max_steps; ++k) {
            t = dt * static_cast<double>(k);
            const double sample_t =
                base.output_interval * static_cast<double>(report.distance_series.size());
            if (t >= sample_t - 0.5 * dt || k == max_steps)
                report.distance_series.emplace_back(t, 0.0);
        }
        return report;
    }

    // Deterministic perturbation: uniform noise over all four fields,
    // normalized to L2 size epsilon in the product norm.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int n = g.cell_count();
    std::vector<double> noise(static_cast<size_t>(4 * n));
    double norm2 = 0.0;
    for (double& v : noise) {
        v = uni(rng);
        norm2 += v * v;
    }
    const double norm = std::sqrt(norm2 * g.cell_volume());
    if (norm == 0.0)
        throw NumericalError("probe: degenerate perturbation");
    const double scale = epsilon / norm;

    SimState a = base.initial;
    SimState b = base.initial;
    for (int k = 0; k < 4; ++k) {
        Field& u = b.species(k);
        for (int i = 0; i < n; ++i) {
            u[i] += scale * noise[static_cast<size_t>(k * n + i)];
            if (u[i] < 0.0 || u[i] > base.params.K)
                throw ConfigError("probe: the perturbed initial state leaves [0, K]; "
                                  "use an interior base state or a smaller epsilon");
        }
    }

    StepContext ctx_a(g, base.params, base.model);
    StepContext ctx_b(g, base.params, base.model);
    ctx_a.mu_multiplier = ctx_b.mu_multiplier =
        base.mu_multiplier.empty() ? nullptr : &base.mu_multiplier;
    ctx_a.cg_rel_tol = ctx_b.cg_rel_tol = base.cg_rel_tol;
    ctx_a.cg_max_iter = ctx_b.cg_max_iter = base.cg_max_iter;

    a.t = b.t = 0.0;
    a.step = b.step = 0;
    report.distance_series.emplace_back(0.0, state_distance(a, b, g));

    for (long k = 1; k <= max_steps; ++k) {
        if (base.stepper == StepperKind::explicit_euler) {
            step_explicit(a, dt, ctx_a);
            step_explicit(b, dt, ctx_b);
        } else {
            step_imex(a, dt, ctx_a);
            step_imex(b, dt, ctx_b);
        }
        a.t = b.t = dt * static_cast<double>(k);
        const double sample_t =
            base.output_interval * static_cast<double>(report.distance_series.size());
        if (a.t >= sample_t - 0.5 * dt || k == max_steps) {
            const double d = state_distance(a, b, g);
            if (!std::isfinite(d))
                throw NumericalError("probe: non-finite distance at t = " + std::to_string(a.t));
            report.distance_series.emplace_back(a.t, d);
        }
    }

    for (const auto& [t, d] : report.distance_series)
        report.sup_ratio = std::max(report.sup_ratio, d / epsilon);
    report.final_ratio = report.distance_series.back().second / epsilon;
    return report;
}

} // namespace tyc

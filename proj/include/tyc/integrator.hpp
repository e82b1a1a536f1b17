#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "tyc/diffusion.hpp"
#include "tyc/grid.hpp"
#include "tyc/model.hpp"
#include "tyc/params.hpp"

namespace tyc {

enum class ModelVariant { modified, original };
enum class StepperKind { explicit_euler, imex };

const char* to_string(ModelVariant m);
const char* to_string(StepperKind s);

// Full simulation state: time, step counter, one field per species.
struct SimState {
    double t = 0.0;
    long step = 0;
    Field f, m, s, r;

    SimState() = default;
    explicit SimState(const Grid& g)
        : f(g, 0.0), m(g, 0.0), s(g, 0.0), r(g, 0.0) {}
    const Field& species(int k) const;
    Field& species(int k);
};

extern const char* const kSpeciesNames[4]; // "f", "m", "s", "r"

// Largest forward-Euler step the diffusion term tolerates:
// safety * h_min^2 / (2 * dim * a_max).
double stable_dt(const Grid& g, double a_max, double safety = 0.9);

// Reaction-driven step ceiling that keeps every species inside [0, K]
// for valid states (each species in [0, K], so the growth factor stays
// >= -3). The explicit bound leaves room for the diffusion update to
// consume 90% of a cell's distance to the bound; the implicit-diffusion
// bound only has to keep the reaction half monotone.
double reaction_dt_limit(const Parameters& p, StepperKind stepper);

// Shared per-step context: grid, parameters, model choice, optional
// per-cell multiplier on mu, solver knobs, and a cache of the
// diffusivity fields sampled at the current time.
struct StepContext {
    const Grid& grid;
    const Parameters& params;
    ModelVariant model = ModelVariant::modified;
    const Field* mu_multiplier = nullptr; // values in [0, 1]; null = 1
    double cg_rel_tol = 1e-10;
    int cg_max_iter = 20000;

    StepContext(const Grid& g, const Parameters& p,
                ModelVariant mv = ModelVariant::modified);

    // Sample a1..a4 at time t into the cache; validates every sample
    // against [a0, 1/a0]. Constant specs are materialized once.
    void refresh_coefficients(double t);
    const Field& coeff(int k) const { return coeff_[k]; }
    double max_coeff_bound() const;

private:
    std::array<Field, 4> coeff_;
    bool constants_ready_ = false;
    double cache_t_ = std::numeric_limits<double>::quiet_NaN();
    bool all_constant_ = false;
};

// One forward-Euler step: u += dt * (A u + F(u)), coefficients and mu
// sampled at the pre-step time. Advances t and the step counter.
void step_explicit(SimState& st, double dt, StepContext& ctx);

// One IMEX step: explicit reaction, implicit diffusion
// (I - dt A) u_new = u + dt F(u), removing the dt ~ h^2 restriction.
void step_imex(SimState& st, double dt, StepContext& ctx);

// One row of the norm time series written by run().
struct NormSample {
    double t = 0;
    std::array<double, 4> l2{};  // per-species L2 norms
    std::array<double, 4> mn{};  // per-species minima
    std::array<double, 4> mx{};  // per-species maxima
};

// A monitored excursion outside [-tol, K(1+tol)].
struct BoundsEvent {
    double t = 0;
    long step = 0;
    int species = 0; // 0..3 = f, m, s, r
    int cell = 0;
    double value = 0;
    bool below = true; // below 0 (true) or above K (false)
};

// Declares the run converged when, over a window of recent snapshots,
// (a) every snapshot lies within tol (L2 over all four fields) of the
// newest one and (b) the last step-to-step change rate ||dZ||/dt is
// below tol. Snapshots are pushed at output-sample times.
class ConvergenceDetector {
public:
    ConvergenceDetector(int window, double tol, double cell_volume);

    void push(double t, const SimState& st);
    void push_scalar(double t, double value); // 1-cell convenience for tests
    bool converged() const;
    int window() const { return window_; }

private:
    void push_flat(double t, std::vector<double> flat);
    int window_;
    double tol_;
    double vol_;
    std::deque<std::pair<double, std::vector<double>>> buf_;
};

struct RunSpec {
    Grid grid{};
    Parameters params{};
    ModelVariant model = ModelVariant::modified;
    StepperKind stepper = StepperKind::explicit_euler;
    SimState initial{};
    double t_max = 10.0;
    double output_interval = 0.1;
    double dt_override = 0.0;      // 0 = choose automatically
    double convergence_tol = 0.0;  // 0 = 1e-6 * K * sqrt(|Omega|)
    int convergence_window = 50;
    double bounds_rel_tol = 1e-10;
    double cg_rel_tol = 1e-10;
    int cg_max_iter = 20000;
    Field mu_multiplier{}; // empty = 1 everywhere
    bool check_convergence = true;
};

struct SimulationResult {
    SimState final_state{};
    std::vector<NormSample> series;
    std::vector<BoundsEvent> bounds_events; // first few, capped
    long long bounds_event_count = 0;
    std::array<long long, 4> below_counts{}; // per species, below 0
    std::array<long long, 4> above_counts{}; // per species, above K
    bool converged = false;
    double converged_at = std::numeric_limits<double>::quiet_NaN();
    long total_steps = 0;
    double dt = 0;
    double wall_seconds = 0; // console-only; never serialized
};

// Integrate to t_max or convergence. dt is the automatic stable step
// (diffusion and reaction limits combined for the explicit stepper,
// reaction limit alone for IMEX) unless dt_override is set. Bounds are
// monitored every step: under the modified model any violation is a
// hard InvariantViolation; under the original model violations are
// recorded in the result. Non-finite values raise NumericalError under
// both models.
SimulationResult run(const RunSpec& spec);

// Continuous-dependence probe: integrate the base run and a copy whose
// initial state is displaced by a deterministic pseudo-random
// perturbation of L2 size epsilon (over the four-field product norm),
// stepping in lockstep; reports the distance ratio over time.
// epsilon = 0 short-circuits to identical trajectories, all ratios 0.
struct ProbeReport {
    double epsilon = 0;
    double sup_ratio = 0;
    double final_ratio = 0;
    std::vector<std::pair<double, double>> distance_series; // (t, ||Z*-Z**||)
};
ProbeReport continuous_dependence_probe(const RunSpec& base, double epsilon,
                                        std::uint64_t seed);

// L2 distance between two states over the four-field product space.
double state_distance(const SimState& a, const SimState& b, const Grid& g);

} // namespace tyc

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tyc {

// Time schedule for the sex-reversal introduction rate mu(t).
// Kinds: constant mu0; exponential decay mu0*exp(-gamma*t); step-off
// (mu0 until t_off, zero after).
enum class MuKind { constant, exponential_decay, step_off };

struct MuSchedule {
    MuKind kind = MuKind::constant;
    double mu0 = 0.0;
    double gamma = 0.0; // decay rate, exponential_decay only
    double t_off = 0.0; // cutoff time, step_off only
};

// Sample mu at time t. Non-increasing in t for every kind, and
// 0 <= mu(t) <= mu0 for all t >= 0.
double mu_sample(const MuSchedule& mu, double t);

// Diffusion coefficient specification: a constant, or a function of
// space and time. fn(x, y, t) is sampled at cell centers (y ignored in
// 1D); when fn is empty the constant value applies everywhere.
struct CoefficientSpec {
    double constant = 1.0;
    std::function<double(double x, double y, double t)> fn;

    bool is_constant() const { return !fn; }
    // Largest value the coefficient can take, used for time-step bounds.
    // Function coefficients are only known to respect the validated
    // ceiling 1/a0, so that ceiling is the bound.
    double max_bound(double a0) const { return fn ? 1.0 / a0 : constant; }
};

// Model parameters for the four-species system
//   f: wild-type females, m: wild-type males,
//   s: supermales, r: sex-reversed supermale females.
// beta is the birth coefficient, K the carrying capacity, d1..d4 the
// per-species death rates, a1..a4 the per-species diffusivities.
// a0, D0, D1 are the validation bounds: a0 <= a_i <= 1/a0,
// D0 <= d_i and d_i, mu <= D1.
struct Parameters {
    double beta = 16.0;
    double K = 1.0;
    double d1 = 1.0, d2 = 1.0, d3 = 1.0, d4 = 1.0;
    CoefficientSpec a1{}, a2{}, a3{}, a4{};
    MuSchedule mu{};
    double a0 = 0.1;
    double D0 = 0.01;
    double D1 = 10.0;
    // When set, the female/introduced-female growth factors are clipped at
    // zero like the male/supermale ones (sensitivity switch; default off).
    bool clip_all_growth = false;
};

// Check every parameter bound. Returns one message per violation, each
// naming the offending field and the bound it breaks; empty means valid.
std::vector<std::string> validate_params(const Parameters& p);

// Same checks, throwing ConfigError listing all violations.
const Parameters& validate_params_or_throw(const Parameters& p);

} // namespace tyc

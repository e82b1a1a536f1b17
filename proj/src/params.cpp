#include "tyc/params.hpp"

#include <cmath>
#include <sstream>

#include "tyc/errors.hpp"

namespace tyc {

double mu_sample(const MuSchedule& mu, double t) {
    switch (mu.kind) {
    case MuKind::constant:
        return mu.mu0;
    case MuKind::exponential_decay:
        return mu.mu0 * std::exp(-mu.gamma * t);
    case MuKind::step_off:
        return t < mu.t_off ? mu.mu0 : 0.0;
    }
    return 0.0;
}

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

void check_finite(std::vector<std::string>& out, const char* name, double v) {
    if (!std::isfinite(v))
        out.push_back(std::string(name) + " = " + num(v) + ": must be finite");
}

void check_death_rate(std::vector<std::string>& out, const char* name, double v,
                      double D0, double D1) {
    if (!std::isfinite(v) || v < D0 || v > D1)
        out.push_back(std::string(name) + " = " + num(v) +
                      ": death rates must satisfy D0 <= d_i <= D1 with D0 = " +
                      num(D0) + ", D1 = " + num(D1));
}

void check_coefficient(std::vector<std::string>& out, const char* name,
                       const CoefficientSpec& a, double a0) {
    if (!a.is_constant())
        return; // function coefficients are checked sample-by-sample at use
    if (!std::isfinite(a.constant) || a.constant < a0 || a.constant > 1.0 / a0)
        out.push_back(std::string(name) + " = " + num(a.constant) +
                      ": diffusivities must satisfy a0 <= a_i <= 1/a0 with a0 = " +
                      num(a0));
}

} // namespace

std::vector<std::string> validate_params(const Parameters& p) {
    std::vector<std::string> out;

    if (!std::isfinite(p.beta) || p.beta <= 0)
        out.push_back("beta = " + num(p.beta) + ": birth coefficient must be positive");
    if (!std::isfinite(p.K) || p.K <= 0)
        out.push_back("K = " + num(p.K) + ": carrying capacity must be positive");

    // The remaining checks compare fields against [a0, 1/a0] and [D0, D1],
    // so they only make sense when the bound definitions themselves hold.
    bool bounds_ok = true;
    if (!std::isfinite(p.a0) || p.a0 <= 0 || p.a0 > 1) {
        out.push_back("a0 = " + num(p.a0) +
                      ": coefficient bound must satisfy 0 < a0 <= 1 so [a0, 1/a0] is nonempty");
        bounds_ok = false;
    }
    if (!std::isfinite(p.D0) || p.D0 <= 0) {
        out.push_back("D0 = " + num(p.D0) + ": lower rate bound must be positive");
        bounds_ok = false;
    }
    if (!std::isfinite(p.D1) || p.D1 < p.D0) {
        out.push_back("D1 = " + num(p.D1) + ": upper rate bound must satisfy D1 >= D0 = " + num(p.D0));
        bounds_ok = false;
    }

    if (bounds_ok) {
        check_death_rate(out, "d1", p.d1, p.D0, p.D1);
        check_death_rate(out, "d2", p.d2, p.D0, p.D1);
        check_death_rate(out, "d3", p.d3, p.D0, p.D1);
        check_death_rate(out, "d4", p.d4, p.D0, p.D1);
        check_coefficient(out, "a1", p.a1, p.a0);
        check_coefficient(out, "a2", p.a2, p.a0);
        check_coefficient(out, "a3", p.a3, p.a0);
        check_coefficient(out, "a4", p.a4, p.a0);

        check_finite(out, "mu.mu0", p.mu.mu0);
        if (p.mu.mu0 < 0 || p.mu.mu0 > p.D1)
            out.push_back("mu.mu0 = " + num(p.mu.mu0) +
                          ": introduction rate must satisfy 0 <= mu <= D1 with D1 = " + num(p.D1));
        if (p.mu.kind == MuKind::exponential_decay && (!std::isfinite(p.mu.gamma) || p.mu.gamma < 0))
            out.push_back("mu.gamma = " + num(p.mu.gamma) + ": decay rate must be nonnegative");
        if (p.mu.kind == MuKind::step_off && (!std::isfinite(p.mu.t_off) || p.mu.t_off < 0))
            out.push_back("mu.t_off = " + num(p.mu.t_off) + ": cutoff time must be nonnegative");
    }
    return out;
}

const Parameters& validate_params_or_throw(const Parameters& p) {
    auto issues = validate_params(p);
    if (!issues.empty()) {
        std::string msg = "invalid parameters:";
        for (const auto& s : issues)
            msg += "\n  - " + s;
        throw ConfigError(msg, std::move(issues));
    }
    return p;
}

} // namespace tyc

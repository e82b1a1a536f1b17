#include "tyc/model.hpp"

#include <cmath>

#include "tyc/errors.hpp"

namespace tyc {

bool StatePoint::finite() const {
    return std::isfinite(f) && std::isfinite(m) && std::isfinite(s) && std::isfinite(r);
}

double growth_factor(const StatePoint& p, double K) {
    if (!p.finite() || !std::isfinite(K))
        throw NumericalError("growth_factor: non-finite input");
    return 1.0 - p.total() / K;
}

double clipped_growth_factor(const StatePoint& p, double K) {
    double g = growth_factor(p, K);
    return g > 0.0 ? g : 0.0;
}

Vec4 reaction_modified(const StatePoint& p, const Parameters& params, double mu_value) {
    const double g = growth_factor(p, params.K);
    const double gp = g > 0.0 ? g : 0.0;
    // The f and r births keep the signed factor so overcrowding actively
    // suppresses them; m and s births shut off at zero instead.
    const double gf = params.clip_all_growth ? gp : g;

    return {
        0.5 * params.beta * p.f * p.m * gf - params.d1 * p.f,
        params.beta * (0.5 * p.f * p.m + 0.5 * p.r * p.m + p.f * p.s) * gp - params.d2 * p.m,
        params.beta * (0.5 * p.r * p.m + p.r * p.s) * gp - params.d3 * p.s,
        mu_value * p.r * gf - params.d4 * p.r,
    };
}

Vec4 reaction_original(const StatePoint& p, double beta, double K, double d, double mu_value) {
    const double g = growth_factor(p, K);
    // Signed factor everywhere and a constant source for r: at s = 0 with
    // r, m > 0 and a crowded cell (g < 0) the s equation goes negative,
    // which is the bounds defect the paired runs demonstrate.
    return {
        0.5 * beta * p.f * p.m * g - d * p.f,
        beta * (0.5 * p.f * p.m + 0.5 * p.r * p.m + p.f * p.s) * g - d * p.m,
        beta * (0.5 * p.r * p.m + p.r * p.s) * g - d * p.s,
        mu_value - d * p.r,
    };
}

std::array<double, 2> reaction_reduced(double f, double m, const Parameters& params) {
    if (!std::isfinite(f) || !std::isfinite(m))
        throw NumericalError("reaction_reduced: non-finite input");
    const double g1 = 1.0 - (f + m) / params.K;
    const double birth = 0.5 * params.beta * f * m * g1;
    return {birth - params.d1 * f, birth - params.d2 * m};
}

} // namespace tyc

#pragma once

#include <array>

#include "tyc/params.hpp"

namespace tyc {

using Vec4 = std::array<double, 4>;

// Pointwise population state (f, m, s, r) at one location.
struct StatePoint {
    double f = 0.0, m = 0.0, s = 0.0, r = 0.0;

    double total() const { return f + m + s + r; }
    bool finite() const;
    bool nonnegative() const { return f >= 0 && m >= 0 && s >= 0 && r >= 0; }
};

// Logistic growth factor g = 1 - (f+m+s+r)/K. May be negative when the
// local total exceeds the carrying capacity. Rejects non-finite input.
double growth_factor(const StatePoint& p, double K);

// max{g, 0}: the clipped factor used by the male and supermale birth
// terms so overcrowding shuts reproduction off instead of reversing it.
double clipped_growth_factor(const StatePoint& p, double K);

// Reaction terms of the four-species model. The female equations (f and
// r) use the signed growth factor, the male/supermale ones (m and s) the
// clipped factor; with params.clip_all_growth all four use the clipped
// factor. mu_value is the already-sampled introduction rate at this
// point and time.
//   F_f = (beta/2) f m g        - d1 f
//   F_m = beta (fm/2 + rm/2 + fs) g+ - d2 m
//   F_s = beta (rm/2 + rs) g+   - d3 s
//   F_r = mu r g                - d4 r
Vec4 reaction_modified(const StatePoint& p, const Parameters& params, double mu_value);

// Reaction terms of the unmodified comparison model: every equation uses
// the signed growth factor, one shared death rate d, and the introduced
// females are sourced at constant rate mu instead of mu*r*g. Kept for
// paired runs demonstrating its bounds defects (s can leave [0, K]).
Vec4 reaction_original(const StatePoint& p, double beta, double K, double d, double mu_value);

// Two-species reduction (s = r = 0): the wild-type subsystem used by the
// steady-state analysis. g1 = 1 - (f+m)/K, signed.
//   F_f = (beta/2) f m g1 - d1 f
//   F_m = (beta/2) f m g1 - d2 m
std::array<double, 2> reaction_reduced(double f, double m, const Parameters& params);

} // namespace tyc

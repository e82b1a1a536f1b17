#pragma once

#include <span>
#include <string>
#include <vector>

#include "tyc/analysis.hpp"
#include "tyc/integrator.hpp"

namespace tyc {

// Initial-condition policy for sweep runs. near_branch scales the
// selected interior branch (auto = the attracting one) when it exists,
// falling back to the given constants otherwise.
enum class SweepBranchChoice { auto_attracting, plus, minus };

struct SweepIc {
    bool near_branch = true;
    SweepBranchChoice branch = SweepBranchChoice::auto_attracting;
    double scale = 0.9;
    std::array<double, 4> fallback{0.1, 0.1, 0.0, 0.0}; // multiplied by K
};

// Resolve a near-branch IC at these parameters: scale times the
// selected interior branch when present (auto = the stable one), the
// fallback constants (fractions of K) otherwise. Returns (f, m, s, r).
std::array<double, 4> resolve_sweep_ic(const SweepIc& ic, const Parameters& p,
                                       const std::vector<SteadyState>& branches);

struct BifurcationRecord {
    double beta = 0;
    std::vector<SteadyState> branches; // analytic, 1..3 entries
    std::array<double, 4> asymptotic_l2{};
    double f_mean = 0, m_mean = 0; // spatial means of the final state
    bool converged = false;
    double converged_at = 0;
    std::string error; // nonempty when the run failed; annotated with beta
};

// One record per beta: analytic branches plus a simulation from the
// configured IC. Runs are independent and execute in parallel when
// requested; records are merged back in beta-grid order so output is
// deterministic.
std::vector<BifurcationRecord> sweep(std::span<const double> beta_grid,
                                     const RunSpec& base, const SweepIc& ic,
                                     bool parallel = true);

// Locate the survival transition: the midpoint of the last beta whose
// asymptotic ||f|| lies below the threshold and the first at-or-above,
// reported with half the local grid spacing as uncertainty. Throws
// NumericalError when the records never cross the threshold (or start
// above it).
struct TransitionEstimate {
    double beta_star = 0;
    double half_width = 0;
    int below_index = -1;
    int above_index = -1;
};
TransitionEstimate detect_transition(std::span<const BifurcationRecord> records,
                                     double f_norm_threshold);

// Evenly spaced beta grid over [lo, hi] with n >= 2 points.
std::vector<double> beta_grid(double lo, double hi, int n);

} // namespace tyc

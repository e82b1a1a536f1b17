#include "tyc/bifurcation.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "tyc/errors.hpp"

namespace tyc {

std::vector<double> beta_grid(double lo, double hi, int n) {
    if (n < 2)
        throw ConfigError("sweep.count must be at least 2");
    if (!(hi > lo))
        throw ConfigError("sweep range must satisfy beta_max > beta_min");
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

std::array<double, 4> resolve_sweep_ic(const SweepIc& ic, const Parameters& p,
                                       const std::vector<SteadyState>& branches) {
    std::array<double, 4> fallback{ic.fallback[0] * p.K, ic.fallback[1] * p.K,
                                   ic.fallback[2] * p.K, ic.fallback[3] * p.K};
    if (!ic.near_branch)
        return fallback;

    const SteadyState* pick = nullptr;
    for (const auto& st : branches) {
        if (st.branch == BranchLabel::origin)
            continue;
        switch (ic.branch) {
        case SweepBranchChoice::auto_attracting:
            if (st.classification == Stability::stable)
                pick = &st;
            break;
        case SweepBranchChoice::plus:
            if (st.branch == BranchLabel::plus_branch)
                pick = &st;
            break;
        case SweepBranchChoice::minus:
            if (st.branch == BranchLabel::minus_branch)
                pick = &st;
            break;
        }
    }
    if (!pick)
        return fallback;
    return {ic.scale * pick->f_star, ic.scale * pick->m_star, 0.0, 0.0};
}

namespace {

BifurcationRecord one_record(double beta, const RunSpec& base, const SweepIc& ic) {
    BifurcationRecord rec;
    rec.beta = beta;
    try {
        RunSpec spec = base;
        spec.params.beta = beta;
        rec.branches = steady_states(spec.params);

        const auto c = resolve_sweep_ic(ic, spec.params, rec.branches);
        spec.initial = SimState(spec.grid);
        for (int k = 0; k < 4; ++k)
            spec.initial.species(k).v.assign(
                static_cast<size_t>(spec.grid.cell_count()), c[static_cast<size_t>(k)]);

        SimulationResult res = run(spec);
        rec.asymptotic_l2 = res.series.back().l2;
        const double measure = spec.grid.domain_measure();
        rec.f_mean = field_mass(res.final_state.f, spec.grid) / measure;
        rec.m_mean = field_mass(res.final_state.m, spec.grid) / measure;
        rec.converged = res.converged;
        rec.converged_at = res.converged_at;
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "beta = " << beta << ": " << e.what();
        rec.error = os.str();
    }
    return rec;
}

} // namespace

std::vector<BifurcationRecord> sweep(std::span<const double> beta_grid,
                                     const RunSpec& base, const SweepIc& ic,
                                     bool parallel) {
    std::vector<BifurcationRecord> records(beta_grid.size());

    if (!parallel || beta_grid.size() < 2) {
        for (size_t i = 0; i < beta_grid.size(); ++i)
            records[i] = one_record(beta_grid[i], base, ic);
        return records;
    }

    // Records are independent; workers pull indices and write disjoint
    // slots, so the merged result is in grid order regardless of timing.
    std::atomic<size_t> next{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t workers = std::min<size_t>(hw, beta_grid.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= beta_grid.size())
                    return;
                records[i] = one_record(beta_grid[i], base, ic);
            }
        });
    }
    for (auto& th : pool)
        th.join();
    return records;
}

TransitionEstimate detect_transition(std::span<const BifurcationRecord> records,
                                     double f_norm_threshold) {
    if (records.empty())
        throw NumericalError("detect_transition: no records");
    if (!(f_norm_threshold > 0))
        throw ConfigError("detect_transition: threshold must be positive");

    int last_below = -1;
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (!rec.error.empty())
            continue; // failed runs carry no verdict
        if (rec.asymptotic_l2[0] >= f_norm_threshold) {
            if (last_below < 0)
                throw NumericalError(
                    "detect_transition: records start above the threshold; no "
                    "extinction side to bracket");
            TransitionEstimate est;
            est.below_index = last_below;
            est.above_index = static_cast<int>(i);
            const double lo = records[static_cast<size_t>(last_below)].beta;
            const double hi = rec.beta;
            est.beta_star = 0.5 * (lo + hi);
            est.half_width = 0.5 * (hi - lo);
            return est;
        }
        last_below = static_cast<int>(i);
    }
    throw NumericalError(
        "detect_transition: no transition; every asymptotic female norm stays "
        "below the threshold");
}

} // namespace tyc

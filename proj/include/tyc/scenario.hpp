#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "tyc/bifurcation.hpp"
#include "tyc/integrator.hpp"

namespace tyc {

enum class Command { simulate, steady_states_cmd, bifurcate, compare_models, probe_dependence, validate };

enum class IcKind { constant, random_uniform, file, near_branch };

struct IcSpec {
    IcKind kind = IcKind::constant;
    std::array<double, 4> values{0.1, 0.1, 0.0, 0.0}; // constant kind
    std::string path;                                 // file kind
    SweepBranchChoice branch = SweepBranchChoice::auto_attracting;
    double scale = 0.9;                               // near_branch kind
    std::array<double, 4> fallback{0.1, 0.1, 0.0, 0.0}; // x K, near_branch
};

struct GridSpec {
    int dim = 1;
    std::vector<double> extents{1.0};
    std::vector<int> cells{64};
};

struct SweepSpec {
    double beta_min = 8.0;
    double beta_max = 32.0;
    int count = 31;
    bool parallel = true;
};

struct ProbeSpec {
    double epsilon = 1e-3;
};

struct ScenarioConfig {
    ModelVariant model = ModelVariant::modified;
    Parameters params{};
    GridSpec grid{};
    IcSpec ic{};
    StepperKind stepper = StepperKind::explicit_euler;
    double dt = 0.0; // 0 = automatic
    double t_max = 10.0;
    double output_interval = 0.1;
    double convergence_tol = 0.0; // 0 = 1e-6 * K * sqrt(|Omega|)
    int convergence_window = 50;
    double cg_rel_tol = 1e-10;
    int cg_max_iter = 20000;
    double bounds_rel_tol = 1e-10;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    SweepSpec sweep{};
    ProbeSpec probe{};
};

// Parse a JSON config document. Strict: unknown keys are rejected with
// their path, malformed JSON reports line/column, and every violated
// parameter bound is listed. Fields not present take the documented
// defaults; "{}" is the minimal valid document.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig parse_config_file(const std::string& path);

// Resolve the IC spec into concrete fields (seeded and deterministic
// for the random kind) and validate 0 <= u <= K pointwise.
SimState build_initial_state(const ScenarioConfig& cfg, const Grid& g);

// Assemble the grid/RunSpec from a parsed config.
Grid make_grid(const ScenarioConfig& cfg);
RunSpec make_run_spec(const ScenarioConfig& cfg);

// Execute one subcommand end to end, writing artifacts into
// cfg.out_dir. Identical config + seed produce byte-identical files.
// log receives human progress lines (suppressed by quiet upstream);
// machine-readable summaries go to the artifact files.
void run_scenario(const ScenarioConfig& cfg, Command cmd, std::ostream& log);

const char* to_string(Command c);

} // namespace tyc

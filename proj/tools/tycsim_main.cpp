// tycsim — reaction-diffusion toolkit for the four-species introduction model.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 invariant violation during integration.
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "tyc/errors.hpp"
#include "tyc/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvariant = 4;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    long long seed = -1; // -1 = keep the config's seed
    bool quiet = false;
};

void emit_error(int exit_code, const char* kind, const std::string& message,
                const std::vector<std::string>& issues = {}) {
    nlohmann::json j{{"error",
                      {{"exit_code", exit_code}, {"kind", kind}, {"message", message}}}};
    if (!issues.empty())
        j["error"]["issues"] = issues;
    std::cout << j.dump(2) << std::endl;
}

int run_command(tyc::Command cmd, const CliOptions& opt) {
    std::ostringstream devnull;
    std::ostream& log = opt.quiet ? static_cast<std::ostream&>(devnull) : std::cerr;
    try {
        tyc::ScenarioConfig cfg = opt.config_path.empty()
                                      ? tyc::parse_config("{}")
                                      : tyc::parse_config_file(opt.config_path);
        // Output directory precedence: --out flag, then TYCSIM_OUT_DIR, then config.
        if (!opt.out_dir.empty()) {
            cfg.out_dir = opt.out_dir;
        } else if (const char* env = std::getenv("TYCSIM_OUT_DIR"); env && *env) {
            cfg.out_dir = env;
        }
        if (opt.seed >= 0)
            cfg.seed = static_cast<std::uint64_t>(opt.seed);

        tyc::run_scenario(cfg, cmd, log);
        return kExitOk;
    } catch (const tyc::ConfigError& e) {
        emit_error(kExitConfig, "config", e.what(), e.issues());
        return kExitConfig;
    } catch (const tyc::InvariantViolation& e) {
        emit_error(kExitInvariant, "invariant", e.what());
        return kExitInvariant;
    } catch (const tyc::NumericalError& e) {
        emit_error(kExitNumerical, "numerical", e.what());
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        emit_error(kExitNumerical, "numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        emit_error(kExitNumerical, "internal", e.what());
        return kExitNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tycsim: four-species reaction-diffusion simulation toolkit"};
    app.require_subcommand(1);

    CliOptions opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON configuration file");
        sub->add_option("--out", opt.out_dir, "output directory (overrides TYCSIM_OUT_DIR and config)");
        sub->add_option("--seed", opt.seed, "override the RNG seed")->check(CLI::NonNegativeNumber);
        sub->add_flag("--quiet", opt.quiet, "suppress progress logging");
    };

    struct SubEntry {
        tyc::Command cmd;
        const char* desc;
    };
    const std::pair<const char*, SubEntry> entries[] = {
        {"simulate",
         {tyc::Command::simulate, "integrate the system and write time series + final state"}},
        {"steady-states",
         {tyc::Command::steady_states_cmd,
          "enumerate spatially uniform steady states with stability"}},
        {"bifurcate",
         {tyc::Command::bifurcate, "sweep the birth rate and locate the onset of persistence"}},
        {"compare-models",
         {tyc::Command::compare_models,
          "run the modified and original kinetics side by side on one initial state"}},
        {"probe-dependence",
         {tyc::Command::probe_dependence,
          "measure sensitivity of trajectories to an initial perturbation"}},
        {"validate",
         {tyc::Command::validate, "check a configuration without integrating"}},
    };

    tyc::Command selected = tyc::Command::validate;
    for (const auto& [name, entry] : entries) {
        CLI::App* sub = app.add_subcommand(name, entry.desc);
        add_common(sub);
        const tyc::Command cmd = entry.cmd;
        sub->callback([&selected, cmd] { selected = cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage problems are configuration errors (exit 2); --help and
        // --version are successful exits.
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    return run_command(selected, opt);
}

// leocov: coverage of LEO constellations on Poisson orbits.
//
//   leocov geometry --config scenario.json --out results/
//   leocov coverage --config scenario.json --out results/ [--seed N] [--trials N]
//   leocov sweep    [pathloss tilt ...] --out results/
//   leocov validate --out results/ [--seed N] [--criterion K ...]
//
// Exit codes: 0 success, 1 validation failure, 2 config error,
// 3 numerical non-convergence.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leocov/commands.hpp"
#include "leocov/montecarlo.hpp"
#include "leocov/numerics.hpp"
#include "leocov/scenario.hpp"
#include "leocov/validation.hpp"

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumerical = 3 };

void print_files(const leocov::CommandReport& report) {
  for (const auto& f : report.files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage probability of LEO satellite networks"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned threads = 0;
  std::string format = "csv";
  bool quiet = false;

  auto common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config, "scenario file (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "override the Monte-Carlo seed");
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv"}));
    cmd->add_flag("--quiet", quiet, "suppress progress output");
  };

  auto* geometry = app.add_subcommand("geometry", "visible arc length and time");
  common(geometry, true);

  auto* coverage = app.add_subcommand("coverage", "analytic and MC coverage");
  common(coverage, true);
  coverage->add_option("--trials", trials, "override Monte-Carlo trials")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> presets;
  auto* sweep = app.add_subcommand("sweep", "built-in parameter sweeps");
  common(sweep, false);
  sweep->add_option("--trials", trials, "override Monte-Carlo trials")
      ->check(CLI::PositiveNumber);
  sweep->add_option("presets", presets, "preset names (default: all)")
      ->check(CLI::IsMember(leocov::sweep_preset_names()));

  std::vector<int> criteria;
  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  common(validate, false);
  validate->add_option("--criterion", criteria, "run only these criteria")
      ->check(CLI::Range(leocov::kFirstCriterion, leocov::kLastCriterion));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  leocov::RunOptions options;
  options.out_dir = out_dir;
  options.seed = seed;
  options.trials = trials;
  options.threads = threads;
  options.log = quiet ? nullptr : &std::cerr;

  try {
    if (*geometry) {
      print_files(leocov::cmd_geometry(leocov::load_scenarios(config), options));
    } else if (*coverage) {
      print_files(leocov::cmd_coverage(leocov::load_scenarios(config), options));
    } else if (*sweep) {
      if (!config.empty()) {
        throw leocov::ConfigError("--config", "sweep takes preset names only");
      }
      if (presets.empty()) presets = leocov::sweep_preset_names();
      print_files(leocov::cmd_sweep(presets, options));
    } else if (*validate) {
      if (!config.empty()) {
        throw leocov::ConfigError("--config",
                                  "validate uses fixed parameter sets");
      }
      leocov::ValidationOptions vopts;
      if (seed) vopts.seed = *seed;
      vopts.threads = threads;
      vopts.log = options.log;
      const int rc = leocov::cmd_validate(vopts, out_dir, criteria);
      std::cout << (options.out_dir / "validation_report.json").string() << '\n';
      return rc == 0 ? kOk : kValidationFailed;
    }
  } catch (const leocov::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const leocov::QuadratureError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const leocov::DegenerateConditioning& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

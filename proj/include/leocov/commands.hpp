#ifndef LEOCOV_COMMANDS_HPP
#define LEOCOV_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "leocov/scenario.hpp"

namespace leocov {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  /// Overrides mc.seed / mc.trials. Setting either on a scenario without an
  /// mc block turns its Monte-Carlo curves on.
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned threads = 0;
  /// Progress and notices; may be null.
  std::ostream* log = nullptr;
};

struct CommandReport {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notices;
};

inline constexpr std::string_view kGeometryCsvHeader =
    "scenario_id,omega_min_deg,theta_deg,arc_length_km,visible_time_s,"
    "altitude_km";

inline constexpr std::string_view kComparisonCsvHeader =
    "scenario_id,curve_kind,gamma_db,analytic,mc,delta";

/// Visible arc length and visible time over a theta grid, one block per
/// listed omega_min (the scenario's own omega_min when no geometry block is
/// given). Writes geometry.csv.
CommandReport cmd_geometry(const std::vector<ScenarioConfig>& scenarios,
                           const RunOptions& options);

/// Analytic curves (SIR, SNR with a budget, max-SIR for N > 1) and matching
/// Monte-Carlo curves when mc is set. Writes coverage.csv,
/// coverage_comparison.csv (analytic vs MC per point) and coverage.meta.json.
CommandReport cmd_coverage(const std::vector<ScenarioConfig>& scenarios,
                           const RunOptions& options);

/// Names accepted by sweep_preset().
std::vector<std::string> sweep_preset_names();

/// Built-in parameter sweep. Throws std::invalid_argument for an unknown
/// name. "distance-ccdf" carries nearest-distance scenarios (see cmd_sweep).
std::vector<ScenarioConfig> sweep_preset(std::string_view name);

/// Runs presets into out_dir/<name>/. "geometry" runs cmd_geometry,
/// "distance-ccdf" writes ccdf.csv (analytic and empirical nearest-distance CCDF), the rest
/// run cmd_coverage.
CommandReport cmd_sweep(const std::vector<std::string>& names,
                        const RunOptions& options);

}  // namespace leocov

#endif  // LEOCOV_COMMANDS_HPP

#ifndef LEOCOV_SCENARIO_HPP
#define LEOCOV_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leocov/coverage.hpp"
#include "leocov/geometry.hpp"
#include "leocov/interference.hpp"

// Scenario files and result tables.
//
// A scenario file is JSON: either one scenario object or
// {"scenarios": [ ... ]}. Keys not listed below are rejected.
//
//   scenario_id     string
//   earth           {radius_km, gravitational_constant, mass_kg}  optional
//   omega_min_deg   number
//   orbits          [{altitude_km, theta_deg, phi_deg, lambda_per_km}]
//   channel         {alpha, m, g_i_bar_db (optional, default -13)}
//   budget          {p_dbm, g_serve_dbi, noise_density_dbm_hz,
//                    noise_figure_db, bandwidth_hz}                 optional
//   gamma_grid      {start_db, stop_db, step_db}
//   mc              {trials, seed}                                  optional
//   geometry        {omega_min_deg: [..], theta_start_deg,
//                    theta_stop_deg, theta_step_deg}                optional

namespace leocov {

/// Invalid scenario input. field() is a JSON path such as
/// "scenarios[1].orbits[0].theta_deg", or "<parse>" for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct OrbitConfig {
  double altitude_km = 0.0;
  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double lambda_per_km = 0.0;
};

struct ChannelConfig {
  double alpha = 2.0;
  double m = 1.0;
  double g_i_bar_db = -13.0;
};

struct GammaGrid {
  double start_db = -10.0;
  double stop_db = 30.0;
  double step_db = 5.0;

  std::vector<double> values() const;
};

struct McSettings {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
};

struct GeometrySweep {
  std::vector<double> omega_min_deg;
  double theta_start_deg = 0.0;
  double theta_stop_deg = 180.0;
  double theta_step_deg = 1.0;
};

struct ScenarioConfig {
  std::string scenario_id;
  EarthConstants earth;
  double omega_min_deg = 10.0;
  std::vector<OrbitConfig> orbits;
  ChannelConfig channel;
  std::optional<LinkBudget> budget;
  GammaGrid gamma_grid;
  std::optional<McSettings> mc;
  std::optional<GeometrySweep> geometry;

  VisibilityWindow window() const;
  ChannelParams channel_params() const;
  ConstellationSpec constellation() const;
  /// Throws ConfigError (with `path` as prefix) if any module precondition
  /// fails.
  void validate(const std::string& path) const;
};

/// Parses scenario text. Throws ConfigError.
std::vector<ScenarioConfig> parse_scenarios(std::string_view text);

/// Reads and parses a scenario file. Throws ConfigError.
std::vector<ScenarioConfig> load_scenarios(const std::filesystem::path& path);

/// One line of the results table.
struct ResultRow {
  std::string scenario_id;
  std::string curve_kind;
  double gamma_db = 0.0;
  double value = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::vector<double> theta_deg;      // one entry per orbit
  std::vector<double> lambda_per_km;  // one entry per orbit
  double alpha = 0.0;
  double m = 0.0;
  int n_orbits = 0;
  std::optional<std::uint64_t> seed;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr std::string_view kResultCsvHeader =
    "scenario_id,curve_kind,gamma_db,value,ci_low,ci_high,theta_deg,"
    "lambda_per_km,alpha,m,n_orbits,seed";

/// Bumped whenever the column set or encoding changes.
inline constexpr int kResultSchemaVersion = 1;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
/// Throws std::invalid_argument unless the whole string is a number.
double parse_double(std::string_view text);

std::vector<ResultRow> rows_from_curve(const ScenarioConfig& scenario,
                                       const CoverageCurve& curve);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Inverse of write_results_csv. Throws std::invalid_argument on a bad
/// header or malformed line.
std::vector<ResultRow> read_results_csv(std::istream& in);

}  // namespace leocov

#endif  // LEOCOV_SCENARIO_HPP

#include "leocov/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "leocov/link_distance.hpp"
#include "leocov/montecarlo.hpp"

namespace leocov {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void note(const RunOptions& options, CommandReport& report, std::string text) {
  if (options.log) *options.log << text << '\n';
  report.notices.push_back(std::move(text));
}

std::optional<McConfig> mc_config(const ScenarioConfig& s,
                                  const RunOptions& options) {
  if (!s.mc && !options.seed && !options.trials) return std::nullopt;
  const McSettings base = s.mc.value_or(McSettings{});
  McConfig cfg;
  cfg.trials = options.trials.value_or(base.trials);
  cfg.seed = options.seed.value_or(base.seed);
  cfg.threads = options.threads;
  cfg.validate();
  return cfg;
}

std::vector<double> theta_grid(const GeometrySweep& g) {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(
      std::floor((g.theta_stop_deg - g.theta_start_deg) / g.theta_step_deg +
                 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    out.push_back(g.theta_start_deg + static_cast<double>(i) * g.theta_step_deg);
  }
  return out;
}

}  // namespace

CommandReport cmd_geometry(const std::vector<ScenarioConfig>& scenarios,
                           const RunOptions& options) {
  CommandReport report;
  const auto path = options.out_dir / "geometry.csv";
  auto out = open_output(path);
  out << kGeometryCsvHeader << '\n';
  for (const auto& s : scenarios) {
    GeometrySweep sweep = s.geometry.value_or(GeometrySweep{});
    if (sweep.omega_min_deg.empty()) sweep.omega_min_deg = {s.omega_min_deg};
    const double altitude = s.orbits.at(0).altitude_km;
    for (double omega : sweep.omega_min_deg) {
      const VisibilityWindow window(s.earth.radius_km, altitude,
                                    deg_to_rad(omega));
      for (double theta : theta_grid(sweep)) {
        const OrbitGeometry orbit(s.earth.radius_km, altitude,
                                  deg_to_rad(theta));
        out << s.scenario_id << ',' << format_double(omega) << ','
            << format_double(theta) << ','
            << format_double(visible_arc_length(orbit, window)) << ','
            << format_double(visible_time(orbit, window, s.earth)) << ','
            << format_double(altitude) << '\n';
      }
    }
  }
  report.files.push_back(path);
  return report;
}

namespace {

struct ScenarioCurves {
  std::vector<CoverageCurve> analytic;
  std::vector<CoverageCurve> mc;
  nlohmann::ordered_json meta;
};

std::string_view mc_partner(CurveKind kind) {
  switch (kind) {
    case CurveKind::kSirAnalytic: return "SIR-MC";
    case CurveKind::kSnrAnalytic: return "SNR-MC";
    case CurveKind::kMaxSirAnalytic: return "maxSIR-MC";
    default: return "";
  }
}

ScenarioCurves evaluate_scenario(const ScenarioConfig& s,
                                 const RunOptions& options,
                                 CommandReport& report) {
  ScenarioCurves out;
  const auto spec = s.constellation();
  const auto grid = s.gamma_grid.values();
  for (std::size_t n = 0; n < spec.orbits.size(); ++n) {
    if (visible_arc_length(spec.orbits[n].orbit, spec.window) == 0.0) {
      throw ConfigError(s.scenario_id + ".orbits[" + std::to_string(n) + "]",
                        "orbit never enters the visibility cap");
    }
  }
  auto mc = mc_config(s, options);
  const bool analytic = spec.channel.has_integer_shape();
  const bool single = spec.orbits.size() == 1;
  std::vector<std::string> notices;
  if (!analytic) {
    if (!mc) {
      mc = McConfig{};
      mc->threads = options.threads;
    }
    notices.push_back("scenario " + s.scenario_id + ": m = " +
                      format_double(s.channel.m) +
                      " is not an integer; analytic curves skipped, MC-only "
                      "(trials " + std::to_string(mc->trials) + ", seed " +
                      std::to_string(mc->seed) + ")");
  }

  const auto& first = spec.orbits[0];
  if (analytic) {
    for (bool conditional : {false, true}) {
      if (single) {
        out.analytic.push_back(sir_curve(first.orbit, spec.window, first.lambda,
                                         spec.channel, grid, conditional));
        if (s.budget) {
          out.analytic.push_back(snr_curve(first.orbit, spec.window,
                                           first.lambda, spec.channel,
                                           *s.budget, grid, conditional));
        }
      } else {
        out.analytic.push_back(max_sir_curve(spec, grid, conditional));
      }
    }
  }
  if (!single && s.budget) {
    notices.push_back("scenario " + s.scenario_id +
                      ": budget ignored for multi-orbit scenarios");
  }

  nlohmann::ordered_json mc_meta = nullptr;
  if (mc) {
    if (single) {
      if (s.budget) {
        auto noise = empirical_snr_sinr_coverage(first.orbit, spec.window,
                                                 first.lambda, spec.channel,
                                                 *s.budget, grid, *mc);
        for (auto* c : {&noise.sir, &noise.snr, &noise.sinr}) {
          out.mc.push_back(c->unconditional);
          out.mc.push_back(c->conditional);
        }
        mc_meta = {{"conditioning_fraction", noise.sir.conditioning_fraction},
                   {"conditioned_trials", noise.sir.conditioned_trials}};
      } else {
        auto sir = empirical_sir_coverage(first.orbit, spec.window,
                                          first.lambda, spec.channel, grid, *mc);
        out.mc.push_back(sir.unconditional);
        out.mc.push_back(sir.conditional);
        mc_meta = {{"conditioning_fraction", sir.conditioning_fraction},
                   {"conditioned_trials", sir.conditioned_trials}};
      }
    } else {
      auto max = empirical_max_sir_coverage(spec, grid, *mc);
      out.mc.push_back(max.unconditional);
      out.mc.push_back(max.conditional);
      out.mc.push_back(max.any_orbit);
      mc_meta = {{"all_visible_fraction", max.all_visible_fraction},
                 {"conditioned_trials", max.conditioned_trials}};
    }
  }

  std::vector<double> lambdas;
  std::vector<OrbitGeometry> orbits;
  for (const auto& o : spec.orbits) {
    lambdas.push_back(o.lambda);
    orbits.push_back(o.orbit);
  }
  out.meta["scenario_id"] = s.scenario_id;
  out.meta["visibility_probability"] =
      visibility_probability(lambdas, orbits, spec.window);
  out.meta["monte_carlo"] = mc_meta;
  auto& curves = out.meta["curves"] = nlohmann::ordered_json::array();
  for (const auto* list : {&out.analytic, &out.mc}) {
    for (const auto& c : *list) {
      nlohmann::ordered_json entry;
      entry["curve_kind"] = curve_label(c);
      entry["metadata"] = c.metadata;
      curves.push_back(entry);
    }
  }
  out.meta["notices"] = notices;
  for (auto& n : notices) note(options, report, std::move(n));
  return out;
}

}  // namespace

CommandReport cmd_coverage(const std::vector<ScenarioConfig>& scenarios,
                           const RunOptions& options) {
  CommandReport report;
  std::vector<ResultRow> rows;
  std::ostringstream comparison;
  comparison << kComparisonCsvHeader << '\n';
  nlohmann::ordered_json meta;
  meta["schema_version"] = kResultSchemaVersion;
  meta["csv_header"] = kResultCsvHeader;
  meta["rng"] = RandomSource::algorithm();
  meta["scenarios"] = nlohmann::ordered_json::array();

  for (const auto& s : scenarios) {
    if (options.log) *options.log << "coverage: " << s.scenario_id << '\n';
    auto curves = evaluate_scenario(s, options, report);
    for (const auto* list : {&curves.analytic, &curves.mc}) {
      for (const auto& c : *list) {
        auto more = rows_from_curve(s, c);
        rows.insert(rows.end(), more.begin(), more.end());
      }
    }
    for (const auto& a : curves.analytic) {
      for (const auto& m : curves.mc) {
        if (to_string(m.kind) != mc_partner(a.kind) ||
            m.conditional != a.conditional) {
          continue;
        }
        for (std::size_t i = 0; i < a.values.size(); ++i) {
          comparison << s.scenario_id << ',' << curve_label(a) << ','
                     << format_double(a.thresholds_db[i]) << ','
                     << format_double(a.values[i]) << ','
                     << format_double(m.values[i]) << ','
                     << format_double(a.values[i] - m.values[i]) << '\n';
        }
      }
    }
    meta["scenarios"].push_back(std::move(curves.meta));
  }

  const auto csv_path = options.out_dir / "coverage.csv";
  const auto cmp_path = options.out_dir / "coverage_comparison.csv";
  const auto meta_path = options.out_dir / "coverage.meta.json";
  {
    auto out = open_output(csv_path);
    write_results_csv(out, rows);
  }
  open_output(cmp_path) << comparison.str();
  open_output(meta_path) << meta.dump(2) << '\n';
  report.files = {csv_path, cmp_path, meta_path};
  return report;
}

namespace {

ScenarioConfig base_scenario(std::string id) {
  ScenarioConfig s;
  s.scenario_id = std::move(id);
  s.omega_min_deg = 10.0;
  s.orbits = {{500.0, 90.0, 0.0, 0.005}};
  s.channel = {2.0, 1.0, -13.0};
  s.gamma_grid = {-10.0, 30.0, 1.0};
  s.mc = McSettings{100000, 1};
  return s;
}

std::string tag(double x) { return format_double(x); }

std::vector<ScenarioConfig> geometry_preset(const std::string& name) {
  auto s = base_scenario(name);
  s.mc.reset();
  s.geometry = GeometrySweep{{10.0, 20.0, 30.0}, 0.0, 180.0, 1.0};
  return {s};
}

}  // namespace

std::vector<std::string> sweep_preset_names() {
  return {"geometry", "distance-ccdf", "pathloss",    "fading",
          "density",  "altitude",      "tilt",        "bandwidth",
          "orbit-count", "orbit-mix"};
}

std::vector<ScenarioConfig> sweep_preset(std::string_view name) {
  const std::string n(name);
  std::vector<ScenarioConfig> out;
  if (n == "geometry") return geometry_preset(n);
  if (n == "distance-ccdf") {
    for (double theta : {90.0, 85.0, 95.0, 80.0, 100.0}) {
      for (double lambda : {0.01, 0.001, 0.0001}) {
        auto s = base_scenario("ccdf-theta" + tag(theta) + "-lambda" + tag(lambda));
        s.orbits[0].theta_deg = theta;
        s.orbits[0].lambda_per_km = lambda;
        out.push_back(s);
      }
    }
  } else if (n == "pathloss") {
    for (double alpha : {2.0, 3.0, 4.0}) {
      auto s = base_scenario("alpha" + tag(alpha));
      s.channel.alpha = alpha;
      out.push_back(s);
    }
  } else if (n == "fading") {
    for (double m : {1.0, 2.0, 3.0}) {
      auto s = base_scenario("m" + tag(m));
      s.channel.m = m;
      out.push_back(s);
    }
  } else if (n == "density") {
    for (double lambda : {0.0005, 0.001, 0.005, 0.01}) {
      auto s = base_scenario("lambda" + tag(lambda));
      s.orbits[0].lambda_per_km = lambda;
      out.push_back(s);
    }
  } else if (n == "altitude") {
    for (double h : {500.0, 1000.0, 1500.0}) {
      auto s = base_scenario("altitude" + tag(h));
      s.orbits[0].altitude_km = h;
      out.push_back(s);
    }
  } else if (n == "tilt") {
    for (double theta : {90.0, 85.0, 95.0, 80.0, 100.0}) {
      auto s = base_scenario("theta" + tag(theta));
      s.orbits[0].theta_deg = theta;
      out.push_back(s);
    }
  } else if (n == "bandwidth") {
    for (double bw : {10e6, 100e6, 1000e6}) {
      auto s = base_scenario("bw" + tag(bw / 1e6) + "MHz");
      s.budget = LinkBudget{40.0, 30.0, -174.0, 11.0, bw};
      out.push_back(s);
    }
  } else if (n == "orbit-count") {
    for (int count = 1; count <= 4; ++count) {
      auto s = base_scenario("N" + std::to_string(count));
      s.orbits.clear();
      for (int k = 0; k < count; ++k) {
        s.orbits.push_back({500.0, 90.0, 180.0 * k / count, 0.005});
      }
      out.push_back(s);
    }
  } else if (n == "orbit-mix") {
    const std::vector<std::pair<std::string, std::vector<double>>> mixes = {
        {"N1-theta90", {90.0}},
        {"N3-theta90", {90.0, 90.0, 90.0}},
        {"N3-theta90-95-100", {90.0, 95.0, 100.0}},
        {"N3-theta100", {100.0, 100.0, 100.0}},
    };
    for (const auto& [id, thetas] : mixes) {
      auto s = base_scenario("mix-" + id);
      s.orbits.clear();
      for (std::size_t k = 0; k < thetas.size(); ++k) {
        s.orbits.push_back(
            {500.0, thetas[k], 120.0 * static_cast<double>(k), 0.005});
      }
      out.push_back(s);
    }
  } else {
    throw std::invalid_argument("unknown sweep preset '" + n + "'");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].validate("preset " + n + "[" + std::to_string(i) + "]");
  }
  return out;
}

namespace {

std::filesystem::path write_ccdf_sweep(const std::vector<ScenarioConfig>& scenarios,
                                       const RunOptions& options,
                                       const std::filesystem::path& dir) {
  const auto path = dir / "ccdf.csv";
  auto out = open_output(path);
  out << "scenario_id,theta_deg,lambda_per_km,r_km,ccdf_analytic,ccdf_mc\n";
  constexpr int kPoints = 101;
  for (const auto& s : scenarios) {
    const auto spec = s.constellation();
    const auto& o = spec.orbits[0];
    const NearestDistanceLaw law(o.orbit, spec.window, o.lambda);
    std::vector<double> grid;
    for (int i = 0; i < kPoints; ++i) {
      grid.push_back(law.d_min() + (law.d_max() - law.d_min()) * i / (kPoints - 1));
    }
    std::optional<EmpiricalCcdf> mc;
    if (auto cfg = mc_config(s, options)) {
      mc = empirical_nearest_ccdf(o.orbit, spec.window, o.lambda, grid, *cfg);
    }
    for (int i = 0; i < kPoints; ++i) {
      out << s.scenario_id << ',' << format_double(s.orbits[0].theta_deg) << ','
          << format_double(o.lambda) << ',' << format_double(grid[i]) << ','
          << format_double(law.ccdf(grid[i])) << ','
          << (mc ? format_double(mc->values[i]) : "") << '\n';
    }
  }
  return path;
}

}  // namespace

CommandReport cmd_sweep(const std::vector<std::string>& names,
                        const RunOptions& options) {
  CommandReport report;
  for (const auto& name : names) {
    const auto scenarios = sweep_preset(name);
    RunOptions sub = options;
    sub.out_dir = options.out_dir / name;
    if (options.log) *options.log << "sweep: " << name << '\n';
    CommandReport part;
    if (name == "geometry") {
      part = cmd_geometry(scenarios, sub);
    } else if (name == "distance-ccdf") {
      part.files.push_back(write_ccdf_sweep(scenarios, sub, sub.out_dir));
    } else {
      part = cmd_coverage(scenarios, sub);
    }
    report.files.insert(report.files.end(), part.files.begin(), part.files.end());
    report.notices.insert(report.notices.end(), part.notices.begin(),
                          part.notices.end());
  }
  return report;
}

}  // namespace leocov

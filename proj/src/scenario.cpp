#include "leocov/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace leocov {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

std::vector<double> GammaGrid::values() const {
  return threshold_grid_db(start_db, stop_db, step_db);
}

VisibilityWindow ScenarioConfig::window() const {
  return VisibilityWindow(earth.radius_km, orbits.at(0).altitude_km,
                          deg_to_rad(omega_min_deg));
}

ChannelParams ScenarioConfig::channel_params() const {
  ChannelParams ch;
  ch.alpha = channel.alpha;
  ch.m = channel.m;
  ch.g_i_bar = db_to_linear(channel.g_i_bar_db);
  return ch;
}

ConstellationSpec ScenarioConfig::constellation() const {
  ConstellationSpec spec{{}, window(), channel_params()};
  for (const auto& o : orbits) {
    spec.orbits.push_back({OrbitGeometry(earth.radius_km, o.altitude_km,
                                         deg_to_rad(o.theta_deg),
                                         deg_to_rad(o.phi_deg)),
                           o.lambda_per_km});
  }
  return spec;
}

namespace {

// Runs `check` and rethrows module precondition failures as ConfigError.
template <typename F>
void at_field(const std::string& field, F&& check) {
  try {
    check();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

void ScenarioConfig::validate(const std::string& path) const {
  if (scenario_id.empty() ||
      scenario_id.find_first_of(",\"\r\n;") != std::string::npos) {
    throw ConfigError(path + ".scenario_id",
                      "must be non-empty without commas, quotes or ';'");
  }
  if (!(earth.radius_km > 0.0) || !(earth.gravitational_constant > 0.0) ||
      !(earth.mass_kg > 0.0)) {
    throw ConfigError(path + ".earth", "constants must be positive");
  }
  if (!(omega_min_deg >= 0.0 && omega_min_deg < 90.0)) {
    throw ConfigError(path + ".omega_min_deg", "must lie in [0, 90)");
  }
  if (orbits.empty()) {
    throw ConfigError(path + ".orbits", "at least one orbit is required");
  }
  for (std::size_t n = 0; n < orbits.size(); ++n) {
    const auto field = path + ".orbits[" + std::to_string(n) + "]";
    const auto& o = orbits[n];
    if (!(o.altitude_km > 0.0) || !std::isfinite(o.altitude_km)) {
      throw ConfigError(field + ".altitude_km", "must be positive");
    }
    if (!(o.theta_deg >= 0.0 && o.theta_deg <= 180.0)) {
      throw ConfigError(field + ".theta_deg", "must lie in [0, 180]");
    }
    if (!(o.phi_deg >= 0.0 && o.phi_deg < 360.0)) {
      throw ConfigError(field + ".phi_deg", "must lie in [0, 360)");
    }
    at_field(field, [&] {
      OrbitGeometry(earth.radius_km, o.altitude_km, deg_to_rad(o.theta_deg),
                    deg_to_rad(o.phi_deg));
    });
    if (!(o.lambda_per_km > 0.0) || !std::isfinite(o.lambda_per_km)) {
      throw ConfigError(field + ".lambda_per_km", "must be positive");
    }
    if (o.altitude_km != orbits[0].altitude_km) {
      throw ConfigError(field + ".altitude_km",
                        "all orbits must share one altitude");
    }
  }
  at_field(path + ".omega_min_deg", [&] { window(); });
  at_field(path + ".channel", [&] { channel_params().validate(); });
  if (budget) at_field(path + ".budget", [&] { budget->validate(); });
  at_field(path + ".gamma_grid", [&] { gamma_grid.values(); });
  if (mc && mc->trials == 0) {
    throw ConfigError(path + ".mc.trials", "must be at least 1");
  }
  if (geometry) {
    if (geometry->omega_min_deg.empty()) {
      throw ConfigError(path + ".geometry.omega_min_deg",
                        "needs at least one angle");
    }
    for (double w : geometry->omega_min_deg) {
      if (!(w >= 0.0 && w < 90.0)) {
        throw ConfigError(path + ".geometry.omega_min_deg",
                          "angles must lie in [0, 90)");
      }
    }
    const auto& g = *geometry;
    if (!(g.theta_start_deg >= 0.0) || !(g.theta_stop_deg <= 180.0) ||
        !(g.theta_step_deg > 0.0) || !(g.theta_stop_deg >= g.theta_start_deg)) {
      throw ConfigError(path + ".geometry",
                        "theta grid must satisfy 0 <= start <= stop <= 180, "
                        "step > 0");
    }
  }
}

namespace {

// Strict view of one JSON object: every key must be consumed or listed.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path,
               std::initializer_list<std::string_view> allowed)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
    for (const auto& item : node_.items()) {
      bool known = false;
      for (auto key : allowed) known = known || key == item.key();
      if (!known) throw ConfigError(field(item.key()), "unknown key");
    }
  }

  std::string field(std::string_view key) const {
    return path_ + "." + std::string(key);
  }
  bool has(std::string_view key) const {
    return node_.contains(std::string(key));
  }
  const json& child(std::string_view key) const {
    if (!has(key)) throw ConfigError(field(key), "missing required key");
    return node_.at(std::string(key));
  }

  double number(std::string_view key) const {
    const auto& v = child(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    return v.get<double>();
  }
  double number_or(std::string_view key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  std::uint64_t count(std::string_view key) const {
    const auto& v = child(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(field(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::string text(std::string_view key) const {
    const auto& v = child(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }
  const json& array(std::string_view key) const {
    const auto& v = child(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected an array");
    return v;
  }

 private:
  const json& node_;
  std::string path_;
};

OrbitConfig read_orbit(const json& node, const std::string& path) {
  ObjectReader r(node, path,
                 {"altitude_km", "theta_deg", "phi_deg", "lambda_per_km"});
  return {r.number("altitude_km"), r.number("theta_deg"), r.number("phi_deg"),
          r.number("lambda_per_km")};
}

ScenarioConfig read_scenario(const json& node, const std::string& path) {
  ObjectReader r(node, path,
                 {"scenario_id", "earth", "omega_min_deg", "orbits", "channel",
                  "budget", "gamma_grid", "mc", "geometry"});
  ScenarioConfig s;
  s.scenario_id = r.text("scenario_id");
  if (r.has("earth")) {
    ObjectReader e(r.child("earth"), r.field("earth"),
                   {"radius_km", "gravitational_constant", "mass_kg"});
    s.earth.radius_km = e.number_or("radius_km", s.earth.radius_km);
    s.earth.gravitational_constant =
        e.number_or("gravitational_constant", s.earth.gravitational_constant);
    s.earth.mass_kg = e.number_or("mass_kg", s.earth.mass_kg);
  }
  s.omega_min_deg = r.number("omega_min_deg");

  const auto& orbits = r.array("orbits");
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    s.orbits.push_back(
        read_orbit(orbits[i], r.field("orbits") + "[" + std::to_string(i) + "]"));
  }

  ObjectReader ch(r.child("channel"), r.field("channel"),
                  {"alpha", "m", "g_i_bar_db"});
  s.channel.alpha = ch.number("alpha");
  s.channel.m = ch.number("m");
  s.channel.g_i_bar_db = ch.number_or("g_i_bar_db", s.channel.g_i_bar_db);

  if (r.has("budget")) {
    ObjectReader b(r.child("budget"), r.field("budget"),
                   {"p_dbm", "g_serve_dbi", "noise_density_dbm_hz",
                    "noise_figure_db", "bandwidth_hz"});
    LinkBudget budget;
    budget.p_dbm = b.number("p_dbm");
    budget.g_serve_dbi = b.number("g_serve_dbi");
    budget.noise_density_dbm_hz = b.number("noise_density_dbm_hz");
    budget.noise_figure_db = b.number("noise_figure_db");
    budget.bandwidth_hz = b.number("bandwidth_hz");
    s.budget = budget;
  }

  ObjectReader g(r.child("gamma_grid"), r.field("gamma_grid"),
                 {"start_db", "stop_db", "step_db"});
  s.gamma_grid = {g.number("start_db"), g.number("stop_db"),
                  g.number("step_db")};

  if (r.has("mc")) {
    ObjectReader m(r.child("mc"), r.field("mc"), {"trials", "seed"});
    s.mc = McSettings{m.count("trials"), m.count("seed")};
  }

  if (r.has("geometry")) {
    ObjectReader gm(r.child("geometry"), r.field("geometry"),
                    {"omega_min_deg", "theta_start_deg", "theta_stop_deg",
                     "theta_step_deg"});
    GeometrySweep sweep;
    const auto& omegas = gm.array("omega_min_deg");
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      if (!omegas[i].is_number()) {
        throw ConfigError(gm.field("omega_min_deg") + "[" + std::to_string(i) +
                              "]",
                          "expected a number");
      }
      sweep.omega_min_deg.push_back(omegas[i].get<double>());
    }
    sweep.theta_start_deg = gm.number("theta_start_deg");
    sweep.theta_stop_deg = gm.number("theta_stop_deg");
    sweep.theta_step_deg = gm.number("theta_step_deg");
    s.geometry = sweep;
  }

  s.validate(path);
  return s;
}

}  // namespace

std::vector<ScenarioConfig> parse_scenarios(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; report the line as well.
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i) line += text[i] == '\n';
    throw ConfigError("<parse>", "line " + std::to_string(line) + ": " +
                                     e.what());
  }

  std::vector<ScenarioConfig> out;
  if (root.is_object() && root.contains("scenarios")) {
    if (root.size() != 1) {
      throw ConfigError("$", "a scenario list takes no other keys");
    }
    const auto& list = root.at("scenarios");
    if (!list.is_array() || list.empty()) {
      throw ConfigError("scenarios", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(
          read_scenario(list[i], "scenarios[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(read_scenario(root, "$"));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (out[i].scenario_id == out[j].scenario_id) {
        throw ConfigError("scenarios[" + std::to_string(i) + "].scenario_id",
                          "duplicate id '" + out[i].scenario_id + "'");
      }
    }
  }
  return out;
}

std::vector<ScenarioConfig> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenarios(buf.str());
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double x = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return x;
}

std::vector<ResultRow> rows_from_curve(const ScenarioConfig& scenario,
                                       const CoverageCurve& curve) {
  std::vector<ResultRow> rows;
  std::optional<std::uint64_t> seed;
  if (auto it = curve.metadata.find("seed"); it != curve.metadata.end()) {
    seed = std::stoull(it->second);
  }
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    ResultRow row;
    row.scenario_id = scenario.scenario_id;
    row.curve_kind = curve_label(curve);
    row.gamma_db = curve.thresholds_db[i];
    row.value = curve.values[i];
    if (i < curve.ci_low.size()) row.ci_low = curve.ci_low[i];
    if (i < curve.ci_high.size()) row.ci_high = curve.ci_high[i];
    for (const auto& o : scenario.orbits) {
      row.theta_deg.push_back(o.theta_deg);
      row.lambda_per_km.push_back(o.lambda_per_km);
    }
    row.alpha = scenario.channel.alpha;
    row.m = scenario.channel.m;
    row.n_orbits = static_cast<int>(scenario.orbits.size());
    row.seed = seed;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ';';
    s += format_double(xs[i]);
  }
  return s;
}

std::vector<double> split_numbers(std::string_view field) {
  std::vector<double> out;
  if (field.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = field.find(';', start);
    out.push_back(parse_double(field.substr(start, pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return cells;
    start = pos + 1;
  }
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("not an unsigned integer: '" +
                                std::string(text) + "'");
  }
  return v;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario_id << ',' << r.curve_kind << ','
        << format_double(r.gamma_db) << ',' << format_double(r.value) << ','
        << (r.ci_low ? format_double(*r.ci_low) : "") << ','
        << (r.ci_high ? format_double(*r.ci_high) : "") << ','
        << join(r.theta_deg) << ',' << join(r.lambda_per_km) << ','
        << format_double(r.alpha) << ',' << format_double(r.m) << ','
        << r.n_orbits << ',' << (r.seed ? std::to_string(*r.seed) : "")
        << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultCsvHeader) {
    throw std::invalid_argument("results CSV: unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 12) {
      throw std::invalid_argument("results CSV line " +
                                  std::to_string(line_no) +
                                  ": expected 12 columns");
    }
    ResultRow r;
    r.scenario_id = std::string(cells[0]);
    r.curve_kind = std::string(cells[1]);
    r.gamma_db = parse_double(cells[2]);
    r.value = parse_double(cells[3]);
    if (!cells[4].empty()) r.ci_low = parse_double(cells[4]);
    if (!cells[5].empty()) r.ci_high = parse_double(cells[5]);
    r.theta_deg = split_numbers(cells[6]);
    r.lambda_per_km = split_numbers(cells[7]);
    r.alpha = parse_double(cells[8]);
    r.m = parse_double(cells[9]);
    r.n_orbits = static_cast<int>(parse_u64(cells[10]));
    if (!cells[11].empty()) r.seed = parse_u64(cells[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace leocov

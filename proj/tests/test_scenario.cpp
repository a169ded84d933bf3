#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "leocov/commands.hpp"
#include "leocov/scenario.hpp"

using namespace leocov;
namespace fs = std::filesystem;

namespace {

const char* kSingle = R"({
  "scenario_id": "one",
  "omega_min_deg": 10,
  "orbits": [{"altitude_km": 500, "theta_deg": 90, "phi_deg": 0, "lambda_per_km": 0.005}],
  "channel": {"alpha": 2, "m": 1},
  "gamma_grid": {"start_db": -10, "stop_db": 30, "step_db": 5}
})";

std::string with(const std::string& from, const std::string& to) {
  std::string text = kSingle;
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

std::string config_error_field(const std::string& text) {
  try {
    parse_scenarios(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("leocov_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("parses a single object and a list") {
    const auto one = parse_scenarios(kSingle);
    REQUIRE(one.size() == 1);
    CHECK(one[0].scenario_id == "one");
    CHECK(one[0].channel.g_i_bar_db == -13.0);
    CHECK(one[0].orbits[0].lambda_per_km == 0.005);
    CHECK_FALSE(one[0].mc.has_value());
    CHECK_FALSE(one[0].budget.has_value());
    CHECK(one[0].gamma_grid.values().size() == 9);
    CHECK(one[0].channel_params().g_i_bar == doctest::Approx(std::pow(10.0, -1.3)));

    const std::string list = std::string(R"({"scenarios": [)") + kSingle + "," +
                             with(R"("one")", R"("two")") + "]}";
    const auto two = parse_scenarios(list);
    REQUIRE(two.size() == 2);
    CHECK(two[1].scenario_id == "two");

    const auto files = load_scenarios(fs::path(LEOCOV_CONFIG_DIR) / "multi_orbit.json");
    CHECK_FALSE(files.empty());
  }

  TEST_CASE("rejects bad input with the field path") {
    CHECK(config_error_field(with(R"("alpha": 2)", R"("alpha": 2, "beta": 1)")) ==
          "$.channel.beta");
    CHECK(config_error_field(with(R"("omega_min_deg": 10,)", "")) == "$.omega_min_deg");
    CHECK(config_error_field(with(R"("alpha": 2)", R"("alpha": "two")")) == "$.channel.alpha");
    CHECK(config_error_field(with(R"("theta_deg": 90)", R"("theta_deg": 200)")) ==
          "$.orbits[0].theta_deg");
    CHECK(config_error_field(with(R"("lambda_per_km": 0.005)", R"("lambda_per_km": 0)"))
              .rfind("$.orbits[0]", 0) == 0);
    CHECK(config_error_field(with(R"("m": 1)", R"("m": 0.2)")).rfind("$.channel", 0) == 0);

    const std::string dup = std::string(R"({"scenarios": [)") + kSingle + "," + kSingle + "]}";
    CHECK(config_error_field(dup).find("scenarios[1]") == 0);

    const std::string bad_second = std::string(R"({"scenarios": [)") + kSingle + "," +
                                   with(R"("theta_deg": 90)", R"("theta_deg": -3)") + "]}";
    CHECK(config_error_field(bad_second) == "scenarios[1].orbits[0].theta_deg");

    try {
      parse_scenarios("{\n  \"scenario_id\": \"x\",\n  oops\n}");
      FAIL("expected a parse error");
    } catch (const ConfigError& e) {
      CHECK(e.field() == "<parse>");
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(load_scenarios(fs::path(LEOCOV_TEST_DATA) / "missing.json"), ConfigError);
    CHECK_THROWS_AS(load_scenarios(fs::path(LEOCOV_TEST_DATA) / "unknown_key.json"),
                    ConfigError);
  }

  TEST_CASE("result table round trip") {
    ResultRow a;
    a.scenario_id = "mix";
    a.curve_kind = "maxSIR-MC";
    a.gamma_db = -7.5;
    a.value = 0.1 + 0.2;
    a.ci_low = 1.0 / 3.0;
    a.ci_high = 5e-324;
    a.theta_deg = {90.0, 95.0, 100.0};
    a.lambda_per_km = {0.005, 0.005, 1e-4};
    a.alpha = 2.0;
    a.m = 3.0;
    a.n_orbits = 3;
    a.seed = 18446744073709551615ULL;
    ResultRow b;
    b.scenario_id = "plain";
    b.curve_kind = "SIR-analytic";
    b.gamma_db = 30.0;
    b.value = 1.2345678901234567e-17;
    b.theta_deg = {80.0};
    b.lambda_per_km = {0.01};
    b.alpha = 4.0;
    b.m = 1.0;
    b.n_orbits = 1;

    std::ostringstream out;
    write_results_csv(out, {a, b});
    const std::string text = out.str();
    CHECK(text.substr(0, text.find('\n')) == kResultCsvHeader);
    std::istringstream in(text);
    const auto back = read_results_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == a);
    CHECK(back[1] == b);

    std::istringstream bad("scenario_id,value\n");
    CHECK_THROWS_AS(read_results_csv(bad), std::invalid_argument);
    CHECK(parse_double(format_double(0.1)) == 0.1);
    CHECK_THROWS_AS(parse_double("1.0x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  }

  TEST_CASE("geometry command") {
    const auto dir = scratch("geometry");
    auto s = parse_scenarios(kSingle);
    RunOptions opts;
    opts.out_dir = dir;
    cmd_geometry(s, opts);
    const auto cells = csv_cells(slurp(dir / "geometry.csv"));
    CHECK(cells[0].size() == 6);
    std::map<double, double> arc;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      arc[parse_double(cells[i][2])] = parse_double(cells[i][3]);
    }
    CHECK(arc.size() == 181);
    CHECK(std::abs(arc[90.0] - 3371.4) < 0.1);
    CHECK(arc[0.0] == 0.0);

    // Zero elevation mask: closed form 2 R acos(R_E / R).
    s[0].omega_min_deg = 0.0;
    s[0].geometry = GeometrySweep{{0.0}, 90.0, 90.0, 1.0};
    cmd_geometry(s, opts);
    const auto zero = csv_cells(slurp(dir / "geometry.csv"));
    REQUIRE(zero.size() == 2);
    CHECK(parse_double(zero[1][3]) ==
          doctest::Approx(2 * 6871.0 * std::acos(6371.0 / 6871.0)).epsilon(1e-12));
  }

  TEST_CASE("coverage command") {
    const auto scenarios = load_scenarios(fs::path(LEOCOV_CONFIG_DIR) / "acceptance.json");
    const auto dir1 = scratch("coverage1");
    const auto dir2 = scratch("coverage2");
    RunOptions opts;
    opts.out_dir = dir1;
    opts.trials = 40000;
    const auto report = cmd_coverage(scenarios, opts);
    CHECK(report.files.size() == 3);
    opts.out_dir = dir2;
    cmd_coverage(scenarios, opts);
    for (const char* name : {"coverage.csv", "coverage_comparison.csv", "coverage.meta.json"}) {
      CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    }

    std::ifstream csv(dir1 / "coverage.csv");
    const auto rows = read_results_csv(csv);
    std::map<std::string, int> per_kind;
    for (const auto& r : rows) ++per_kind[r.curve_kind];
    CHECK(per_kind["SIR-analytic"] == 9);
    CHECK(per_kind["SIR-MC"] == 9);
    CHECK(per_kind["SIR-analytic-conditional"] == 9);
    for (const auto& r : rows) {
      if (r.curve_kind.find("MC") != std::string::npos) {
        CHECK(r.seed.has_value());
        CHECK(r.ci_low.has_value());
        CHECK(*r.ci_low <= r.value);
        CHECK(r.value <= *r.ci_high);
      } else {
        CHECK_FALSE(r.seed.has_value());
      }
    }

    const auto cmp = csv_cells(slurp(dir1 / "coverage_comparison.csv"));
    REQUIRE(cmp.size() > 1);
    for (std::size_t i = 1; i < cmp.size(); ++i) {
      CHECK(std::abs(parse_double(cmp[i][5])) <= 0.015);
    }

    const auto meta = nlohmann::json::parse(slurp(dir1 / "coverage.meta.json"));
    CHECK(meta["schema_version"] == kResultSchemaVersion);
    CHECK(meta["csv_header"] == std::string(kResultCsvHeader));
  }

  TEST_CASE("coverage command: path-loss ordering and fractional shape") {
    auto base = parse_scenarios(kSingle)[0];
    base.gamma_grid = GammaGrid{10.0, 10.0, 1.0};
    std::vector<ScenarioConfig> set;
    for (double alpha : {2.0, 3.0, 4.0}) {
      auto s = base;
      s.scenario_id = "alpha" + std::to_string(static_cast<int>(alpha));
      s.channel.alpha = alpha;
      set.push_back(s);
    }
    auto frac = base;
    frac.scenario_id = "frac";
    frac.channel.m = 1.5;
    frac.mc = McSettings{20000, 3};
    set.push_back(frac);

    const auto dir = scratch("alpha");
    RunOptions opts;
    opts.out_dir = dir;
    const auto report = cmd_coverage(set, opts);
    bool frac_notice = false;
    for (const auto& n : report.notices) frac_notice |= n.find("frac") != std::string::npos;
    CHECK(frac_notice);

    std::ifstream csv(dir / "coverage.csv");
    std::map<std::string, double> sir;
    bool frac_has_analytic = false;
    for (const auto& r : read_results_csv(csv)) {
      if (r.curve_kind == "SIR-analytic") sir[r.scenario_id] = r.value;
      if (r.scenario_id == "frac" && r.curve_kind.find("analytic") != std::string::npos) {
        frac_has_analytic = true;
      }
    }
    CHECK_FALSE(frac_has_analytic);
    CHECK(sir["alpha2"] < sir["alpha3"]);
    CHECK(sir["alpha3"] < sir["alpha4"]);
  }

  TEST_CASE("sweep presets are valid scenarios") {
    for (const auto& name : sweep_preset_names()) {
      const auto set = sweep_preset(name);
      CHECK_FALSE(set.empty());
      for (const auto& s : set) CHECK_NOTHROW(s.validate(name));
    }
    CHECK_THROWS_AS(sweep_preset("no-such-sweep"), std::invalid_argument);
  }
}

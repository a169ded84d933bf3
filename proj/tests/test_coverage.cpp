#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "leocov/coverage.hpp"
#include "leocov/link_distance.hpp"
#include "leocov/montecarlo.hpp"

using namespace leocov;

namespace {

constexpr double kRe = 6371.0;
constexpr double kRh = 500.0;

VisibilityWindow window10() { return VisibilityWindow(kRe, kRh, deg_to_rad(10.0)); }

ChannelParams channel(double alpha, double m) {
  ChannelParams c;
  c.alpha = alpha;
  c.m = m;
  return c;
}

OrbitGeometry orbit_deg(double theta_deg, double phi_deg = 0.0) {
  return OrbitGeometry(kRe, kRh, deg_to_rad(theta_deg), deg_to_rad(phi_deg));
}

ConstellationSpec constellation(const std::vector<double>& thetas, double lambda,
                                const ChannelParams& c) {
  ConstellationSpec spec{{}, window10(), c};
  const double step = 180.0 / static_cast<double>(thetas.size());
  for (std::size_t n = 0; n < thetas.size(); ++n) {
    spec.orbits.push_back({orbit_deg(thetas[n], step * static_cast<double>(n)), lambda});
  }
  return spec;
}

// Distance-domain integral of the nearest-distance density times a kernel,
// with r = d_min + v^2 to absorb the inverse square-root edge at d_min.
template <typename F>
double expect_over_nearest(const NearestDistanceLaw& law, F&& kernel) {
  const double span = std::sqrt(law.d_max() - law.d_min());
  auto integrand = [&](double v) {
    if (!(v > 0.0 && v < span)) return 0.0;
    const double r = law.d_min() + v * v;
    return 2 * v * law.pdf(r) * kernel(r);
  };
  return integrate(integrand, 0.0, span, QuadratureSpec{1e-10, 1e-13, 600});
}

}  // namespace

TEST_SUITE("coverage") {
  TEST_CASE("tiny threshold covers every visible user") {
    const auto c = channel(2, 2);
    CHECK(sir_coverage_conditional(orbit_deg(90), window10(), 0.001, c, 1e-12) >= 1 - 1e-6);
    CHECK(sir_coverage_conditional(orbit_deg(90), window10(), 0.001, c, 1e-12) <= 1.0);
  }

  TEST_CASE("Rayleigh fading reduces to the Laplace transform at the threshold") {
    const auto w = window10();
    const auto c = channel(2.5, 1);
    for (double theta : {90.0, 84.0}) {
      const auto orbit = orbit_deg(theta);
      const double lambda = 0.005;
      const NearestDistanceLaw law(orbit, w, lambda);
      for (double gamma_db : {-5.0, 5.0, 15.0}) {
        const double g = db_to_linear(gamma_db);
        const double direct = expect_over_nearest(law, [&](double r) {
          return std::exp(log_laplace(orbit, w, lambda, c, r, g * std::pow(r, c.alpha)));
        });
        CHECK(sir_coverage_conditional(orbit, w, lambda, c, g) ==
              doctest::Approx(direct).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("invisible orbit and dense orbit") {
    const auto c = channel(2, 1);
    CHECK(sir_coverage(orbit_deg(0), window10(), 0.001, c, 1.0) == 0.0);
    const auto dense = orbit_deg(90);
    CHECK(sir_coverage(dense, window10(), 10.0, c, 1.0) ==
          doctest::Approx(sir_coverage_conditional(dense, window10(), 10.0, c, 1.0))
              .epsilon(1e-10));
  }

  TEST_CASE("matches simulation") {
    const auto w = window10();
    McConfig cfg;
    cfg.trials = 400000;
    cfg.seed = 41;
    struct Case {
      double theta, lambda, alpha, m, gamma_db, tol;
    };
    for (const Case& k : {Case{90, 0.005, 2, 1, 0, 0.01}, Case{85, 0.001, 3, 3, 5, 0.015}}) {
      const auto c = channel(k.alpha, k.m);
      const auto orbit = orbit_deg(k.theta);
      const std::vector<double> grid = {k.gamma_db};
      const auto mc = empirical_sir_coverage(orbit, w, k.lambda, c, grid, cfg);
      const double g = db_to_linear(k.gamma_db);
      CHECK(std::abs(sir_coverage(orbit, w, k.lambda, c, g) - mc.unconditional.values[0]) <=
            k.tol);
      CHECK(std::abs(sir_coverage_conditional(orbit, w, k.lambda, c, g) -
                     mc.conditional.values[0]) <= k.tol);
    }
  }

  TEST_CASE("non-integer shape is rejected") {
    CHECK_THROWS_AS(sir_coverage_conditional(orbit_deg(90), window10(), 0.001,
                                             channel(2, 1.5), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(sir_coverage(orbit_deg(90), window10(), 0.001, channel(2, 1), 0.0),
                    std::invalid_argument);
  }

  TEST_CASE("noise-limited coverage") {
    const auto w = window10();
    const auto orbit = orbit_deg(92);
    const double lambda = 0.001;
    const NearestDistanceLaw law(orbit, w, lambda);

    LinkBudget loud;
    loud.p_dbm = 400.0;
    CHECK(snr_coverage_conditional(orbit, w, lambda, channel(2, 2), loud, 10.0) ==
          doctest::Approx(1.0).epsilon(1e-9));

    LinkBudget budget;
    const double kappa = budget.noise_to_signal();
    CHECK(kappa == doctest::Approx(std::pow(10.0, (-174 + 11 + 70 - 40 - 30) / 10.0))
                       .epsilon(1e-12));
    const auto c = channel(2, 1);
    for (double gamma_db : {0.0, 10.0, 20.0}) {
      const double g = db_to_linear(gamma_db);
      const double direct = expect_over_nearest(
          law, [&](double r) { return std::exp(-kappa * g * std::pow(r * 1e3, 2.0)); });
      CHECK(snr_coverage_conditional(orbit, w, lambda, c, budget, g) ==
            doctest::Approx(direct).epsilon(1e-7));
    }

    McConfig cfg;
    cfg.trials = 400000;
    cfg.seed = 42;
    const std::vector<double> grid = {0.0, 10.0, 20.0};
    const auto mc = empirical_snr_sinr_coverage(orbit, w, lambda, c, budget, grid, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double analytic = snr_coverage(orbit, w, lambda, c, budget, db_to_linear(grid[i]));
      CHECK(std::abs(analytic - mc.snr.unconditional.values[i]) <= 0.01);
    }
  }

  TEST_CASE("curves are probabilities and non-increasing") {
    const auto grid = threshold_grid_db(-10, 30, 2);
    for (double m : {1.0, 3.0}) {
      const auto curve = sir_curve(orbit_deg(95), window10(), 0.005, channel(3, m), grid, false);
      REQUIRE(curve.values.size() == grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(curve.values[i] >= 0.0);
        CHECK(curve.values[i] <= 1.0);
        if (i > 0) CHECK(curve.values[i] <= curve.values[i - 1] + 1e-9);
      }
    }
  }

  TEST_CASE("max-SIR over orbits") {
    const auto c = channel(2, 1);
    const double g = db_to_linear(5.0);

    const auto single = constellation({87.0}, 0.002, c);
    CHECK(max_sir_coverage(single, g) ==
          doctest::Approx(sir_coverage(single.orbits[0].orbit, single.window, 0.002, c, g))
              .epsilon(1e-12));

    // Identical orbits up to azimuth: 1 - (1 - p)^N on the conditional part.
    auto same = constellation({90.0, 90.0, 90.0}, 0.002, c);
    const double p = sir_coverage_conditional(same.orbits[0].orbit, same.window, 0.002, c, g);
    CHECK(max_sir_coverage_conditional(same, g) ==
          doctest::Approx(1 - std::pow(1 - p, 3)).epsilon(1e-10));

    auto broken = constellation({90.0, 5.0}, 0.002, c);
    try {
      max_sir_coverage(broken, g);
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find('1') != std::string::npos);
    }

    const auto trio = constellation({90.0, 95.0, 100.0}, 0.005, c);
    McConfig cfg;
    cfg.trials = 200000;
    cfg.seed = 43;
    const std::vector<double> grid = {0.0, 10.0};
    const auto mc = empirical_max_sir_coverage(trio, grid, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(max_sir_coverage(trio, db_to_linear(grid[i])) -
                     mc.unconditional.values[i]) <= 0.015);
    }
  }

  TEST_CASE("combining and helpers") {
    const std::vector<double> a = {0.2};
    const std::vector<double> b = {0.2, 0.5};
    const std::vector<double> none;
    CHECK(combine_orbit_coverages(none) == 0.0);
    CHECK(combine_orbit_coverages(a) == doctest::Approx(0.2));
    CHECK(combine_orbit_coverages(b) == doctest::Approx(0.6));

    for (auto kind : {CurveKind::kSirAnalytic, CurveKind::kSnrAnalytic, CurveKind::kMaxSirAnalytic,
                      CurveKind::kSirMc, CurveKind::kSnrMc, CurveKind::kSinrMc,
                      CurveKind::kMaxSirMc, CurveKind::kMaxSirAnyOrbitMc}) {
      CHECK(curve_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(curve_kind_from_string("SIR"), std::invalid_argument);
    CHECK(is_monte_carlo(CurveKind::kSinrMc));
    CHECK_FALSE(is_monte_carlo(CurveKind::kSirAnalytic));
    CoverageCurve curve;
    curve.kind = CurveKind::kSirMc;
    curve.conditional = true;
    CHECK(curve_label(curve) == "SIR-MC-conditional");

    const auto grid = threshold_grid_db(-10, 30, 1);
    CHECK(grid.size() == 41);
    CHECK(grid.front() == -10.0);
    CHECK(grid.back() == 30.0);
    CHECK(grid[13] == 3.0);
    CHECK(threshold_grid_db(0, 1, 0.3).size() == 4);
    CHECK_THROWS(threshold_grid_db(0, 1, 0.0));
  }
}

#include "leocov/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "leocov/coverage.hpp"
#include "leocov/geometry.hpp"
#include "leocov/interference.hpp"
#include "leocov/link_distance.hpp"
#include "leocov/montecarlo.hpp"
#include "leocov/scenario.hpp"

namespace leocov {

bool CriterionResult::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

bool ValidationReport::passed() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.passed(); });
}

namespace {

// Shared parameter set: R_E 6371 km, 500 km shell, 10 deg elevation mask,
// lambda 0.005 per km, alpha 2, Rayleigh fading.
constexpr double kEarthRadius = 6371.0;
constexpr double kAltitude = 500.0;
constexpr double kOmegaDeg = 10.0;
constexpr double kLambda = 0.005;

// Tolerances and trial counts.
constexpr double kArcLengthTolM = 100.0;
constexpr double kSpeedTol = 0.5;
constexpr double kVisibleTimeTol = 0.01;
constexpr int kArcPairs = 20;
constexpr std::uint64_t kArcOraclePoints = 10'000'000;
constexpr double kArcRelTol = 5e-4;  // three significant digits
constexpr double kBandFraction = 0.9;
constexpr std::uint64_t kCcdfTrials = 1'000'000;
constexpr int kCcdfGridPoints = 400;
constexpr double kCcdfTol = 0.004;
constexpr std::uint64_t kLaplaceTrials = 1'000'000;
constexpr double kLaplaceTol = 0.005;
constexpr double kFirstDerivTol = 1e-4;
constexpr double kThirdDerivTol = 1e-3;
constexpr std::uint64_t kCoverageTrials = 100'000;
constexpr double kCoverageTol = 0.015;
constexpr double kClosedFormTol = 1e-12;

const QuadratureSpec kFineQuad{1e-14, 1e-300, 2000};

class Recorder {
 public:
  Recorder(int id, std::string title) {
    result_.id = id;
    result_.title = std::move(title);
  }

  void at_most(std::string name, double observed, double limit,
               std::string detail = {}) {
    add(std::move(name), observed, "<=", limit, observed <= limit,
        std::move(detail));
  }
  void at_least(std::string name, double observed, double limit,
                std::string detail = {}) {
    add(std::move(name), observed, ">=", limit, observed >= limit,
        std::move(detail));
  }

  CriterionResult take() { return std::move(result_); }

 private:
  void add(std::string name, double observed, const char* rel, double limit,
           bool ok, std::string detail) {
    result_.checks.push_back({std::move(name), observed, rel, limit,
                              ok && std::isfinite(observed), std::move(detail)});
  }
  CriterionResult result_;
};

McConfig mc(const ValidationOptions& o, std::uint64_t trials,
            std::uint64_t stream) {
  McConfig cfg;
  cfg.trials = trials;
  cfg.seed = splitmix64(o.seed ^ splitmix64(stream));
  cfg.threads = o.threads;
  return cfg;
}

VisibilityWindow shell_window(double altitude = kAltitude,
                              double omega_deg = kOmegaDeg) {
  return VisibilityWindow(kEarthRadius, altitude, deg_to_rad(omega_deg));
}

OrbitGeometry shell_orbit(double theta, double phi = 0.0,
                          double altitude = kAltitude) {
  return OrbitGeometry(kEarthRadius, altitude, theta, phi);
}

std::string fmt(double x) { return format_double(x); }

struct Deviation {
  double value = 0.0;
  double gamma_db = 0.0;
};

Deviation max_deviation(const CoverageCurve& a, const CoverageCurve& b) {
  Deviation d;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double dev = std::abs(a.values[i] - b.values[i]);
    if (dev > d.value || i == 0) d = {dev, a.thresholds_db[i]};
  }
  return d;
}

// min_i (upper[i] - lower[i]); negative means the ordering is violated.
Deviation min_margin(const std::vector<double>& upper,
                     const std::vector<double>& lower,
                     const std::vector<double>& grid) {
  Deviation d{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < upper.size(); ++i) {
    const double margin = upper[i] - lower[i];
    if (margin < d.value) d = {margin, grid[i]};
  }
  return d;
}

// Grid points where upper < lower, e.g. "violated at 20,25"; empty if none.
std::string violations(const std::vector<double>& upper,
                       const std::vector<double>& lower,
                       const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (upper[i] < lower[i]) out += (out.empty() ? "" : ",") + format_double(grid[i]);
  }
  return out.empty() ? out : " violated at " + out;
}

std::vector<double> acceptance_grid() { return threshold_grid_db(-10.0, 30.0, 5.0); }

// ---------------------------------------------------------------------------

CriterionResult geometry_ground_truth(const ValidationOptions&) {
  Recorder rec(1, "geometry ground truth at the 500 km shell");
  const auto window = shell_window();
  const auto orbit = shell_orbit(kPi / 2);
  const EarthConstants earth;
  rec.at_most("arc length [m] vs 3.3714e6",
              std::abs(visible_arc_length(orbit, window) * 1e3 - 3.3714e6),
              kArcLengthTolM);
  rec.at_most("orbital speed [m/s] vs 7.6165e3",
              std::abs(orbital_speed(orbit, earth) - 7.6165e3), kSpeedTol);
  rec.at_most("visible time [s] vs 442.6396",
              std::abs(visible_time(orbit, window, earth) - 442.6396),
              kVisibleTimeTol);
  return rec.take();
}

// Brute-force arc length: rotate equispaced points of the equatorial circle
// onto the orbit plane (Rodrigues) and count those above the elevation mask.
double brute_force_arc(double radius, double theta, double phi,
                       double omega_min, std::uint64_t points) {
  // Rotation axis: z x normal, normalised; angle theta.
  const double kx = -std::sin(phi);
  const double ky = std::cos(phi);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  auto rotate = [&](const std::array<double, 3>& x) {
    const double kdotx = kx * x[0] + ky * x[1];
    const std::array<double, 3> kxx = {ky * x[2], -kx * x[2],
                                       kx * x[1] - ky * x[0]};
    std::array<double, 3> out{};
    const double k[3] = {kx, ky, 0.0};
    for (int i = 0; i < 3; ++i) {
      out[i] = x[i] * ct + kxx[i] * st + k[i] * kdotx * (1.0 - ct);
    }
    return out;
  };
  const auto a = rotate({1.0, 0.0, 0.0});
  const auto b = rotate({0.0, 1.0, 0.0});
  const double step = 2.0 * kPi / static_cast<double>(points);
  const double cd = std::cos(step);
  const double sd = std::sin(step);
  std::uint64_t visible = 0;
  double c = 1.0, s = 0.0;
  for (std::uint64_t i = 0; i < points; ++i) {
    if (i % 4096 == 0) {
      c = std::cos(step * static_cast<double>(i));
      s = std::sin(step * static_cast<double>(i));
    }
    const double z = radius * (c * a[2] + s * b[2]);
    if (z > kEarthRadius) {
      const double x = radius * (c * a[0] + s * b[0]);
      const double y = radius * (c * a[1] + s * b[1]);
      if (std::atan2(z - kEarthRadius, std::hypot(x, y)) >= omega_min) {
        ++visible;
      }
    }
    const double cn = c * cd - s * sd;
    s = s * cd + c * sd;
    c = cn;
  }
  return static_cast<double>(visible) * 2.0 * kPi * radius /
         static_cast<double>(points);
}

CriterionResult arc_length_brute_force(const ValidationOptions& o) {
  Recorder rec(2, "visible arc length vs circle-sampling oracle");
  RandomSource rng(splitmix64(o.seed ^ 0x2));
  for (int k = 0; k < kArcPairs; ++k) {
    const double omega = deg_to_rad(40.0 * rng.uniform());
    const auto window = shell_window(kAltitude, rad_to_deg(omega));
    const double half_band = std::acos(window.cap_base() / window.orbit_radius());
    const double theta =
        kPi / 2 + (2.0 * rng.uniform() - 1.0) * kBandFraction * half_band;
    const double phi = 2.0 * kPi * rng.uniform();
    const double analytic = visible_arc_length(shell_orbit(theta, phi), window);
    const double oracle = brute_force_arc(window.orbit_radius(), theta, phi,
                                          omega, kArcOraclePoints);
    rec.at_most("pair " + std::to_string(k) + " relative error",
                std::abs(analytic - oracle) / oracle, kArcRelTol,
                "theta_deg=" + fmt(rad_to_deg(theta)) +
                    " omega_deg=" + fmt(rad_to_deg(omega)) +
                    " L_km=" + fmt(analytic));
  }
  return rec.take();
}

CriterionResult nearest_distance_vs_mc(const ValidationOptions& o) {
  Recorder rec(3, "nearest-distance CCDF vs Monte Carlo");
  const auto window = shell_window();
  std::uint64_t stream = 300;
  for (double dtheta : {0.0, kPi / 36, -kPi / 36, kPi / 18, -kPi / 18}) {
    for (double lambda : {0.01, 0.001, 0.0001}) {
      const auto orbit = shell_orbit(kPi / 2 + dtheta);
      const NearestDistanceLaw law(orbit, window, lambda);
      std::vector<double> grid;
      for (int i = 0; i < kCcdfGridPoints; ++i) {
        grid.push_back(law.d_min() + (law.d_max() - law.d_min()) * (i + 0.5) /
                                         kCcdfGridPoints);
      }
      const auto emp = empirical_nearest_ccdf(orbit, window, lambda, grid,
                                              mc(o, kCcdfTrials, ++stream));
      double sup = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        sup = std::max(sup, std::abs(law.ccdf(grid[i]) - emp.values[i]));
      }
      rec.at_most("theta_deg=" + fmt(rad_to_deg(orbit.theta())) +
                      " lambda=" + fmt(lambda) + " sup-norm",
                  sup, kCcdfTol,
                  "conditioned_trials=" + std::to_string(emp.conditioned_trials));
    }
  }
  return rec.take();
}

CriterionResult laplace_vs_pgfl(const ValidationOptions& o) {
  Recorder rec(4, "interference Laplace transform vs PGFL oracle");
  const auto window = shell_window();
  const auto orbit = shell_orbit(kPi / 2);
  ChannelParams ch;
  const double r_min = d_min(orbit);
  const double r_mid = 0.5 * (r_min + window.d_max());
  const std::array<double, 2> radii = {r_min, r_mid};
  // The first three points are the literal ones; the rest sit where s I is
  // of order one so the comparison is not trivially 1 vs 1.
  const std::array<double, 6> s_values = {0.1, 1.0, 10.0, 1e5, 1e6, 1e7};
  const auto emp = empirical_laplace(orbit, window, kLambda, ch, radii, s_values,
                                     mc(o, kLaplaceTrials, 400));
  for (std::size_t a = 0; a < radii.size(); ++a) {
    for (std::size_t b = 0; b < s_values.size(); ++b) {
      const double analytic =
          std::exp(log_laplace(orbit, window, kLambda, ch, radii[a], s_values[b]));
      rec.at_most(std::string(a == 0 ? "r=d_min" : "r=midpoint") +
                      " s=" + fmt(s_values[b]),
                  std::abs(analytic - emp[a][b]), kLaplaceTol,
                  "analytic=" + fmt(analytic) + " mc=" + fmt(emp[a][b]));
    }
  }

  // Derivatives against finite differences at the natural scale s = m r^alpha.
  auto laplace = [&](const ChannelParams& c, double s) {
    return std::exp(log_laplace(orbit, window, kLambda, c, r_mid, s, kFineQuad));
  };
  {
    ChannelParams c2;
    c2.m = 2;
    const double s = c2.m * r_mid * r_mid;
    const double h = 1e-6 * s;
    const double fd = (laplace(c2, s + h) - laplace(c2, s - h)) / (2 * h);
    const double exact =
        laplace_derivatives(orbit, window, kLambda, c2, r_mid, s, 1, kFineQuad)[1];
    rec.at_most("order-1 derivative, m=2, relative error",
                std::abs(exact - fd) / std::abs(exact), kFirstDerivTol,
                "s=" + fmt(s));
  }
  {
    ChannelParams c4;
    c4.m = 4;
    const double s = c4.m * r_mid * r_mid;
    const double h = 1e-3 * s;
    const double fd = (laplace(c4, s + 2 * h) - 2 * laplace(c4, s + h) +
                       2 * laplace(c4, s - h) - laplace(c4, s - 2 * h)) /
                      (2 * h * h * h);
    const double exact =
        laplace_derivatives(orbit, window, kLambda, c4, r_mid, s, 3, kFineQuad)[3];
    rec.at_most("order-3 derivative, m=4, relative error",
                std::abs(exact - fd) / std::abs(exact), kThirdDerivTol,
                "s=" + fmt(s));
  }
  return rec.take();
}

CriterionResult sir_vs_mc(const ValidationOptions& o) {
  Recorder rec(5, "single-orbit SIR coverage vs Monte Carlo");
  const auto window = shell_window();
  const auto orbit = shell_orbit(kPi / 2);
  const auto grid = acceptance_grid();
  const std::array<std::pair<double, double>, 5> cases = {
      {{2, 1}, {3, 1}, {4, 1}, {2, 2}, {2, 3}}};
  std::uint64_t stream = 500;
  for (const auto& [alpha, m] : cases) {
    ChannelParams ch;
    ch.alpha = alpha;
    ch.m = m;
    const auto analytic = sir_curve(orbit, window, kLambda, ch, grid, true);
    const auto emp = empirical_sir_coverage(orbit, window, kLambda, ch, grid,
                                            mc(o, kCoverageTrials, ++stream));
    const auto dev = max_deviation(analytic, emp.conditional);
    rec.at_most("alpha=" + fmt(alpha) + " m=" + fmt(m) + " max |analytic-MC|",
                dev.value, kCoverageTol, "worst gamma_db=" + fmt(dev.gamma_db));
  }
  return rec.take();
}

CriterionResult snr_vs_mc(const ValidationOptions& o) {
  Recorder rec(6, "single-orbit SNR coverage vs Monte Carlo, SIR/SINR ordering");
  const auto window = shell_window();
  const auto orbit = shell_orbit(kPi / 2);
  const auto grid = acceptance_grid();
  const ChannelParams ch;
  std::vector<std::vector<double>> gaps;
  for (double bw : {10e6, 100e6, 1000e6}) {
    const LinkBudget budget{40.0, 30.0, -174.0, 11.0, bw};
    const auto analytic = snr_curve(orbit, window, kLambda, ch, budget, grid, true);
    // Same stream for every bandwidth: the draws coincide, so the orderings
    // across bandwidths hold trial by trial.
    const auto emp = empirical_snr_sinr_coverage(orbit, window, kLambda, ch,
                                                 budget, grid,
                                                 mc(o, kCoverageTrials, 600));
    const std::string tag = "BW=" + fmt(bw / 1e6) + "MHz";
    const auto dev = max_deviation(analytic, emp.snr.conditional);
    rec.at_most(tag + " SNR max |analytic-MC|", dev.value, kCoverageTol,
                "worst gamma_db=" + fmt(dev.gamma_db));
    const auto& sir = emp.sir.conditional.values;
    const auto& sinr = emp.sinr.conditional.values;
    const auto& snr = emp.snr.conditional.values;
    const auto m1 = min_margin(sir, sinr, grid);
    rec.at_least(tag + " SIR - SINR (min over grid)", m1.value, 0.0,
                 "at gamma_db=" + fmt(m1.gamma_db));
    const auto m2 = min_margin(snr, sinr, grid);
    rec.at_least(tag + " SNR - SINR (min over grid)", m2.value, 0.0,
                 "at gamma_db=" + fmt(m2.gamma_db));
    std::vector<double> gap(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) gap[i] = sir[i] - sinr[i];
    gaps.push_back(std::move(gap));
  }
  const auto g1 = min_margin(gaps[1], gaps[0], grid);
  rec.at_least("SIR-SINR gap 100MHz - 10MHz (min over grid)", g1.value, 0.0,
               "at gamma_db=" + fmt(g1.gamma_db));
  const auto g2 = min_margin(gaps[2], gaps[1], grid);
  rec.at_least("SIR-SINR gap 1000MHz - 100MHz (min over grid)", g2.value, 0.0,
               "at gamma_db=" + fmt(g2.gamma_db));
  return rec.take();
}

ConstellationSpec zenith_constellation(int count, double theta = kPi / 2,
                                       double phi_spread = kPi) {
  ConstellationSpec spec{{}, shell_window(), ChannelParams{}};
  for (int k = 0; k < count; ++k) {
    spec.orbits.push_back({shell_orbit(theta, phi_spread * k / count), kLambda});
  }
  return spec;
}

CriterionResult multi_orbit(const ValidationOptions& o) {
  Recorder rec(7, "multi-orbit max-SIR coverage");
  const auto grid = acceptance_grid();
  {
    const auto spec = zenith_constellation(1);
    const auto& first = spec.orbits[0];
    for (bool conditional : {false, true}) {
      const auto single = sir_curve(first.orbit, spec.window, first.lambda,
                                    spec.channel, grid, conditional);
      const auto multi = max_sir_curve(spec, grid, conditional);
      const auto dev = max_deviation(single, multi);
      rec.at_most(std::string("N=1 equals single-orbit SIR") +
                      (conditional ? " (conditional)" : ""),
                  dev.value, kClosedFormTol);
    }
  }
  std::vector<std::vector<double>> by_n;
  by_n.push_back(max_sir_curve(zenith_constellation(1), grid, true).values);
  for (int n = 2; n <= 4; ++n) {
    const auto spec = zenith_constellation(n);
    const auto analytic = max_sir_curve(spec, grid, true);
    const auto emp = empirical_max_sir_coverage(
        spec, grid, mc(o, kCoverageTrials, 700 + static_cast<std::uint64_t>(n)));
    const auto dev = max_deviation(analytic, emp.conditional);
    rec.at_most("N=" + std::to_string(n) + " conditional max |analytic-MC|",
                dev.value, kCoverageTol, "worst gamma_db=" + fmt(dev.gamma_db));
    by_n.push_back(analytic.values);
  }
  for (std::size_t n = 1; n < by_n.size(); ++n) {
    const auto m = min_margin(by_n[n], by_n[n - 1], grid);
    rec.at_least("conditional N=" + std::to_string(n + 1) + " - N=" +
                     std::to_string(n) + " (min over grid)",
                 m.value, 0.0, "at gamma_db=" + fmt(m.gamma_db));
  }

  // Three orbits tilted by 10 degrees against one zenith orbit at 10 dB.
  const std::array<double, 1> ten_db = {10.0};
  const auto tilted = zenith_constellation(3, kPi / 2 + kPi / 18, 2 * kPi);
  const auto zenith = zenith_constellation(1);
  const double a3 = max_sir_curve(tilted, ten_db, false).values[0];
  const double a1 = max_sir_curve(zenith, ten_db, false).values[0];
  rec.at_least("analytic: 3 tilted orbits - 1 zenith orbit at 10 dB", a3 - a1,
               0.0, "N3=" + fmt(a3) + " N1=" + fmt(a1));
  const double m3 =
      empirical_max_sir_coverage(tilted, ten_db, mc(o, kCoverageTrials, 710))
          .unconditional.values[0];
  const auto& z = zenith.orbits[0];
  const double m1 = empirical_sir_coverage(z.orbit, zenith.window, z.lambda,
                                           zenith.channel, ten_db,
                                           mc(o, kCoverageTrials, 711))
                        .unconditional.values[0];
  rec.at_least("MC: 3 tilted orbits - 1 zenith orbit at 10 dB", m3 - m1, 0.0,
               "N3=" + fmt(m3) + " N1=" + fmt(m1));
  return rec.take();
}

CriterionResult parameter_trends(const ValidationOptions&) {
  Recorder rec(8, "parameter-trend orderings on the analytic engine");

  // Arc length against elevation mask and polar angle.
  {
    std::vector<double> thetas;
    for (int d = 0; d <= 180; ++d) thetas.push_back(d);
    std::vector<std::vector<double>> arcs;
    for (double omega : {10.0, 20.0, 30.0}) {
      const auto window = shell_window(kAltitude, omega);
      std::vector<double> row;
      for (double t : thetas) {
        row.push_back(visible_arc_length(shell_orbit(deg_to_rad(t)), window));
      }
      const auto peak = std::max_element(row.begin(), row.end());
      rec.at_least("arc length peaks at theta=90 deg, omega=" + fmt(omega),
                   row[90] - *peak, 0.0);
      arcs.push_back(std::move(row));
    }
    for (std::size_t k = 1; k < arcs.size(); ++k) {
      const auto m = min_margin(arcs[k - 1], arcs[k], thetas);
      rec.at_least("arc length omega=" + fmt(10.0 * k) + " - omega=" +
                       fmt(10.0 * (k + 1)) + " (min over theta)",
                   m.value, 0.0, "at theta_deg=" + fmt(m.gamma_db));
    }
  }

  // Nearest-distance CCDF: denser and less tilted orbits are stochastically
  // closer.
  {
    const auto window = shell_window();
    constexpr int kPoints = 2000;
    auto min_gap = [&](const NearestDistanceLaw& upper,
                       const NearestDistanceLaw& lower, double r0) {
      Deviation d{std::numeric_limits<double>::infinity(), 0.0};
      for (int i = 1; i <= kPoints; ++i) {
        const double r = r0 + (window.d_max() - r0) * i / kPoints;
        const double gap = upper.ccdf(r) - lower.ccdf(r);
        if (gap < d.value) d = {gap, r};
      }
      return d;
    };
    for (double dtheta : {0.0, kPi / 18}) {
      const auto orbit = shell_orbit(kPi / 2 + dtheta);
      const NearestDistanceLaw l2(orbit, window, 0.01), l3(orbit, window, 0.001),
          l4(orbit, window, 0.0001);
      const auto a = min_gap(l3, l2, l2.d_min());
      const auto b = min_gap(l4, l3, l3.d_min());
      rec.at_least("ccdf lambda=0.001 - lambda=0.01, theta_deg=" +
                       fmt(rad_to_deg(orbit.theta())),
                   std::min(a.value, b.value), 0.0,
                   "including lambda=0.0001 - lambda=0.001");
    }
    for (double lambda : {0.01, 0.001, 0.0001}) {
      const NearestDistanceLaw zen(shell_orbit(kPi / 2), window, lambda);
      for (double dtheta : {kPi / 18, -kPi / 18}) {
        const NearestDistanceLaw tilt(shell_orbit(kPi / 2 + dtheta), window,
                                      lambda);
        const auto g = min_gap(tilt, zen, tilt.d_min());
        rec.at_least("ccdf theta_deg=" + fmt(rad_to_deg(kPi / 2 + dtheta)) +
                         " - theta_deg=90, lambda=" + fmt(lambda),
                     g.value, 0.0, "at r_km=" + fmt(g.gamma_db));
      }
    }
  }

  const auto window = shell_window();
  const auto zenith = shell_orbit(kPi / 2);
  const std::array<double, 1> ten_db = {10.0};

  // Path-loss exponent at 10 dB.
  {
    std::vector<double> values;
    for (double alpha : {2.0, 3.0, 4.0}) {
      ChannelParams ch;
      ch.alpha = alpha;
      values.push_back(sir_curve(zenith, window, kLambda, ch, ten_db, false).values[0]);
    }
    rec.at_least("10 dB: alpha=3 - alpha=2", values[1] - values[0], 0.0);
    rec.at_least("10 dB: alpha=4 - alpha=3", values[2] - values[1], 0.0);
  }

  // Density at 10 dB.
  {
    const ChannelParams ch;
    const double sparse = sir_curve(zenith, window, 0.001, ch, ten_db, false).values[0];
    const double dense = sir_curve(zenith, window, 0.01, ch, ten_db, false).values[0];
    rec.at_least("10 dB: lambda=0.001 - lambda=0.01", sparse - dense, 0.0,
                 "sparse=" + fmt(sparse) + " dense=" + fmt(dense));
  }

  const auto grid = acceptance_grid();
  const ChannelParams ch;

  // Altitude, pointwise on the grid.
  {
    std::vector<std::vector<double>> curves;
    for (double h : {500.0, 1000.0, 1500.0}) {
      curves.push_back(sir_curve(shell_orbit(kPi / 2, 0.0, h),
                                 shell_window(h), kLambda, ch, grid, false)
                           .values);
    }
    for (std::size_t k = 1; k < curves.size(); ++k) {
      const auto m = min_margin(curves[k - 1], curves[k], grid);
      rec.at_least("altitude " + fmt(500.0 * k) + " km - " +
                       fmt(500.0 * (k + 1)) + " km (min over grid)",
                   m.value, 0.0,
                   "at gamma_db=" + fmt(m.gamma_db) +
                       violations(curves[k - 1], curves[k], grid));
    }
  }

  // Polar angle, pointwise on the grid.
  {
    const auto best = sir_curve(zenith, window, kLambda, ch, grid, false).values;
    for (double dtheta : {kPi / 18, -kPi / 18}) {
      const auto tilted = sir_curve(shell_orbit(kPi / 2 + dtheta), window,
                                    kLambda, ch, grid, false)
                              .values;
      const auto m = min_margin(best, tilted, grid);
      rec.at_least("theta_deg=90 - theta_deg=" +
                       fmt(rad_to_deg(kPi / 2 + dtheta)) + " (min over grid)",
                   m.value, 0.0,
                   "at gamma_db=" + fmt(m.gamma_db) +
                       violations(best, tilted, grid));
    }
  }
  return rec.take();
}

}  // namespace

CriterionResult run_criterion(int id, const ValidationOptions& options) {
  switch (id) {
    case 1: return geometry_ground_truth(options);
    case 2: return arc_length_brute_force(options);
    case 3: return nearest_distance_vs_mc(options);
    case 4: return laplace_vs_pgfl(options);
    case 5: return sir_vs_mc(options);
    case 6: return snr_vs_mc(options);
    case 7: return multi_orbit(options);
    case 8: return parameter_trends(options);
    default:
      throw std::invalid_argument("no criterion " + std::to_string(id));
  }
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json root;
  root["seed"] = seed;
  root["passed"] = passed();
  root["criteria"] = nlohmann::ordered_json::array();
  for (const auto& c : criteria) {
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["title"] = c.title;
    entry["passed"] = c.passed();
    entry["checks"] = nlohmann::ordered_json::array();
    for (const auto& k : c.checks) {
      nlohmann::ordered_json check;
      check["name"] = k.name;
      check["observed"] = k.observed;
      check["relation"] = k.relation;
      check["limit"] = k.limit;
      check["passed"] = k.passed;
      if (!k.detail.empty()) check["detail"] = k.detail;
      entry["checks"].push_back(std::move(check));
    }
    root["criteria"].push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

ValidationReport run_validation(const ValidationOptions& options,
                                std::span<const int> ids,
                                const CriterionTimer& on_done) {
  std::vector<int> selected(ids.begin(), ids.end());
  if (selected.empty()) {
    for (int id = kFirstCriterion; id <= kLastCriterion; ++id) {
      selected.push_back(id);
    }
  }
  ValidationReport report;
  report.seed = options.seed;
  for (int id : selected) {
    if (options.log) *options.log << "criterion " << id << " ..." << std::endl;
    const auto start = std::chrono::steady_clock::now();
    auto result = run_criterion(id, options);
    const std::chrono::duration<double> took =
        std::chrono::steady_clock::now() - start;
    if (on_done) on_done(result, took.count());
    report.criteria.push_back(std::move(result));
  }
  return report;
}

int cmd_validate(const ValidationOptions& options,
                 const std::filesystem::path& out_dir,
                 std::span<const int> ids) {
  const auto report = run_validation(
      options, ids, [&](const CriterionResult& c, double seconds) {
        if (!options.log) return;
        *options.log << (c.passed() ? "PASS" : "FAIL") << " criterion " << c.id
                     << ": " << c.title << " (" << seconds << " s)\n";
        for (const auto& k : c.checks) {
          if (!k.passed) {
            *options.log << "  failed: " << k.name << " observed " << k.observed
                         << ' ' << k.relation << ' ' << k.limit << ' '
                         << k.detail << '\n';
          }
        }
      });
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / "validation_report.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << report.to_json();
  return report.passed() ? 0 : 1;
}

}  // namespace leocov

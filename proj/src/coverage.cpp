#include "leocov/coverage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "leocov/link_distance.hpp"

namespace leocov {

void ConstellationSpec::validate() const {
  if (orbits.empty()) {
    throw std::invalid_argument("constellation needs at least one orbit");
  }
  channel.validate();
  for (std::size_t n = 0; n < orbits.size(); ++n) {
    const auto& o = orbits[n];
    if (!(o.lambda > 0.0)) {
      throw std::invalid_argument("orbit " + std::to_string(n) +
                                  ": density must be positive");
    }
    if (std::abs(o.orbit.radius() - window.orbit_radius()) >
        1e-9 * window.orbit_radius()) {
      throw std::invalid_argument("orbit " + std::to_string(n) +
                                  ": all orbits must share one altitude");
    }
  }
}

void LinkBudget::validate() const {
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  if (!std::isfinite(p_dbm) || !std::isfinite(g_serve_dbi) ||
      !std::isfinite(noise_density_dbm_hz) || !std::isfinite(noise_figure_db)) {
    throw std::invalid_argument("link budget entries must be finite");
  }
}

double LinkBudget::noise_power_mw() const {
  return db_to_linear(noise_density_dbm_hz + noise_figure_db +
                      10.0 * std::log10(bandwidth_hz));
}

double LinkBudget::noise_to_signal() const {
  return noise_power_mw() / (db_to_linear(p_dbm) * db_to_linear(g_serve_dbi));
}

namespace {

constexpr std::array<std::pair<CurveKind, std::string_view>, 8> kKindNames = {{
    {CurveKind::kSirAnalytic, "SIR-analytic"},
    {CurveKind::kSnrAnalytic, "SNR-analytic"},
    {CurveKind::kMaxSirAnalytic, "maxSIR-analytic"},
    {CurveKind::kSirMc, "SIR-MC"},
    {CurveKind::kSnrMc, "SNR-MC"},
    {CurveKind::kSinrMc, "SINR-MC"},
    {CurveKind::kMaxSirMc, "maxSIR-MC"},
    {CurveKind::kMaxSirAnyOrbitMc, "maxSIR-anyorbit-MC"},
}};

constexpr std::string_view kConditionalSuffix = "-conditional";

double check_gamma(double gamma_linear) {
  if (!(gamma_linear > 0.0)) {
    throw std::invalid_argument("coverage threshold must be > 0 (linear)");
  }
  return gamma_linear;
}

}  // namespace

std::string_view to_string(CurveKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

CurveKind curve_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown curve kind '" + std::string(name) + "'");
}

bool is_monte_carlo(CurveKind kind) {
  switch (kind) {
    case CurveKind::kSirMc:
    case CurveKind::kSnrMc:
    case CurveKind::kSinrMc:
    case CurveKind::kMaxSirMc:
    case CurveKind::kMaxSirAnyOrbitMc:
      return true;
    default:
      return false;
  }
}

std::string curve_label(const CoverageCurve& curve) {
  std::string label(to_string(curve.kind));
  if (curve.conditional) label += kConditionalSuffix;
  return label;
}

double sir_coverage_conditional(const OrbitGeometry& orbit,
                                const VisibilityWindow& window, double lambda,
                                const ChannelParams& channel,
                                double gamma_linear,
                                const QuadratureSpec& quad) {
  check_gamma(gamma_linear);
  channel.validate();
  const int m = channel.integer_shape();
  const NearestDistanceLaw law(orbit, window, lambda);
  const double arc = law.visible_arc();

  std::vector<double> inv_factorial(static_cast<std::size_t>(m), 1.0);
  for (int k = 1; k < m; ++k) inv_factorial[k] = inv_factorial[k - 1] / k;

  // E over the nearest distance of sum_k (-s)^k L^(k)(s) / k!, s = m gamma r^a.
  auto integrand = [&](double t) {
    const double r = arc_to_distance(orbit, t);
    const double s = m * gamma_linear * std::pow(r, channel.alpha);
    const auto scaled = scaled_laplace_derivatives_from_arc(
        orbit, arc, lambda, channel, t, s, s, m - 1, quad);
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 0; k < m; ++k) {
      sum += sign * scaled[k] * inv_factorial[k];
      sign = -sign;
    }
    return sum * law.arc_pdf(t);
  };
  return std::clamp(integrate(integrand, 0.0, arc, quad), 0.0, 1.0);
}

double sir_coverage(const OrbitGeometry& orbit, const VisibilityWindow& window,
                    double lambda, const ChannelParams& channel,
                    double gamma_linear, const QuadratureSpec& quad) {
  check_gamma(gamma_linear);
  if (!(lambda > 0.0) || visible_arc_length(orbit, window) == 0.0) return 0.0;
  const double visible = visibility_probability(
      std::span<const double>(&lambda, 1),
      std::span<const OrbitGeometry>(&orbit, 1), window);
  return sir_coverage_conditional(orbit, window, lambda, channel, gamma_linear,
                                  quad) *
         visible;
}

double snr_coverage_conditional(const OrbitGeometry& orbit,
                                const VisibilityWindow& window, double lambda,
                                const ChannelParams& channel,
                                const LinkBudget& budget, double gamma_linear,
                                const QuadratureSpec& quad) {
  check_gamma(gamma_linear);
  channel.validate();
  budget.validate();
  const int m = channel.integer_shape();
  const NearestDistanceLaw law(orbit, window, lambda);
  const double kappa = budget.noise_to_signal();

  // Gamma(m, 1/m) power CCDF at x = kappa gamma r^alpha (r in meters).
  auto integrand = [&](double t) {
    const double r_m = arc_to_distance(orbit, t) * 1e3;
    const double x = m * kappa * gamma_linear * std::pow(r_m, channel.alpha);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < m; ++k) {
      term *= x / k;
      sum += term;
    }
    return std::exp(-x) * sum * law.arc_pdf(t);
  };
  return std::clamp(integrate(integrand, 0.0, law.visible_arc(), quad), 0.0,
                    1.0);
}

double snr_coverage(const OrbitGeometry& orbit, const VisibilityWindow& window,
                    double lambda, const ChannelParams& channel,
                    const LinkBudget& budget, double gamma_linear,
                    const QuadratureSpec& quad) {
  check_gamma(gamma_linear);
  if (!(lambda > 0.0) || visible_arc_length(orbit, window) == 0.0) return 0.0;
  const double visible = visibility_probability(
      std::span<const double>(&lambda, 1),
      std::span<const OrbitGeometry>(&orbit, 1), window);
  return snr_coverage_conditional(orbit, window, lambda, channel, budget,
                                  gamma_linear, quad) *
         visible;
}

double combine_orbit_coverages(std::span<const double> per_orbit) {
  double miss = 1.0;
  for (double p : per_orbit) miss *= 1.0 - p;
  return 1.0 - miss;
}

namespace {

void require_visible_orbits(const ConstellationSpec& spec) {
  spec.validate();
  for (std::size_t n = 0; n < spec.orbits.size(); ++n) {
    if (visible_arc_length(spec.orbits[n].orbit, spec.window) == 0.0) {
      throw std::invalid_argument("orbit " + std::to_string(n) +
                                  " has no visible arc");
    }
  }
}

}  // namespace

double max_sir_coverage_conditional(const ConstellationSpec& spec,
                                    double gamma_linear,
                                    const QuadratureSpec& quad) {
  require_visible_orbits(spec);
  std::vector<double> per_orbit;
  per_orbit.reserve(spec.orbits.size());
  for (const auto& o : spec.orbits) {
    per_orbit.push_back(sir_coverage_conditional(
        o.orbit, spec.window, o.lambda, spec.channel, gamma_linear, quad));
  }
  return combine_orbit_coverages(per_orbit);
}

double max_sir_coverage(const ConstellationSpec& spec, double gamma_linear,
                        const QuadratureSpec& quad) {
  const double conditional =
      max_sir_coverage_conditional(spec, gamma_linear, quad);
  double all_visible = 1.0;
  for (const auto& o : spec.orbits) {
    all_visible *=
        -std::expm1(-o.lambda * visible_arc_length(o.orbit, spec.window));
  }
  return conditional * all_visible;
}

std::vector<double> threshold_grid_db(double start_db, double stop_db,
                                      double step_db) {
  if (!(step_db > 0.0) || !(stop_db >= start_db) || !std::isfinite(start_db) ||
      !std::isfinite(stop_db)) {
    throw std::invalid_argument("threshold grid needs step > 0 and stop >= start");
  }
  std::vector<double> grid;
  const auto count =
      static_cast<std::size_t>(std::floor((stop_db - start_db) / step_db + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) {
    grid.push_back(start_db + static_cast<double>(i) * step_db);
  }
  return grid;
}

namespace {

template <typename F>
CoverageCurve evaluate_curve(CurveKind kind, bool conditional,
                             std::span<const double> thresholds_db, F&& point) {
  CoverageCurve curve;
  curve.kind = kind;
  curve.conditional = conditional;
  curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  curve.values.reserve(thresholds_db.size());
  for (double g : thresholds_db) curve.values.push_back(point(db_to_linear(g)));
  return curve;
}

}  // namespace

CoverageCurve sir_curve(const OrbitGeometry& orbit,
                        const VisibilityWindow& window, double lambda,
                        const ChannelParams& channel,
                        std::span<const double> thresholds_db,
                        bool conditional, const QuadratureSpec& quad) {
  return evaluate_curve(
      CurveKind::kSirAnalytic, conditional, thresholds_db, [&](double g) {
        return conditional ? sir_coverage_conditional(orbit, window, lambda,
                                                      channel, g, quad)
                           : sir_coverage(orbit, window, lambda, channel, g,
                                          quad);
      });
}

CoverageCurve snr_curve(const OrbitGeometry& orbit,
                        const VisibilityWindow& window, double lambda,
                        const ChannelParams& channel, const LinkBudget& budget,
                        std::span<const double> thresholds_db,
                        bool conditional, const QuadratureSpec& quad) {
  auto curve = evaluate_curve(
      CurveKind::kSnrAnalytic, conditional, thresholds_db, [&](double g) {
        return conditional
                   ? snr_coverage_conditional(orbit, window, lambda, channel,
                                              budget, g, quad)
                   : snr_coverage(orbit, window, lambda, channel, budget, g,
                                  quad);
      });
  curve.metadata["pathloss_distance_unit"] = "m";
  return curve;
}

CoverageCurve max_sir_curve(const ConstellationSpec& spec,
                            std::span<const double> thresholds_db,
                            bool conditional, const QuadratureSpec& quad) {
  return evaluate_curve(CurveKind::kMaxSirAnalytic, conditional, thresholds_db,
                        [&](double g) {
                          return conditional
                                     ? max_sir_coverage_conditional(spec, g, quad)
                                     : max_sir_coverage(spec, g, quad);
                        });
}

}  // namespace leocov

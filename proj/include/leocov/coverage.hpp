#ifndef LEOCOV_COVERAGE_HPP
#define LEOCOV_COVERAGE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leocov/geometry.hpp"
#include "leocov/interference.hpp"
#include "leocov/numerics.hpp"

namespace leocov {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// One orbit of the constellation together with its satellite density
/// (satellites per km of orbit).
struct OrbitDeployment {
  OrbitGeometry orbit;
  double lambda;
};

struct ConstellationSpec {
  std::vector<OrbitDeployment> orbits;
  VisibilityWindow window;
  ChannelParams channel;

  /// Throws std::invalid_argument unless there is at least one orbit, every
  /// density is positive and every orbit shares the window's shell.
  void validate() const;
};

/// Downlink budget for noise-limited coverage. Path-loss distances are taken
/// in meters when forming the SNR.
struct LinkBudget {
  double p_dbm = 40.0;
  double g_serve_dbi = 30.0;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 11.0;
  double bandwidth_hz = 10e6;

  void validate() const;
  /// Noise power sigma^2 in mW.
  double noise_power_mw() const;
  /// sigma^2 / (P G_serve); multiplies r^alpha with r in meters.
  double noise_to_signal() const;
};

enum class CurveKind {
  kSirAnalytic,
  kSnrAnalytic,
  kMaxSirAnalytic,
  kSirMc,
  kSnrMc,
  kSinrMc,
  kMaxSirMc,
  kMaxSirAnyOrbitMc,
};

std::string_view to_string(CurveKind kind);
/// Throws std::invalid_argument for unknown names.
CurveKind curve_kind_from_string(std::string_view name);
bool is_monte_carlo(CurveKind kind);

struct CoverageCurve {
  CurveKind kind = CurveKind::kSirAnalytic;
  /// True for curves conditioned on visible satellites.
  bool conditional = false;
  std::vector<double> thresholds_db;
  std::vector<double> values;
  /// Confidence bounds; filled for Monte-Carlo curves only.
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::map<std::string, std::string> metadata;
};

/// Label used in CSV output, e.g. "SIR-analytic" or "SIR-MC-conditional".
std::string curve_label(const CoverageCurve& curve);

/// P[SIR >= gamma | at least one visible satellite] for one orbit, integer m.
double sir_coverage_conditional(const OrbitGeometry& orbit,
                                const VisibilityWindow& window, double lambda,
                                const ChannelParams& channel,
                                double gamma_linear,
                                const QuadratureSpec& quad = {});

/// Conditional SIR coverage times the visibility probability.
double sir_coverage(const OrbitGeometry& orbit, const VisibilityWindow& window,
                    double lambda, const ChannelParams& channel,
                    double gamma_linear, const QuadratureSpec& quad = {});

double snr_coverage_conditional(const OrbitGeometry& orbit,
                                const VisibilityWindow& window, double lambda,
                                const ChannelParams& channel,
                                const LinkBudget& budget, double gamma_linear,
                                const QuadratureSpec& quad = {});

double snr_coverage(const OrbitGeometry& orbit, const VisibilityWindow& window,
                    double lambda, const ChannelParams& channel,
                    const LinkBudget& budget, double gamma_linear,
                    const QuadratureSpec& quad = {});

/// 1 - prod_n (1 - p_n).
double combine_orbit_coverages(std::span<const double> per_orbit);

/// Coverage with the orbit giving the largest SIR selected:
/// [1 - prod_n (1 - p_n)] * prod_n (1 - exp(-lambda_n L_n)).
/// Throws std::invalid_argument naming the first orbit with no visible arc.
double max_sir_coverage(const ConstellationSpec& spec, double gamma_linear,
                        const QuadratureSpec& quad = {});

/// Conditional part of max_sir_coverage (every orbit non-empty).
double max_sir_coverage_conditional(const ConstellationSpec& spec,
                                    double gamma_linear,
                                    const QuadratureSpec& quad = {});

/// Threshold grid start, start + step, ..., up to stop inclusive.
std::vector<double> threshold_grid_db(double start_db, double stop_db,
                                      double step_db);

/// Analytic curves over a dB grid. `conditional` selects the conditioned
/// variant.
CoverageCurve sir_curve(const OrbitGeometry& orbit,
                        const VisibilityWindow& window, double lambda,
                        const ChannelParams& channel,
                        std::span<const double> thresholds_db,
                        bool conditional, const QuadratureSpec& quad = {});

CoverageCurve snr_curve(const OrbitGeometry& orbit,
                        const VisibilityWindow& window, double lambda,
                        const ChannelParams& channel, const LinkBudget& budget,
                        std::span<const double> thresholds_db,
                        bool conditional, const QuadratureSpec& quad = {});

CoverageCurve max_sir_curve(const ConstellationSpec& spec,
                            std::span<const double> thresholds_db,
                            bool conditional, const QuadratureSpec& quad = {});

}  // namespace leocov

#endif  // LEOCOV_COVERAGE_HPP

#ifndef LEOCOV_MONTECARLO_HPP
#define LEOCOV_MONTECARLO_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "leocov/coverage.hpp"
#include "leocov/geometry.hpp"
#include "leocov/interference.hpp"
#include "leocov/numerics.hpp"

// Monte-Carlo constellation simulator. Each trial draws an independent
// Poisson number of satellites uniformly on every orbit circle in 3-D,
// applies Nakagami fading per satellite and evaluates the link metrics at
// u = (0, 0, R_E). Trials are grouped into fixed-size batches; batch b uses
// RandomSource(seed).derive(b), so results do not depend on thread count.

namespace leocov {

struct McConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::uint64_t batch = 10000;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

/// Fewer than the minimum number of trials met the conditioning event.
class DegenerateConditioning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioned estimates need at least this many surviving trials.
inline constexpr std::uint64_t kMinConditionedTrials = 100;

using Vec3 = std::array<double, 3>;

struct SatelliteSnapshot {
  std::vector<Vec3> positions;       // km, sorted by distance to the user
  std::vector<double> distances;     // km, ascending
  std::vector<std::uint8_t> visible; // elevation >= omega_min
};

/// Orthonormal basis of an orbit plane: the satellite at phase psi sits at
/// R (cos psi e1 + sin psi e2).
struct OrbitFrame {
  Vec3 normal;
  Vec3 e1;
  Vec3 e2;
};

OrbitFrame orbit_frame(const OrbitGeometry& orbit);

/// One PPP realisation of an orbit.
SatelliteSnapshot sample_orbit(const OrbitGeometry& orbit,
                               const VisibilityWindow& window, double lambda,
                               RandomSource& rng);

/// Elevation test for a satellite at `position` seen from the user.
bool above_min_elevation(const Vec3& position, const VisibilityWindow& window);

/// Cap test z > R_A.
bool inside_cap(const Vec3& position, const VisibilityWindow& window);

struct EmpiricalVisibility {
  double visible_fraction;       // P[at least one visible satellite]
  double mean_visible_count;
  double mean_total_count;
  std::uint64_t trials;
};

EmpiricalVisibility empirical_visibility(const OrbitGeometry& orbit,
                                         const VisibilityWindow& window,
                                         double lambda, const McConfig& cfg);

struct EmpiricalCcdf {
  std::vector<double> grid;
  std::vector<double> values;
  std::uint64_t conditioned_trials;
  std::uint64_t trials;
};

/// P[nearest visible distance > r | at least one visible] on a grid of r.
EmpiricalCcdf empirical_nearest_ccdf(const OrbitGeometry& orbit,
                                     const VisibilityWindow& window,
                                     double lambda, std::span<const double> grid,
                                     const McConfig& cfg);

/// E[exp(-s I)] where I sums g H u^-alpha over visible satellites farther
/// than r. result[i][j] corresponds to (radii[i], s_values[j]).
std::vector<std::vector<double>> empirical_laplace(
    const OrbitGeometry& orbit, const VisibilityWindow& window, double lambda,
    const ChannelParams& channel, std::span<const double> radii,
    std::span<const double> s_values, const McConfig& cfg);

struct McCoverage {
  CoverageCurve conditional;
  CoverageCurve unconditional;
  double conditioning_fraction;
  std::uint64_t conditioned_trials;
};

/// SIR coverage of one orbit with nearest-visible association. A trial with
/// a single visible satellite has no interference and counts as covered at
/// every finite threshold.
McCoverage empirical_sir_coverage(const OrbitGeometry& orbit,
                                  const VisibilityWindow& window,
                                  double lambda, const ChannelParams& channel,
                                  std::span<const double> thresholds_db,
                                  const McConfig& cfg);

struct McNoiseCoverage {
  McCoverage snr;
  McCoverage sinr;
  McCoverage sir;  // from the same draws, for ordering checks
};

/// SNR and SINR coverage with distances in meters.
McNoiseCoverage empirical_snr_sinr_coverage(
    const OrbitGeometry& orbit, const VisibilityWindow& window, double lambda,
    const ChannelParams& channel, const LinkBudget& budget,
    std::span<const double> thresholds_db, const McConfig& cfg);

struct McMaxSirCoverage {
  /// Conditioned on every orbit having a visible satellite.
  CoverageCurve conditional;
  /// P[max SIR >= gamma and every orbit visible].
  CoverageCurve unconditional;
  /// P[max SIR >= gamma] with invisible orbits contributing nothing. This is
  /// not the product form; it quantifies how much the conditioning matters.
  CoverageCurve any_orbit;
  double all_visible_fraction;
  std::uint64_t conditioned_trials;
};

McMaxSirCoverage empirical_max_sir_coverage(
    const ConstellationSpec& spec, std::span<const double> thresholds_db,
    const McConfig& cfg);

/// Wilson score interval for k successes out of n at ~95% confidence.
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t n, double z = 1.96);

}  // namespace leocov

#endif  // LEOCOV_MONTECARLO_HPP

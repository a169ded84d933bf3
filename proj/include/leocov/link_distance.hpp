#ifndef LEOCOV_LINK_DISTANCE_HPP
#define LEOCOV_LINK_DISTANCE_HPP

#include "leocov/geometry.hpp"
#include "leocov/numerics.hpp"

namespace leocov {

/// Distance from the user to the nearest satellite of one orbit, given at
/// least one satellite is visible on that orbit.
///
/// Satellites form a PPP of intensity lambda along the orbit. In the arc
/// coordinate t = distance_to_arc(r) the visible arc is [0, L] with uniform
/// intensity, so the nearest satellite's arc coordinate is exponential with
/// rate lambda truncated to [0, L]. All evaluations go through that
/// representation and map back with arc_to_distance.
class NearestDistanceLaw {
 public:
  /// Throws std::invalid_argument if lambda <= 0 or the orbit never enters
  /// the visibility cap.
  NearestDistanceLaw(const OrbitGeometry& orbit, const VisibilityWindow& window,
                     double lambda);

  const OrbitGeometry& orbit() const { return orbit_; }
  const VisibilityWindow& window() const { return window_; }
  double lambda() const { return lambda_; }
  double visible_arc() const { return arc_; }
  double d_min() const { return d_min_; }
  double d_max() const { return window_.d_max(); }

  /// P[D > r | visible]; 1 below d_min and 0 above d_max.
  double ccdf(double r) const;

  /// Density of D; throws std::out_of_range unless d_min < r < d_max.
  double pdf(double r) const;

  /// Density of the nearest satellite's arc coordinate on [0, L].
  double arc_pdf(double t) const;

  /// Inverse-CDF map of u in [0, 1) to a distance.
  double quantile(double u) const;

  double sample(RandomSource& rng) const;

 private:
  OrbitGeometry orbit_;
  VisibilityWindow window_;
  double lambda_;
  double arc_;
  double d_min_;
  double visible_mass_;  // 1 - exp(-lambda L)
};

}  // namespace leocov

#endif  // LEOCOV_LINK_DISTANCE_HPP

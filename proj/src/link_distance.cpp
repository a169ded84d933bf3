#include "leocov/link_distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leocov {

NearestDistanceLaw::NearestDistanceLaw(const OrbitGeometry& orbit,
                                       const VisibilityWindow& window,
                                       double lambda)
    : orbit_(orbit),
      window_(window),
      lambda_(lambda),
      arc_(visible_arc_length(orbit, window)),
      d_min_(leocov::d_min(orbit)),
      visible_mass_(-std::expm1(-lambda * arc_)) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("nearest-distance law needs lambda > 0");
  }
  if (!(arc_ > 0.0)) {
    throw std::invalid_argument(
        "nearest-distance law undefined: orbit has no visible arc");
  }
}

double NearestDistanceLaw::ccdf(double r) const {
  if (r <= d_min_) return 1.0;
  if (r >= d_max()) return 0.0;
  const double t = distance_to_arc(orbit_, r);
  // (e^{-lambda t} - e^{-lambda L}) / (1 - e^{-lambda L})
  const double value =
      (std::expm1(-lambda_ * t) - std::expm1(-lambda_ * arc_)) / visible_mass_;
  return std::clamp(value, 0.0, 1.0);
}

double NearestDistanceLaw::arc_pdf(double t) const {
  if (t < 0.0 || t > arc_) return 0.0;
  return lambda_ * std::exp(-lambda_ * t) / visible_mass_;
}

double NearestDistanceLaw::pdf(double r) const {
  if (!(r > d_min_ && r < d_max())) {
    throw std::out_of_range("nearest-distance pdf evaluated outside (d_min, d_max)");
  }
  const double t = distance_to_arc(orbit_, r);
  return arc_pdf(t) * distance_to_arc_derivative(orbit_, r);
}

double NearestDistanceLaw::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::out_of_range("quantile level must lie in [0, 1)");
  }
  const double t = truncated_exponential_quantile(lambda_, arc_, u);
  return arc_to_distance(orbit_, t);
}

double NearestDistanceLaw::sample(RandomSource& rng) const {
  return quantile(rng.uniform());
}

}  // namespace leocov

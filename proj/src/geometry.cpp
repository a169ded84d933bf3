#include "leocov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace leocov {

namespace {

double clamp_unit(double x) {
  if (x > 1.0 && x <= 1.0 + kArccosClampTol) return 1.0;
  if (x < -1.0 && x >= -1.0 - kArccosClampTol) return -1.0;
  return x;
}

void require_same_shell(const OrbitGeometry& orbit,
                        const VisibilityWindow& window) {
  if (std::abs(orbit.radius() - window.orbit_radius()) >
          1e-9 * orbit.radius() ||
      std::abs(orbit.earth_radius() - window.earth_radius()) >
          1e-9 * orbit.earth_radius()) {
    throw std::invalid_argument(
        "orbit and visibility window describe different shells");
  }
}

// cos of half the arc angle; h/(R sin theta).
double half_arc_cosine(const OrbitGeometry& orbit, double r) {
  const double R = orbit.radius();
  const double RE = orbit.earth_radius();
  const double h = (R * R + RE * RE - r * r) / (2.0 * RE);
  return h / (R * std::sin(orbit.theta()));
}

}  // namespace

OrbitGeometry::OrbitGeometry(double earth_radius_km, double altitude_km,
                             double theta, double phi)
    : earth_radius_(earth_radius_km),
      altitude_(altitude_km),
      theta_(theta),
      phi_(phi) {
  if (!(earth_radius_km > 0.0)) {
    throw std::invalid_argument("earth radius must be positive");
  }
  if (!(altitude_km > 0.0)) {
    throw std::invalid_argument("orbit altitude must be positive");
  }
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::invalid_argument("polar angle must lie in [0, pi]");
  }
  if (!(phi >= 0.0 && phi < 2.0 * kPi)) {
    throw std::invalid_argument("azimuth angle must lie in [0, 2pi)");
  }
}

VisibilityWindow::VisibilityWindow(double earth_radius_km, double altitude_km,
                                   double omega_min)
    : earth_radius_(earth_radius_km),
      orbit_radius_(earth_radius_km + altitude_km),
      omega_min_(omega_min) {
  if (!(earth_radius_km > 0.0) || !(altitude_km > 0.0)) {
    throw std::invalid_argument("earth radius and altitude must be positive");
  }
  if (!(omega_min >= 0.0 && omega_min < kPi / 2.0)) {
    throw std::invalid_argument("minimum elevation must lie in [0, pi/2)");
  }
  const double s = earth_radius_km * std::sin(omega_min);
  d_max_ = -s + std::sqrt(s * s + 2.0 * earth_radius_km * altitude_km +
                          altitude_km * altitude_km);
  cap_base_ = d_max_ * std::sin(omega_min) + earth_radius_km;
}

double eta(double orbit_radius, double theta, double h) {
  const double s = std::sin(theta);
  if (s == 0.0) {
    throw std::domain_error("eta undefined for an orbit with sin(theta) = 0");
  }
  const double v =
      2.0 * h * h / (orbit_radius * orbit_radius * s * s) - 1.0;
  return clamp_unit(v);
}

bool in_visibility_band(const OrbitGeometry& orbit,
                        const VisibilityWindow& window) {
  require_same_shell(orbit, window);
  const double band = std::acos(window.cap_base() / orbit.radius());
  return std::abs(orbit.theta() - kPi / 2.0) <= band;
}

double visible_arc_length(const OrbitGeometry& orbit,
                          const VisibilityWindow& window) {
  if (!in_visibility_band(orbit, window)) return 0.0;
  const double v = eta(orbit.radius(), orbit.theta(), window.cap_base());
  // Inside the band eta <= 1 up to rounding at the edge.
  return orbit.radius() * std::acos(std::clamp(v, -1.0, 1.0));
}

double d_min(const OrbitGeometry& orbit) {
  const double R = orbit.radius();
  const double RE = orbit.earth_radius();
  return std::sqrt(R * R - 2.0 * RE * R * std::sin(orbit.theta()) + RE * RE);
}

double d_far(const OrbitGeometry& orbit) {
  const double R = orbit.radius();
  const double RE = orbit.earth_radius();
  return std::sqrt(R * R + 2.0 * RE * R * std::sin(orbit.theta()) + RE * RE);
}

double arc_to_distance(const OrbitGeometry& orbit, double ell) {
  const double R = orbit.radius();
  const double RE = orbit.earth_radius();
  if (!(ell >= 0.0 && ell <= 2.0 * kPi * R)) {
    throw std::out_of_range("arc length " + std::to_string(ell) +
                            " outside [0, 2 pi R]");
  }
  const double r2 = R * R + RE * RE -
                    2.0 * RE * R * std::sin(orbit.theta()) *
                        std::cos(ell / (2.0 * R));
  return std::sqrt(std::max(r2, 0.0));
}

double distance_to_arc(const OrbitGeometry& orbit, double r) {
  const double lo = d_min(orbit);
  const double hi = d_far(orbit);
  const double slack = 1e-12 * hi;
  if (!(r >= lo - slack && r <= hi + slack)) {
    throw std::out_of_range("distance " + std::to_string(r) +
                            " outside the orbit's distance range");
  }
  if (std::sin(orbit.theta()) == 0.0) return 0.0;
  const double c = std::clamp(half_arc_cosine(orbit, r), -1.0, 1.0);
  return 2.0 * orbit.radius() * std::acos(c);
}

double distance_to_arc_derivative(const OrbitGeometry& orbit, double r) {
  const double st = std::sin(orbit.theta());
  if (st == 0.0) {
    throw std::domain_error("arc derivative undefined for sin(theta) = 0");
  }
  const double c = half_arc_cosine(orbit, r);
  const double root = std::sqrt(std::max(1.0 - c * c, 0.0));
  if (root == 0.0) {
    throw std::out_of_range("arc derivative unbounded at the distance extrema");
  }
  return 2.0 * r / (orbit.earth_radius() * st * root);
}

double visibility_probability(std::span<const double> lambdas,
                              std::span<const OrbitGeometry> orbits,
                              const VisibilityWindow& window) {
  if (lambdas.size() != orbits.size()) {
    throw std::invalid_argument("density and orbit lists differ in length");
  }
  double mean_visible = 0.0;
  for (std::size_t n = 0; n < orbits.size(); ++n) {
    if (!(lambdas[n] >= 0.0)) {
      throw std::invalid_argument("orbit density must be non-negative");
    }
    mean_visible += lambdas[n] * visible_arc_length(orbits[n], window);
  }
  return -std::expm1(-mean_visible);
}

double orbital_speed(const OrbitGeometry& orbit, const EarthConstants& earth) {
  const double radius_m = orbit.radius() * 1e3;
  return std::sqrt(earth.gravitational_constant * earth.mass_kg / radius_m);
}

double visible_time(const OrbitGeometry& orbit, const VisibilityWindow& window,
                    const EarthConstants& earth) {
  const double arc_m = visible_arc_length(orbit, window) * 1e3;
  return arc_m / orbital_speed(orbit, earth);
}

}  // namespace leocov

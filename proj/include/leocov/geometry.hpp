#ifndef LEOCOV_GEOMETRY_HPP
#define LEOCOV_GEOMETRY_HPP

#include <span>

// Geometry of circular orbits seen from a user fixed at u = (0, 0, R_E).
// Lengths are in kilometers; angles in radians. Only visible_time() works
// in SI units.

namespace leocov {

inline constexpr double kPi = 3.14159265358979323846;

/// Tolerance used when clamping arccos arguments at the ends of [-1, 1].
inline constexpr double kArccosClampTol = 1e-12;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct EarthConstants {
  double radius_km = 6371.0;
  double gravitational_constant = 6.67259e-11;  // m^3 kg^-1 s^-2
  double mass_kg = 5.9736e24;
};

/// One circular orbit. The plane passes through the Earth's center and is
/// described by the polar/azimuth angles of its unit normal.
class OrbitGeometry {
 public:
  /// Throws std::invalid_argument unless altitude_km > 0, earth_radius_km > 0,
  /// theta in [0, pi] and phi in [0, 2pi).
  OrbitGeometry(double earth_radius_km, double altitude_km, double theta,
                double phi = 0.0);

  double earth_radius() const { return earth_radius_; }
  double altitude() const { return altitude_; }
  double radius() const { return earth_radius_ + altitude_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  double earth_radius_;
  double altitude_;
  double theta_;
  double phi_;
};

/// Spherical cap of the orbit sphere that lies above the minimum elevation
/// angle as seen from the user.
class VisibilityWindow {
 public:
  VisibilityWindow(double earth_radius_km, double altitude_km,
                   double omega_min);

  double omega_min() const { return omega_min_; }
  /// Distance from the Earth's center to the base plane of the cap.
  double cap_base() const { return cap_base_; }
  double d_max() const { return d_max_; }
  double earth_radius() const { return earth_radius_; }
  double orbit_radius() const { return orbit_radius_; }

 private:
  double earth_radius_;
  double orbit_radius_;
  double omega_min_;
  double d_max_;
  double cap_base_;
};

/// 2h^2 / (R^2 sin^2 theta) - 1. Values within kArccosClampTol outside
/// [-1, 1] are clamped; values further out are returned as is.
/// Throws std::domain_error when sin(theta) == 0.
double eta(double orbit_radius, double theta, double h);

/// True when the orbit crosses the visibility cap, |theta - pi/2| <= acos(R_A/R).
bool in_visibility_band(const OrbitGeometry& orbit,
                        const VisibilityWindow& window);

/// Length of the orbit arc inside the visibility cap, in [0, pi R].
double visible_arc_length(const OrbitGeometry& orbit,
                          const VisibilityWindow& window);

/// Smallest user-to-orbit distance.
double d_min(const OrbitGeometry& orbit);

/// Largest user-to-orbit distance, reached diametrically opposite d_min.
double d_far(const OrbitGeometry& orbit);

/// Distance r such that the set of orbit points within r of the user is an
/// arc of length ell. Domain [0, 2 pi R]; throws std::out_of_range outside it.
double arc_to_distance(const OrbitGeometry& orbit, double ell);

/// Length of the orbit arc lying within distance r of the user. Domain
/// [d_min, d_far]; throws std::out_of_range outside it.
double distance_to_arc(const OrbitGeometry& orbit, double r);

/// d(arc)/dr of distance_to_arc, for d_min < r < d_far.
double distance_to_arc_derivative(const OrbitGeometry& orbit, double r);

/// Probability that at least one satellite is visible, 1 - exp(-sum lambda_n L_n).
/// Throws std::invalid_argument on length mismatch or negative density.
double visibility_probability(std::span<const double> lambdas,
                              std::span<const OrbitGeometry> orbits,
                              const VisibilityWindow& window);

/// Circular orbital speed sqrt(GM/R) in m/s.
double orbital_speed(const OrbitGeometry& orbit, const EarthConstants& earth);

/// Time (s) a satellite spends inside the visibility cap during one pass.
double visible_time(const OrbitGeometry& orbit, const VisibilityWindow& window,
                    const EarthConstants& earth);

}  // namespace leocov

#endif  // LEOCOV_GEOMETRY_HPP

#ifndef LEOCOV_INTERFERENCE_HPP
#define LEOCOV_INTERFERENCE_HPP

#include <cmath>
#include <vector>

#include "leocov/geometry.hpp"
#include "leocov/numerics.hpp"

namespace leocov {

/// Relative interferer gain of the two-lobe beam model: side lobes 13 dB
/// below the main lobe.
inline const double kDefaultInterfererGain = std::pow(10.0, -1.3);

struct ChannelParams {
  double alpha = 2.0;                       // path-loss exponent
  double m = 1.0;                           // Nakagami shape
  double g_i_bar = kDefaultInterfererGain;  // interferer / serving gain

  /// Throws std::invalid_argument on alpha <= 0, m < 0.5 or g_i_bar
  /// outside (0, 1].
  void validate() const;
  bool has_integer_shape() const;
  /// m as an integer; throws std::domain_error if m is not integral.
  int integer_shape() const;
};

struct AntennaModel {
  double g_t = 1.0;           // transmit main lobe, linear
  double g_r = 1.0;           // receive main lobe, linear
  double g_r_sidelobe = 1.0;  // receive side lobe, linear
  double frequency_hz = 2e9;
  double speed_of_light = 299792458.0;
};

struct EffectiveGains {
  double serving;
  double interfering;
  double ratio;  // interfering / serving
};

/// G_t G_r c^2 / (4 pi f^2) for the serving link and the side-lobe variant
/// for interferers. Throws std::invalid_argument if g_r_sidelobe > g_r or a
/// gain is not positive.
EffectiveGains effective_gains(const AntennaModel& antenna);

/// Largest derivative order laplace_derivatives() accepts.
inline constexpr int kMaxLaplaceOrder = 10;

/// ln of the Laplace transform of the same-orbit interference given the
/// nearest satellite sits at distance r:
///   -lambda * int_{l(r)}^{L} [1 - (1 + s g u(t)^-alpha / m)^-m] dt
/// in the arc coordinate t. Throws std::out_of_range unless
/// d_min <= r <= d_max, std::invalid_argument for s < 0 or an invisible orbit.
double log_laplace(const OrbitGeometry& orbit, const VisibilityWindow& window,
                   double lambda, const ChannelParams& channel, double r,
                   double s, const QuadratureSpec& quad = {});

/// Derivatives d^t/ds^t of the Laplace transform for t = 0..t_max.
/// Requires an integer Nakagami shape and t_max <= kMaxLaplaceOrder.
std::vector<double> laplace_derivatives(const OrbitGeometry& orbit,
                                        const VisibilityWindow& window,
                                        double lambda,
                                        const ChannelParams& channel, double r,
                                        double s, int t_max,
                                        const QuadratureSpec& quad = {});

/// Same as laplace_derivatives but scaled: entry t holds scale^t * L^(t)(s).
/// The integrals are formed in scaled variables, so magnitudes stay O(1)
/// when scale is of the order of s. The lower limit is given as an arc
/// coordinate in [0, L].
std::vector<double> scaled_laplace_derivatives_from_arc(
    const OrbitGeometry& orbit, double visible_arc, double lambda,
    const ChannelParams& channel, double arc_start, double s, double scale,
    int t_max, const QuadratureSpec& quad = {});

}  // namespace leocov

#endif  // LEOCOV_INTERFERENCE_HPP

#include "leocov/interference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leocov {

void ChannelParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(m >= 0.5)) throw std::invalid_argument("Nakagami m must be >= 0.5");
  if (!(g_i_bar > 0.0 && g_i_bar <= 1.0)) {
    throw std::invalid_argument("relative interferer gain must lie in (0, 1]");
  }
}

bool ChannelParams::has_integer_shape() const {
  return m >= 1.0 && std::floor(m) == m;
}

int ChannelParams::integer_shape() const {
  if (!has_integer_shape()) {
    throw std::domain_error("analytic coverage needs an integer Nakagami m");
  }
  return static_cast<int>(m);
}

EffectiveGains effective_gains(const AntennaModel& antenna) {
  if (!(antenna.g_t > 0.0 && antenna.g_r > 0.0 &&
        antenna.g_r_sidelobe > 0.0 && antenna.frequency_hz > 0.0)) {
    throw std::invalid_argument("antenna gains and frequency must be positive");
  }
  if (antenna.g_r_sidelobe > antenna.g_r) {
    throw std::invalid_argument("side-lobe gain exceeds main-lobe gain");
  }
  const double aperture =
      antenna.speed_of_light * antenna.speed_of_light /
      (4.0 * kPi * antenna.frequency_hz * antenna.frequency_hz);
  const double serving = antenna.g_t * antenna.g_r * aperture;
  const double interfering = antenna.g_t * antenna.g_r_sidelobe * aperture;
  return {serving, interfering, antenna.g_r_sidelobe / antenna.g_r};
}

namespace {

double validated_arc_start(const OrbitGeometry& orbit,
                           const VisibilityWindow& window, double lambda,
                           const ChannelParams& channel, double r, double s) {
  channel.validate();
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(s >= 0.0)) throw std::invalid_argument("Laplace argument must be >= 0");
  if (!in_visibility_band(orbit, window)) {
    throw std::invalid_argument("orbit has no visible arc");
  }
  const double lo = d_min(orbit);
  const double hi = window.d_max();
  const double slack = 1e-12 * hi;
  if (!(r >= lo - slack && r <= hi + slack)) {
    throw std::out_of_range("nearest distance outside [d_min, d_max]");
  }
  return distance_to_arc(orbit, std::clamp(r, lo, hi));
}

}  // namespace

double log_laplace(const OrbitGeometry& orbit, const VisibilityWindow& window,
                   double lambda, const ChannelParams& channel, double r,
                   double s, const QuadratureSpec& quad) {
  const double start =
      validated_arc_start(orbit, window, lambda, channel, r, s);
  const double arc = visible_arc_length(orbit, window);
  if (s == 0.0 || lambda == 0.0 || start >= arc) return 0.0;

  const double m = channel.m;
  const double coef = s * channel.g_i_bar / m;
  auto integrand = [&](double t) {
    const double u = arc_to_distance(orbit, t);
    const double x = coef * std::pow(u, -channel.alpha);
    // 1 - (1 + x)^{-m}
    return -std::expm1(-m * std::log1p(x));
  };
  return -lambda * integrate(integrand, start, arc, quad);
}

std::vector<double> scaled_laplace_derivatives_from_arc(
    const OrbitGeometry& orbit, double visible_arc, double lambda,
    const ChannelParams& channel, double arc_start, double s, double scale,
    int t_max, const QuadratureSpec& quad) {
  if (t_max < 0 || t_max > kMaxLaplaceOrder) {
    throw std::invalid_argument("derivative order must lie in [0, " +
                                std::to_string(kMaxLaplaceOrder) + "]");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be > 0");
  const int m_int = channel.integer_shape();
  const double m = m_int;
  const std::size_t dim = static_cast<std::size_t>(t_max) + 1;

  // exponent[k] = scale^k d^k/ds^k of lambda int [1 - (1 + a s)^{-m}] dt
  std::vector<double> exponent(dim, 0.0);
  if (lambda > 0.0 && arc_start < visible_arc) {
    const double gain = channel.g_i_bar / m;
    auto integrand = [&](double t, std::span<double> out) {
      const double u = arc_to_distance(orbit, t);
      const double a = gain * std::pow(u, -channel.alpha);
      const double base = 1.0 + a * s;
      out[0] = -std::expm1(-m * std::log1p(a * s));
      // d^k/ds^k (1 + a s)^{-m} = (-a)^k (m)_k (1 + a s)^{-m-k}
      double power = std::pow(base, -m);
      double ratio = 1.0;
      for (std::size_t k = 1; k < out.size(); ++k) {
        power /= base;
        ratio *= -a * scale * (m + static_cast<double>(k) - 1.0);
        out[k] = -ratio * power;
      }
    };
    const auto integral =
        integrate_vector(integrand, dim, arc_start, visible_arc, quad);
    for (std::size_t k = 0; k < dim; ++k) exponent[k] = lambda * integral[k];
  }

  // L = exp(-g); L^(t) = -sum_{j<t} C(t-1, j) g^(t-j) L^(j), all scaled.
  std::vector<double> scaled(dim, 0.0);
  scaled[0] = std::exp(-exponent[0]);
  for (std::size_t t = 1; t < dim; ++t) {
    double acc = 0.0;
    double binom = 1.0;  // C(t-1, j)
    for (std::size_t j = 0; j < t; ++j) {
      acc += binom * exponent[t - j] * scaled[j];
      binom = binom * static_cast<double>(t - 1 - j) / static_cast<double>(j + 1);
    }
    scaled[t] = -acc;
  }
  return scaled;
}

std::vector<double> laplace_derivatives(const OrbitGeometry& orbit,
                                        const VisibilityWindow& window,
                                        double lambda,
                                        const ChannelParams& channel, double r,
                                        double s, int t_max,
                                        const QuadratureSpec& quad) {
  const double start =
      validated_arc_start(orbit, window, lambda, channel, r, s);
  const double arc = visible_arc_length(orbit, window);
  // Natural scale of s in the coverage integrals is m r^alpha.
  const double scale =
      s > 0.0 ? s : channel.m * std::pow(std::max(r, 1e-300), channel.alpha);
  auto values = scaled_laplace_derivatives_from_arc(
      orbit, arc, lambda, channel, start, s, scale, t_max, quad);
  double factor = 1.0;
  for (std::size_t t = 1; t < values.size(); ++t) {
    factor /= scale;
    values[t] *= factor;
  }
  return values;
}

}  // namespace leocov

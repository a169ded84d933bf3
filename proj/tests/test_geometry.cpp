#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "leocov/geometry.hpp"
#include "leocov/interference.hpp"

using namespace leocov;

namespace {

constexpr double kRe = 6371.0;
constexpr double kRh = 500.0;
constexpr double kR = kRe + kRh;

VisibilityWindow window_deg(double omega_deg, double altitude = kRh) {
  return VisibilityWindow(kRe, altitude, deg_to_rad(omega_deg));
}

// Points of the orbit circle built from the plane normal directly (not via
// the library's frame): p = R (cos psi a + sin psi b) with a, b an
// orthonormal basis of the plane.
struct Circle {
  double a[3];
  double b[3];

  explicit Circle(double theta, double phi = 0.0) {
    const double n[3] = {std::sin(theta) * std::cos(phi),
                         std::sin(theta) * std::sin(phi), std::cos(theta)};
    // a = normalize(n x x_hat) unless degenerate, then n x y_hat.
    double t[3] = {0.0, n[2], -n[1]};
    double norm = std::hypot(t[1], t[2]);
    if (norm < 1e-8) {
      t[0] = -n[2];
      t[1] = 0.0;
      t[2] = n[0];
      norm = std::hypot(t[0], t[2]);
    }
    for (int i = 0; i < 3; ++i) a[i] = t[i] / norm;
    b[0] = n[1] * a[2] - n[2] * a[1];
    b[1] = n[2] * a[0] - n[0] * a[2];
    b[2] = n[0] * a[1] - n[1] * a[0];
  }

  void point(double psi, double out[3]) const {
    for (int i = 0; i < 3; ++i) {
      out[i] = kR * (std::cos(psi) * a[i] + std::sin(psi) * b[i]);
    }
  }
};

double user_distance(const double p[3]) {
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + (p[2] - kRe) * (p[2] - kRe));
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("eta: closed-form points and domain") {
    const double theta = 1.1;
    CHECK(eta(kR, theta, kR * std::sin(theta)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eta(6871.0, kPi / 2, 6871.0 / std::sqrt(2.0)) ==
          doctest::Approx(0.0).epsilon(1e-14));
    const auto w = window_deg(10);
    CHECK(kR * std::acos(eta(kR, kPi / 2, w.cap_base())) ==
          doctest::Approx(3371.4).epsilon(0.1 / 3371.4));
    CHECK_THROWS_AS(eta(kR, 0.0, 100.0), std::domain_error);
  }

  TEST_CASE("eta: clamps only within the tolerance") {
    const double theta = kPi / 2;
    const double h_at_one = kR * std::sin(theta);
    // Exactly 1 + tiny noise is clamped; clearly outside is returned as is.
    CHECK(eta(kR, theta, h_at_one * (1.0 + 1e-15)) == 1.0);
    CHECK(eta(kR, theta, h_at_one * 1.01) > 1.0);
  }

  TEST_CASE("window relations") {
    for (double omega : {0.0, 10.0, 30.0, 60.0}) {
      const auto w = window_deg(omega);
      const double s = std::sin(deg_to_rad(omega));
      const double dmax = -kRe * s + std::sqrt(kRe * kRe * s * s + 2 * kRe * kRh + kRh * kRh);
      CHECK(w.d_max() == doctest::Approx(dmax).epsilon(1e-14));
      CHECK(w.cap_base() == doctest::Approx(dmax * s + kRe).epsilon(1e-14));
      CHECK(w.cap_base() >= kRe);
      CHECK(w.cap_base() < kR);
    }
  }

  TEST_CASE("visible arc length at the reference shell") {
    const auto w = window_deg(10);
    CHECK(visible_arc_length(OrbitGeometry(kRe, kRh, kPi / 2), w) ==
          doctest::Approx(3371.4).epsilon(0.1 / 3371.4));
    CHECK(visible_arc_length(OrbitGeometry(kRe, kRh, 0.0), w) == 0.0);
    CHECK(visible_arc_length(OrbitGeometry(kRe, kRh, kPi), w) == 0.0);
  }

  TEST_CASE("zero elevation mask: closed form and sampling oracle") {
    const auto w = window_deg(0);
    const OrbitGeometry orbit(kRe, kRh, kPi / 2);
    const double closed = kR * std::acos(2 * kRe * kRe / (kR * kR) - 1);
    CHECK(visible_arc_length(orbit, w) == doctest::Approx(closed).epsilon(1e-12));

    // Fraction of uniformly sampled orbit points with z > R_E.
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> psi(0.0, 2 * kPi);
    const Circle circle(kPi / 2, 0.7);
    constexpr int kSamples = 2'000'000;
    int above = 0;
    for (int i = 0; i < kSamples; ++i) {
      double p[3];
      circle.point(psi(gen), p);
      above += p[2] > kRe;
    }
    const double oracle = 2 * kPi * kR * above / kSamples;
    CHECK(std::abs(oracle - closed) / closed < 5e-3);
  }

  TEST_CASE("arc length is symmetric, peaks at 90 deg and shrinks with the mask") {
    for (double omega : {10.0, 20.0, 30.0}) {
      const auto w = window_deg(omega);
      const auto lower = window_deg(omega + 10.0);
      const double peak = visible_arc_length(OrbitGeometry(kRe, kRh, kPi / 2), w);
      for (int d = 0; d <= 180; ++d) {
        const double t = deg_to_rad(d);
        const double l = visible_arc_length(OrbitGeometry(kRe, kRh, t), w);
        const double mirror =
            visible_arc_length(OrbitGeometry(kRe, kRh, deg_to_rad(180 - d)), w);
        CHECK(l == doctest::Approx(mirror).epsilon(1e-12));
        CHECK(l <= peak);
        CHECK(l >= 0.0);
        CHECK(l <= kPi * kR);
        CHECK(visible_arc_length(OrbitGeometry(kRe, kRh, t), lower) <= l);
      }
    }
  }

  TEST_CASE("band edge gives zero length, not NaN") {
    const auto w = window_deg(10);
    const double edge = kPi / 2 + std::acos(w.cap_base() / kR);
    for (double t : {std::nextafter(edge, 0.0), edge, std::nextafter(edge, 4.0)}) {
      const double l = visible_arc_length(OrbitGeometry(kRe, kRh, t), w);
      CHECK(std::isfinite(l));
      CHECK(l < 1.0);
    }
  }

  TEST_CASE("d_min: closed form and brute-force minimum") {
    CHECK(d_min(OrbitGeometry(kRe, kRh, kPi / 2)) == doctest::Approx(kRh).epsilon(1e-12));
    CHECK(d_min(OrbitGeometry(kRe, kRh, 0.0)) ==
          doctest::Approx(std::sqrt(kR * kR + kRe * kRe)).epsilon(1e-14));

    const double theta = kPi / 2 + kPi / 18;
    const Circle circle(theta, 1.3);
    double best = std::numeric_limits<double>::infinity();
    constexpr int kSamples = 1'000'000;
    for (int i = 0; i < kSamples; ++i) {
      double p[3];
      circle.point(2 * kPi * i / kSamples, p);
      best = std::min(best, user_distance(p));
    }
    CHECK(std::abs(d_min(OrbitGeometry(kRe, kRh, theta, 1.3)) - best) / best < 1e-6);

    const auto w = window_deg(10);
    for (int d = 0; d <= 180; ++d) {
      const OrbitGeometry o(kRe, kRh, deg_to_rad(d));
      CHECK(d_min(o) >= kRh * (1 - 1e-12));
      CHECK(d_min(o) <= kR + kRe);
      if (in_visibility_band(o, w)) CHECK(d_min(o) <= w.d_max() * (1 + 1e-12));
    }
  }

  TEST_CASE("arc/distance conversions") {
    const auto w = window_deg(10);
    const OrbitGeometry orbit(kRe, kRh, kPi / 2 + kPi / 36);
    const double L = visible_arc_length(orbit, w);
    CHECK(arc_to_distance(orbit, 0.0) == doctest::Approx(d_min(orbit)).epsilon(1e-14));
    CHECK(std::abs(arc_to_distance(orbit, L) - w.d_max()) / w.d_max() < 1e-9);
    CHECK(distance_to_arc(orbit, d_min(orbit)) == doctest::Approx(0.0));
    CHECK(std::abs(distance_to_arc(orbit, w.d_max()) - L) / L < 1e-9);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double ell = L * u(gen);
      const double back = distance_to_arc(orbit, arc_to_distance(orbit, ell));
      CHECK(std::abs(back - ell) <= 1e-9 * L);
    }
    CHECK_THROWS_AS(arc_to_distance(orbit, -1.0), std::out_of_range);
    CHECK_THROWS_AS(arc_to_distance(orbit, 2 * kPi * orbit.radius() * 1.01),
                    std::out_of_range);
    CHECK_THROWS_AS(distance_to_arc(orbit, d_min(orbit) * 0.9), std::out_of_range);
    CHECK_THROWS_AS(distance_to_arc(orbit, d_far(orbit) * 1.1), std::out_of_range);
  }

  TEST_CASE("distance_to_arc matches circle counting") {
    const OrbitGeometry orbit(kRe, kRh, deg_to_rad(97.0), 0.4);
    const Circle circle(orbit.theta(), orbit.phi());
    const auto w = window_deg(10);
    constexpr int kSamples = 2'000'000;
    std::vector<double> dist(kSamples);
    for (int i = 0; i < kSamples; ++i) {
      double p[3];
      circle.point(2 * kPi * (i + 0.5) / kSamples, p);
      dist[i] = user_distance(p);
    }
    for (double frac : {0.1, 0.4, 0.8}) {
      const double r = d_min(orbit) + frac * (w.d_max() - d_min(orbit));
      int inside = 0;
      for (double d : dist) inside += d <= r;
      const double oracle = 2 * kPi * orbit.radius() * inside / kSamples;
      const double step = 2 * kPi * orbit.radius() / kSamples;
      CHECK(std::abs(distance_to_arc(orbit, r) - oracle) <= 2 * step);
    }
  }

  TEST_CASE("arc derivative matches finite differences") {
    const OrbitGeometry orbit(kRe, kRh, deg_to_rad(85.0));
    const auto w = window_deg(10);
    for (double frac : {0.2, 0.5, 0.9}) {
      const double r = d_min(orbit) + frac * (w.d_max() - d_min(orbit));
      const double h = 1e-4;
      const double fd = (distance_to_arc(orbit, r + h) - distance_to_arc(orbit, r - h)) / (2 * h);
      CHECK(distance_to_arc_derivative(orbit, r) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("visibility probability") {
    const auto w = window_deg(10);
    const OrbitGeometry zen(kRe, kRh, kPi / 2);
    const OrbitGeometry flat(kRe, kRh, 0.0);
    const std::vector<OrbitGeometry> one = {zen};
    const std::vector<double> zero = {0.0};
    CHECK(visibility_probability(zero, one, w) == 0.0);
    const std::vector<double> lam = {0.001};
    const std::vector<OrbitGeometry> flat_only = {flat};
    CHECK(visibility_probability(lam, flat_only, w) == 0.0);
    CHECK(visibility_probability(lam, one, w) ==
          doctest::Approx(1 - std::exp(-3.3714)).epsilon(1e-4));

    const std::vector<double> two_lam = {0.001, 0.002};
    CHECK_THROWS_AS(visibility_probability(two_lam, one, w), std::invalid_argument);

    const std::vector<OrbitGeometry> two = {zen, OrbitGeometry(kRe, kRh, 1.4, 2.0)};
    double prev = 0.0;
    for (double l : {0.0001, 0.001, 0.01}) {
      const std::vector<double> l1 = {l};
      const std::vector<double> l2 = {l, l};
      const double p1 = visibility_probability(l1, one, w);
      CHECK(p1 >= prev);
      CHECK(visibility_probability(l2, two, w) >= p1);
      prev = p1;
    }
  }

  TEST_CASE("speed and visible time at the reference shell") {
    const EarthConstants earth;
    const auto w = window_deg(10);
    const OrbitGeometry orbit(kRe, kRh, kPi / 2);
    CHECK(std::abs(orbital_speed(orbit, earth) - 7.6165e3) <= 0.5);
    CHECK(std::abs(visible_time(orbit, w, earth) - 442.6396) <= 0.01);
    CHECK(visible_time(OrbitGeometry(kRe, kRh, 0.0), w, earth) == 0.0);
  }

  TEST_CASE("constructors reject invalid input") {
    CHECK_THROWS_AS(OrbitGeometry(kRe, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(OrbitGeometry(kRe, kRh, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(OrbitGeometry(kRe, kRh, 1.0, 2 * kPi), std::invalid_argument);
    CHECK_THROWS_AS(VisibilityWindow(kRe, kRh, kPi / 2), std::invalid_argument);
    CHECK(OrbitGeometry(kRe, kRh, 1.0).radius() == kRe + kRh);
  }

  TEST_CASE("effective gains") {
    AntennaModel ant;
    ant.g_t = 3.0;
    ant.g_r = std::pow(10.0, 1.3);
    ant.g_r_sidelobe = 1.0;
    auto g = effective_gains(ant);
    CHECK(g.ratio == doctest::Approx(std::pow(10.0, -1.3)).epsilon(1e-14));
    ant.g_r_sidelobe = ant.g_r;
    CHECK(effective_gains(ant).ratio == doctest::Approx(1.0));
    ant.g_r_sidelobe = 1.0;
    auto doubled = ant;
    doubled.frequency_hz *= 2;
    const auto g2 = effective_gains(doubled);
    CHECK(g2.serving == doctest::Approx(g.serving / 4).epsilon(1e-14));
    CHECK(g2.interfering == doctest::Approx(g.interfering / 4).epsilon(1e-14));
    CHECK(g2.ratio == doctest::Approx(g.ratio).epsilon(1e-14));
    ant.g_r_sidelobe = 2 * ant.g_r;
    CHECK_THROWS_AS(effective_gains(ant), std::invalid_argument);
  }
}

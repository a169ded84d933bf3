#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "leocov/geometry.hpp"
#include "leocov/numerics.hpp"

using namespace leocov;

TEST_SUITE("numerics") {
  TEST_CASE("quadrature: polynomials and exponentials") {
    CHECK(integrate([](double x) { return x * x * x - 2 * x; }, -1.0, 2.0) ==
          doctest::Approx(0.75).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::exp(-3 * x); }, 0.0, 10.0) ==
          doctest::Approx((1 - std::exp(-30.0)) / 3).epsilon(1e-12));
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                    QuadratureSpec{1e-8, 1e-14, 500}) ==
          doctest::Approx(2.0).epsilon(1e-7));
    CHECK(integrate([](double) { return 1.0; }, 3.0, 3.0) == 0.0);
  }

  TEST_CASE("quadrature: vector integrand converges on every component") {
    auto f = [](double x, std::span<double> out) {
      out[0] = std::sin(x);
      out[1] = std::cos(50 * x);
      out[2] = x * x;
    };
    const auto r = integrate_vector(f, 3, 0.0, kPi, QuadratureSpec{1e-12, 1e-14, 400});
    CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(r[1] - std::sin(50 * kPi) / 50) < 1e-12);
    CHECK(r[2] == doctest::Approx(std::pow(kPi, 3) / 3).epsilon(1e-12));
  }

  TEST_CASE("quadrature: failure and argument errors") {
    auto wild = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
    CHECK_THROWS_AS(integrate(wild, 0.0, 1.0, QuadratureSpec{1e-12, 1e-15, 5}),
                    QuadratureError);
    try {
      integrate(wild, 0.0, 1.0, QuadratureSpec{1e-12, 1e-15, 5});
    } catch (const QuadratureError& e) {
      CHECK(std::isfinite(e.estimate()));
      CHECK(e.error_bound() > 0.0);
    }
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureSpec({-1.0, 1e-12, 10}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureSpec({1e-9, 0.0, 10}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureSpec({1e-9, 1e-12, 0}).validate(), std::invalid_argument);
    auto f = [](double, std::span<double> out) { out[0] = 1.0; };
    CHECK_THROWS_AS(integrate_vector(f, 0, 0.0, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(integrate_vector(f, kMaxIntegrandDim + 1, 0.0, 1.0, {}),
                    std::invalid_argument);
  }

  TEST_CASE("random source: determinism and derived streams") {
    RandomSource a(42), b(42), c(43);
    std::vector<std::uint64_t> va, vb, vc;
    for (int i = 0; i < 16; ++i) {
      va.push_back(a());
      vb.push_back(b());
      vc.push_back(c());
    }
    CHECK(va == vb);
    CHECK(va != vc);

    const RandomSource root(7);
    auto d1 = root.derive(1), d1b = root.derive(1), d2 = root.derive(2);
    CHECK(d1() == d1b());
    CHECK(d1() != d2());
    std::set<std::uint64_t> seeds;
    for (std::uint64_t k = 0; k < 1000; ++k) seeds.insert(root.derive(k).seed());
    CHECK(seeds.size() == 1000);

    RandomSource u(3);
    for (int i = 0; i < 10000; ++i) {
      const double x = u.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
    }
    CHECK(splitmix64(0) != splitmix64(1));
  }

  TEST_CASE("poisson moments") {
    RandomSource rng(11);
    CHECK(sample_poisson(0.0, rng) == 0);
    CHECK_THROWS_AS(sample_poisson(-1.0, rng), std::invalid_argument);
    for (double mean : {0.3, 4.0, 250.0}) {
      constexpr int kN = 200000;
      double s = 0, s2 = 0;
      for (int i = 0; i < kN; ++i) {
        const double x = static_cast<double>(sample_poisson(mean, rng));
        s += x;
        s2 += x * x;
      }
      const double m = s / kN;
      const double var = s2 / kN - m * m;
      CHECK(std::abs(m - mean) < 5 * std::sqrt(mean / kN));
      CHECK(var == doctest::Approx(mean).epsilon(0.03));
    }
  }

  TEST_CASE("nakagami power moments") {
    RandomSource rng(12);
    for (double m : {0.5, 1.0, 2.5, 4.0}) {
      constexpr int kN = 400000;
      double s = 0, s2 = 0;
      for (int i = 0; i < kN; ++i) {
        const double h2 = sample_fading_power(m, rng);
        s += h2;
        s2 += h2 * h2;
      }
      const double mean = s / kN;
      const double var = s2 / kN - mean * mean;
      CHECK(std::abs(mean - 1.0) < 5 * std::sqrt(1.0 / (m * kN)));
      CHECK(var == doctest::Approx(1.0 / m).epsilon(0.03));
    }
    double s = 0;
    constexpr int kN = 200000;
    for (int i = 0; i < kN; ++i) {
      const double h = sample_nakagami(2.0, rng);
      s += h * h;
    }
    CHECK(std::abs(s / kN - 1.0) < 0.01);
    CHECK_THROWS_AS(sample_nakagami(0.4, rng), std::domain_error);
  }

  TEST_CASE("truncated exponential: quantile bounds and KS distance") {
    CHECK(truncated_exponential_quantile(0.5, 3.0, 0.0) == 0.0);
    CHECK(truncated_exponential_quantile(0.5, 3.0, std::nextafter(1.0, 0.0)) <= 3.0);
    // Tiny rate: uniform in the limit.
    CHECK(truncated_exponential_quantile(1e-14, 4.0, 0.25) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // Huge rate: stays inside the support.
    CHECK(truncated_exponential_quantile(1e6, 1.0, 0.999) <= 1.0);

    const double rate = 0.8, upper = 2.5;
    const double mass = 1 - std::exp(-rate * upper);
    RandomSource rng(13);
    constexpr int kN = 200000;
    std::vector<double> xs(kN);
    for (auto& x : xs) x = sample_truncated_exponential(rate, upper, rng);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < kN; ++i) {
      const double cdf = (1 - std::exp(-rate * xs[i])) / mass;
      ks = std::max({ks, std::abs(cdf - double(i) / kN), std::abs(cdf - double(i + 1) / kN)});
    }
    // 1.63 / sqrt(n): 1% critical value.
    CHECK(ks < 1.63 / std::sqrt(double(kN)));
  }
}

#ifndef LEOCOV_NUMERICS_HPP
#define LEOCOV_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace leocov {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Raised when adaptive quadrature runs out of subdivisions. Carries the
/// best estimate reached and its error bound (first component for vector
/// integrands).
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double estimate, double error_bound)
      : std::runtime_error("quadrature did not converge: estimate " +
                           std::to_string(estimate) + ", error bound " +
                           std::to_string(error_bound)),
        estimate_(estimate),
        error_bound_(error_bound) {}

  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Largest number of components a vector integrand may have.
inline constexpr std::size_t kMaxIntegrandDim = 12;

namespace detail {

using Components = std::array<double, kMaxIntegrandDim>;

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5 and 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  Components value;
  Components error;
  Components magnitude;  // integral of |f|, for the rounding floor
};

template <typename F>
Panel kronrod_panel(F& f, std::size_t dim, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Components fx{};
  Components kronrod{};
  Components gauss{};
  Components magnitude{};

  auto accumulate = [&](double x, double wk, double wg) {
    fx.fill(0.0);
    f(x, std::span<double>(fx.data(), dim));
    for (std::size_t k = 0; k < dim; ++k) {
      kronrod[k] += wk * fx[k];
      gauss[k] += wg * fx[k];
      magnitude[k] += wk * std::abs(fx[k]);
    }
  };

  accumulate(center, kKronrodWeights[7], kGaussWeights[3]);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double wg = (j % 2 == 1) ? kGaussWeights[j / 2] : 0.0;
    accumulate(center - dx, kKronrodWeights[j], wg);
    accumulate(center + dx, kKronrodWeights[j], wg);
  }

  Panel p{a, b, {}, {}, {}};
  for (std::size_t k = 0; k < dim; ++k) {
    p.value[k] = kronrod[k] * half;
    p.error[k] = std::abs((kronrod[k] - gauss[k]) * half);
    p.magnitude[k] = magnitude[k] * std::abs(half);
  }
  return p;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of a vector-valued integrand
/// f(x, out) over [a, b]. Bisects the panel with the largest scaled error
/// until every component satisfies err <= max(abs_tol, rel_tol |I|).
template <typename F>
std::vector<double> integrate_vector(F&& f, std::size_t dim, double a,
                                     double b, const QuadratureSpec& spec) {
  spec.validate();
  if (dim == 0 || dim > kMaxIntegrandDim) {
    throw std::invalid_argument("vector integrand dimension out of range");
  }
  if (!(a <= b)) {
    throw std::invalid_argument("integration bounds must satisfy a <= b");
  }
  std::vector<double> result(dim, 0.0);
  if (a == b) return result;

  std::vector<detail::Panel> panels;
  panels.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
  panels.push_back(detail::kronrod_panel(f, dim, a, b));

  constexpr double kRoundingFloor = 50.0 * std::numeric_limits<double>::epsilon();
  for (int split = 0;; ++split) {
    detail::Components total{}, total_err{}, total_mag{};
    for (const auto& p : panels) {
      for (std::size_t k = 0; k < dim; ++k) {
        total[k] += p.value[k];
        total_err[k] += p.error[k];
        total_mag[k] += p.magnitude[k];
      }
    }
    detail::Components tol{};
    bool converged = true;
    for (std::size_t k = 0; k < dim; ++k) {
      tol[k] = std::max({spec.abs_tol, spec.rel_tol * std::abs(total[k]),
                         kRoundingFloor * total_mag[k]});
      if (!(total_err[k] <= tol[k])) converged = false;
    }
    if (converged) {
      std::copy_n(total.begin(), dim, result.begin());
      return result;
    }
    if (split >= spec.max_subdivisions) {
      throw QuadratureError(total[0], total_err[0]);
    }

    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      double score = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        score = std::max(score, panels[i].error[k] / tol[k]);
      }
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    const double lo = panels[worst].a;
    const double hi = panels[worst].b;
    const double mid = 0.5 * (lo + hi);
    panels[worst] = detail::kronrod_panel(f, dim, lo, mid);
    panels.push_back(detail::kronrod_panel(f, dim, mid, hi));
  }
}

/// Scalar convenience wrapper around integrate_vector.
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  auto wrapped = [&f](double x, std::span<double> out) { out[0] = f(x); };
  return integrate_vector(wrapped, 1, a, b, spec)[0];
}

/// Seeded 64-bit generator. Streams are reproducible for a given seed and
/// build; derive() splits off independent child streams for parallel shards.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  static const char* algorithm() { return "mt19937_64+splitmix64"; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Child stream for shard `index`; depends only on (seed, index).
  RandomSource derive(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for seed mixing.
std::uint64_t splitmix64(std::uint64_t x);

/// Poisson draw; returns 0 for mean == 0. Throws on negative mean.
std::int64_t sample_poisson(double mean, RandomSource& rng);

/// Gamma(shape = m, scale = 1/m) draw: the Nakagami-m fading power H^2.
double sample_fading_power(double m, RandomSource& rng);

/// Nakagami-m envelope H with E[H^2] = 1. Throws std::domain_error for m < 0.5.
double sample_nakagami(double m, RandomSource& rng);

/// Inverse-CDF map of u in [0, 1) to an exponential(rate) variable truncated
/// to [0, upper].
double truncated_exponential_quantile(double rate, double upper, double u);

/// Draw from the truncated exponential on [0, upper].
double sample_truncated_exponential(double rate, double upper,
                                    RandomSource& rng);

}  // namespace leocov

#endif  // LEOCOV_NUMERICS_HPP

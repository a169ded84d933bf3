#include "leocov/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace leocov {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be > 0");
  if (max_subdivisions < 1) {
    throw std::invalid_argument("max_subdivisions must be >= 1");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed)) {}

RandomSource RandomSource::derive(std::uint64_t index) const {
  return RandomSource(splitmix64(seed_ ^ splitmix64(index + 1)));
}

std::int64_t sample_poisson(double mean, RandomSource& rng) {
  if (!(mean >= 0.0)) throw std::invalid_argument("Poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

double sample_fading_power(double m, RandomSource& rng) {
  if (!(m >= 0.5)) {
    throw std::domain_error("Nakagami shape m must be >= 0.5");
  }
  std::gamma_distribution<double> dist(m, 1.0 / m);
  return dist(rng);
}

double sample_nakagami(double m, RandomSource& rng) {
  return std::sqrt(sample_fading_power(m, rng));
}

double truncated_exponential_quantile(double rate, double upper, double u) {
  if (!(rate > 0.0) || !(upper > 0.0)) {
    throw std::invalid_argument("truncated exponential needs rate, upper > 0");
  }
  // -ln(1 - u (1 - e^{-rate upper})) / rate
  const double mass = -std::expm1(-rate * upper);
  const double t = -std::log1p(-u * mass) / rate;
  return std::min(t, upper);
}

double sample_truncated_exponential(double rate, double upper,
                                    RandomSource& rng) {
  return truncated_exponential_quantile(rate, upper, rng.uniform());
}

}  // namespace leocov

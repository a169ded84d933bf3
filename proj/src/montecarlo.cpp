#include "leocov/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

namespace leocov {

void McConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("Monte-Carlo trials must be >= 1");
  if (batch < 1) throw std::invalid_argument("Monte-Carlo batch must be >= 1");
}

std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

OrbitFrame orbit_frame(const OrbitGeometry& orbit) {
  const double st = std::sin(orbit.theta());
  const double ct = std::cos(orbit.theta());
  const double sp = std::sin(orbit.phi());
  const double cp = std::cos(orbit.phi());
  // Rotation taking the z-axis to the orbit normal; e1, e2 are the images of
  // the x- and y-axes up to ordering.
  return OrbitFrame{{st * cp, st * sp, ct}, {-sp, cp, 0.0}, {-ct * cp, -ct * sp, st}};
}

bool above_min_elevation(const Vec3& p, const VisibilityWindow& window) {
  const double re = window.earth_radius();
  const double dz = p[2] - re;
  const double d = std::sqrt(p[0] * p[0] + p[1] * p[1] + dz * dz);
  return dz >= std::sin(window.omega_min()) * d;
}

bool inside_cap(const Vec3& p, const VisibilityWindow& window) {
  return p[2] > window.cap_base();
}

namespace {

// (cos psi, sin psi) for psi uniform on [0, 2pi), without trigonometry:
// a uniform point of the unit disk has a uniform polar angle, and squaring
// it as a complex number doubles that angle.
void uniform_on_circle(RandomSource& rng, double& c, double& s) {
  double x, y, q;
  do {
    x = 2.0 * rng.uniform() - 1.0;
    y = 2.0 * rng.uniform() - 1.0;
    q = x * x + y * y;
  } while (q > 1.0 || q == 0.0);
  c = (x * x - y * y) / q;
  s = 2.0 * x * y / q;
}

// Draws one orbit's satellites and reports the visible ones. Only the
// z-coordinate is needed for distance and elevation.
class OrbitSampler {
 public:
  OrbitSampler(const OrbitGeometry& orbit, const VisibilityWindow& window,
               double lambda)
      : radius_(orbit.radius()),
        earth_radius_(orbit.earth_radius()),
        sin_omega_(std::sin(window.omega_min())),
        mean_count_(2.0 * kPi * orbit.radius() * lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    const OrbitFrame frame = orbit_frame(orbit);
    e1z_ = frame.e1[2];
    e2z_ = frame.e2[2];
    if (mean_count_ > 0.0) {
      poisson_ = std::poisson_distribution<std::int64_t>(mean_count_);
    }
  }

  // Appends visible distances (km) to `out` in draw order; returns the
  // total number of satellites on the orbit.
  std::int64_t draw(RandomSource& rng, std::vector<double>& out) {
    if (mean_count_ == 0.0) return 0;
    const std::int64_t count = poisson_(rng);
    const double r2e2 = radius_ * radius_ + earth_radius_ * earth_radius_;
    for (std::int64_t i = 0; i < count; ++i) {
      double c, s;
      uniform_on_circle(rng, c, s);
      const double z = radius_ * (c * e1z_ + s * e2z_);
      if (z < earth_radius_) continue;  // below the user's horizon
      const double d = std::sqrt(std::max(r2e2 - 2.0 * earth_radius_ * z, 0.0));
      if (z - earth_radius_ >= sin_omega_ * d) out.push_back(d);
    }
    return count;
  }

 private:
  double radius_;
  double earth_radius_;
  double sin_omega_;
  double mean_count_;
  double e1z_ = 0.0;
  double e2z_ = 0.0;
  std::poisson_distribution<std::int64_t> poisson_;
};

std::size_t resolved_threads(const McConfig& cfg, std::size_t batches) {
  std::size_t n = cfg.threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::min(n, batches);
}

// Runs kernel(rng, trials_in_batch, acc) for every batch and returns the
// per-batch accumulators in batch order.
template <typename Acc, typename Kernel>
std::vector<Acc> run_batches(const McConfig& cfg, const Acc& prototype,
                             Kernel&& kernel) {
  cfg.validate();
  const std::uint64_t batches = (cfg.trials + cfg.batch - 1) / cfg.batch;
  std::vector<Acc> results(batches, prototype);
  const RandomSource root(cfg.seed);

  auto run_one = [&](std::uint64_t b) {
    RandomSource rng = root.derive(b);
    const std::uint64_t begin = b * cfg.batch;
    const std::uint64_t n = std::min(cfg.batch, cfg.trials - begin);
    kernel(rng, n, results[b]);
  };

  const std::size_t threads = resolved_threads(cfg, batches);
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < batches; ++b) run_one(b);
    return results;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::uint64_t b = next++; b < batches; b = next++) run_one(b);
    });
  }
  workers.clear();
  return results;
}

struct CoverageCounts {
  std::uint64_t trials = 0;
  std::uint64_t conditioned = 0;
  std::vector<std::uint64_t> covered;

  void merge(const CoverageCounts& o) {
    trials += o.trials;
    conditioned += o.conditioned;
    for (std::size_t i = 0; i < covered.size(); ++i) covered[i] += o.covered[i];
  }
};

void count_thresholds(double metric, std::span<const double> thresholds,
                      std::vector<std::uint64_t>& covered) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (metric >= thresholds[i]) ++covered[i];
  }
}

std::vector<double> to_linear(std::span<const double> thresholds_db) {
  std::vector<double> out;
  out.reserve(thresholds_db.size());
  for (double g : thresholds_db) out.push_back(db_to_linear(g));
  return out;
}

CoverageCurve make_curve(CurveKind kind, bool conditional,
                         std::span<const double> thresholds_db,
                         const std::vector<std::uint64_t>& covered,
                         std::uint64_t denominator, const McConfig& cfg) {
  CoverageCurve curve;
  curve.kind = kind;
  curve.conditional = conditional;
  curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  for (std::uint64_t k : covered) {
    const double v = denominator == 0
                         ? 0.0
                         : static_cast<double>(k) / static_cast<double>(denominator);
    const auto [lo, hi] = wilson_interval(k, denominator);
    curve.values.push_back(v);
    curve.ci_low.push_back(lo);
    curve.ci_high.push_back(hi);
  }
  curve.metadata["seed"] = std::to_string(cfg.seed);
  curve.metadata["trials"] = std::to_string(cfg.trials);
  curve.metadata["batch"] = std::to_string(cfg.batch);
  curve.metadata["denominator_trials"] = std::to_string(denominator);
  curve.metadata["rng"] = RandomSource::algorithm();
  return curve;
}

void require_conditioning(std::uint64_t conditioned) {
  if (conditioned < kMinConditionedTrials) {
    throw DegenerateConditioning(
        "only " + std::to_string(conditioned) +
        " trials had a visible satellite; at least " +
        std::to_string(kMinConditionedTrials) + " are needed");
  }
}

McCoverage finish(CurveKind kind, std::span<const double> thresholds_db,
                  const CoverageCounts& counts, const McConfig& cfg) {
  require_conditioning(counts.conditioned);
  McCoverage out{
      make_curve(kind, true, thresholds_db, counts.covered, counts.conditioned,
                 cfg),
      make_curve(kind, false, thresholds_db, counts.covered, counts.trials, cfg),
      static_cast<double>(counts.conditioned) /
          static_cast<double>(counts.trials),
      counts.conditioned};
  return out;
}

std::size_t nearest_index(const std::vector<double>& d) {
  return static_cast<std::size_t>(std::min_element(d.begin(), d.end()) -
                                  d.begin());
}

}  // namespace

SatelliteSnapshot sample_orbit(const OrbitGeometry& orbit,
                               const VisibilityWindow& window, double lambda,
                               RandomSource& rng) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  const OrbitFrame f = orbit_frame(orbit);
  const double R = orbit.radius();
  const double re = orbit.earth_radius();
  const auto count = sample_poisson(2.0 * kPi * R * lambda, rng);

  struct Sat {
    Vec3 p;
    double d;
  };
  std::vector<Sat> sats;
  sats.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const double psi = 2.0 * kPi * rng.uniform();
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    Vec3 p{};
    for (int k = 0; k < 3; ++k) p[k] = R * (c * f.e1[k] + s * f.e2[k]);
    const double dz = p[2] - re;
    sats.push_back({p, std::sqrt(p[0] * p[0] + p[1] * p[1] + dz * dz)});
  }
  std::sort(sats.begin(), sats.end(),
            [](const Sat& a, const Sat& b) { return a.d < b.d; });

  SatelliteSnapshot snap;
  for (const auto& s : sats) {
    snap.positions.push_back(s.p);
    snap.distances.push_back(s.d);
    snap.visible.push_back(above_min_elevation(s.p, window) ? 1 : 0);
  }
  return snap;
}

EmpiricalVisibility empirical_visibility(const OrbitGeometry& orbit,
                                         const VisibilityWindow& window,
                                         double lambda, const McConfig& cfg) {
  struct Acc {
    std::uint64_t visible_trials = 0;
    std::uint64_t visible_sats = 0;
    std::uint64_t total_sats = 0;
  };
  const auto parts = run_batches(
      cfg, Acc{}, [&](RandomSource& rng, std::uint64_t n, Acc& acc) {
        OrbitSampler sampler(orbit, window, lambda);
        std::vector<double> d;
        for (std::uint64_t i = 0; i < n; ++i) {
          d.clear();
          acc.total_sats += static_cast<std::uint64_t>(sampler.draw(rng, d));
          acc.visible_sats += d.size();
          if (!d.empty()) ++acc.visible_trials;
        }
      });
  Acc total;
  for (const auto& p : parts) {
    total.visible_trials += p.visible_trials;
    total.visible_sats += p.visible_sats;
    total.total_sats += p.total_sats;
  }
  const double n = static_cast<double>(cfg.trials);
  return {static_cast<double>(total.visible_trials) / n,
          static_cast<double>(total.visible_sats) / n,
          static_cast<double>(total.total_sats) / n, cfg.trials};
}

EmpiricalCcdf empirical_nearest_ccdf(const OrbitGeometry& orbit,
                                     const VisibilityWindow& window,
                                     double lambda, std::span<const double> grid,
                                     const McConfig& cfg) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("CCDF grid must be sorted ascending");
  }
  struct Acc {
    std::uint64_t conditioned = 0;
    // bucket[i]: trials whose nearest distance exceeds exactly the first i
    // grid points.
    std::vector<std::uint64_t> bucket;
  };
  Acc proto;
  proto.bucket.assign(grid.size() + 1, 0);
  const auto parts = run_batches(
      cfg, proto, [&](RandomSource& rng, std::uint64_t n, Acc& acc) {
        OrbitSampler sampler(orbit, window, lambda);
        std::vector<double> d;
        for (std::uint64_t i = 0; i < n; ++i) {
          d.clear();
          sampler.draw(rng, d);
          if (d.empty()) continue;
          ++acc.conditioned;
          const double nearest = *std::min_element(d.begin(), d.end());
          // number of grid points r with nearest > r
          const auto k = std::lower_bound(grid.begin(), grid.end(), nearest) -
                         grid.begin();
          ++acc.bucket[static_cast<std::size_t>(k)];
        }
      });
  Acc total = proto;
  for (const auto& p : parts) {
    total.conditioned += p.conditioned;
    for (std::size_t i = 0; i < total.bucket.size(); ++i) {
      total.bucket[i] += p.bucket[i];
    }
  }
  require_conditioning(total.conditioned);

  EmpiricalCcdf out{{grid.begin(), grid.end()}, {}, total.conditioned,
                    cfg.trials};
  // P[nearest > grid[j]] = sum_{k > j} bucket[k]
  std::uint64_t above = total.conditioned;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    above -= total.bucket[j];
    out.values.push_back(static_cast<double>(above) /
                         static_cast<double>(total.conditioned));
  }
  return out;
}

std::vector<std::vector<double>> empirical_laplace(
    const OrbitGeometry& orbit, const VisibilityWindow& window, double lambda,
    const ChannelParams& channel, std::span<const double> radii,
    std::span<const double> s_values, const McConfig& cfg) {
  channel.validate();
  const std::size_t nr = radii.size();
  const std::size_t ns = s_values.size();
  struct Acc {
    std::vector<double> sums;
  };
  Acc proto;
  proto.sums.assign(nr * ns, 0.0);
  const auto parts = run_batches(
      cfg, proto, [&](RandomSource& rng, std::uint64_t n, Acc& acc) {
        OrbitSampler sampler(orbit, window, lambda);
        std::gamma_distribution<double> fading(channel.m, 1.0 / channel.m);
        std::vector<double> d;
        std::vector<double> power;
        std::vector<double> interference(nr);
        for (std::uint64_t i = 0; i < n; ++i) {
          d.clear();
          sampler.draw(rng, d);
          power.clear();
          for (double di : d) {
            power.push_back(channel.g_i_bar * fading(rng) *
                            std::pow(di, -channel.alpha));
          }
          std::fill(interference.begin(), interference.end(), 0.0);
          for (std::size_t k = 0; k < d.size(); ++k) {
            for (std::size_t a = 0; a < nr; ++a) {
              if (d[k] > radii[a]) interference[a] += power[k];
            }
          }
          for (std::size_t a = 0; a < nr; ++a) {
            for (std::size_t b = 0; b < ns; ++b) {
              acc.sums[a * ns + b] += std::exp(-s_values[b] * interference[a]);
            }
          }
        }
      });
  std::vector<double> totals(nr * ns, 0.0);
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < totals.size(); ++k) totals[k] += p.sums[k];
  }
  std::vector<std::vector<double>> out(nr, std::vector<double>(ns));
  for (std::size_t a = 0; a < nr; ++a) {
    for (std::size_t b = 0; b < ns; ++b) {
      out[a][b] = totals[a * ns + b] / static_cast<double>(cfg.trials);
    }
  }
  return out;
}

McCoverage empirical_sir_coverage(const OrbitGeometry& orbit,
                                  const VisibilityWindow& window,
                                  double lambda, const ChannelParams& channel,
                                  std::span<const double> thresholds_db,
                                  const McConfig& cfg) {
  channel.validate();
  const auto gammas = to_linear(thresholds_db);
  CoverageCounts proto;
  proto.covered.assign(gammas.size(), 0);
  const auto parts = run_batches(
      cfg, proto, [&](RandomSource& rng, std::uint64_t n, CoverageCounts& acc) {
        OrbitSampler sampler(orbit, window, lambda);
        std::gamma_distribution<double> fading(channel.m, 1.0 / channel.m);
        std::vector<double> d;
        acc.trials += n;
        for (std::uint64_t i = 0; i < n; ++i) {
          d.clear();
          sampler.draw(rng, d);
          if (d.empty()) continue;
          ++acc.conditioned;
          const std::size_t serving = nearest_index(d);
          double signal = 0.0;
          double interference = 0.0;
          for (std::size_t k = 0; k < d.size(); ++k) {
            const double rx = fading(rng) * std::pow(d[k], -channel.alpha);
            if (k == serving) {
              signal = rx;
            } else {
              interference += channel.g_i_bar * rx;
            }
          }
          const double sir = interference > 0.0
                                 ? signal / interference
                                 : std::numeric_limits<double>::infinity();
          count_thresholds(sir, gammas, acc.covered);
        }
      });
  CoverageCounts total = proto;
  for (const auto& p : parts) total.merge(p);
  auto result = finish(CurveKind::kSirMc, thresholds_db, total, cfg);
  return result;
}

McNoiseCoverage empirical_snr_sinr_coverage(
    const OrbitGeometry& orbit, const VisibilityWindow& window, double lambda,
    const ChannelParams& channel, const LinkBudget& budget,
    std::span<const double> thresholds_db, const McConfig& cfg) {
  channel.validate();
  budget.validate();
  const auto gammas = to_linear(thresholds_db);
  const double kappa = budget.noise_to_signal();
  struct Acc {
    CoverageCounts snr, sinr, sir;
  };
  Acc proto;
  proto.snr.covered.assign(gammas.size(), 0);
  proto.sinr.covered = proto.sir.covered = proto.snr.covered;
  const auto parts = run_batches(
      cfg, proto, [&](RandomSource& rng, std::uint64_t n, Acc& acc) {
        OrbitSampler sampler(orbit, window, lambda);
        std::gamma_distribution<double> fading(channel.m, 1.0 / channel.m);
        std::vector<double> d;
        acc.snr.trials += n;
        acc.sinr.trials += n;
        acc.sir.trials += n;
        for (std::uint64_t i = 0; i < n; ++i) {
          d.clear();
          sampler.draw(rng, d);
          if (d.empty()) continue;
          ++acc.snr.conditioned;
          ++acc.sinr.conditioned;
          ++acc.sir.conditioned;
          const std::size_t serving = nearest_index(d);
          double signal = 0.0;
          double interference = 0.0;
          for (std::size_t k = 0; k < d.size(); ++k) {
            const double rx =
                fading(rng) * std::pow(d[k] * 1e3, -channel.alpha);
            if (k == serving) {
              signal = rx;
            } else {
              interference += channel.g_i_bar * rx;
            }
          }
          const double sir = interference > 0.0
                                 ? signal / interference
                                 : std::numeric_limits<double>::infinity();
          count_thresholds(signal / kappa, gammas, acc.snr.covered);
          count_thresholds(signal / (interference + kappa), gammas,
                           acc.sinr.covered);
          count_thresholds(sir, gammas, acc.sir.covered);
        }
      });
  Acc total = proto;
  for (const auto& p : parts) {
    total.snr.merge(p.snr);
    total.sinr.merge(p.sinr);
    total.sir.merge(p.sir);
  }
  McNoiseCoverage out{finish(CurveKind::kSnrMc, thresholds_db, total.snr, cfg),
                      finish(CurveKind::kSinrMc, thresholds_db, total.sinr, cfg),
                      finish(CurveKind::kSirMc, thresholds_db, total.sir, cfg)};
  for (auto* c : {&out.snr, &out.sinr}) {
    c->conditional.metadata["pathloss_distance_unit"] = "m";
    c->unconditional.metadata["pathloss_distance_unit"] = "m";
  }
  return out;
}

McMaxSirCoverage empirical_max_sir_coverage(
    const ConstellationSpec& spec, std::span<const double> thresholds_db,
    const McConfig& cfg) {
  spec.validate();
  const auto& channel = spec.channel;
  const auto gammas = to_linear(thresholds_db);
  struct Acc {
    std::uint64_t all_visible = 0;
    std::vector<std::uint64_t> covered_all_visible;
    std::vector<std::uint64_t> covered_any;
  };
  Acc proto;
  proto.covered_all_visible.assign(gammas.size(), 0);
  proto.covered_any.assign(gammas.size(), 0);
  const auto parts = run_batches(
      cfg, proto, [&](RandomSource& rng, std::uint64_t n, Acc& acc) {
        std::vector<OrbitSampler> samplers;
        samplers.reserve(spec.orbits.size());
        for (const auto& o : spec.orbits) {
          samplers.emplace_back(o.orbit, spec.window, o.lambda);
        }
        std::gamma_distribution<double> fading(channel.m, 1.0 / channel.m);
        std::vector<double> d;
        for (std::uint64_t i = 0; i < n; ++i) {
          bool all_visible = true;
          bool any_visible = false;
          double best = -1.0;
          for (auto& sampler : samplers) {
            d.clear();
            sampler.draw(rng, d);
            if (d.empty()) {
              all_visible = false;
              continue;
            }
            any_visible = true;
            const std::size_t serving = nearest_index(d);
            double signal = 0.0;
            double interference = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) {
              const double rx = fading(rng) * std::pow(d[k], -channel.alpha);
              if (k == serving) {
                signal = rx;
              } else {
                interference += channel.g_i_bar * rx;
              }
            }
            const double sir = interference > 0.0
                                   ? signal / interference
                                   : std::numeric_limits<double>::infinity();
            best = std::max(best, sir);
          }
          if (any_visible) count_thresholds(best, gammas, acc.covered_any);
          if (all_visible) {
            ++acc.all_visible;
            count_thresholds(best, gammas, acc.covered_all_visible);
          }
        }
      });
  Acc total = proto;
  for (const auto& p : parts) {
    total.all_visible += p.all_visible;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      total.covered_all_visible[i] += p.covered_all_visible[i];
      total.covered_any[i] += p.covered_any[i];
    }
  }
  require_conditioning(total.all_visible);
  McMaxSirCoverage out{
      make_curve(CurveKind::kMaxSirMc, true, thresholds_db,
                 total.covered_all_visible, total.all_visible, cfg),
      make_curve(CurveKind::kMaxSirMc, false, thresholds_db,
                 total.covered_all_visible, cfg.trials, cfg),
      make_curve(CurveKind::kMaxSirAnyOrbitMc, false, thresholds_db,
                 total.covered_any, cfg.trials, cfg),
      static_cast<double>(total.all_visible) / static_cast<double>(cfg.trials),
      total.all_visible};
  out.any_orbit.metadata["definition"] = "any-orbit-visible (non product form)";
  return out;
}

}  // namespace leocov

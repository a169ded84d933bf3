#ifndef LEOCOV_VALIDATION_HPP
#define LEOCOV_VALIDATION_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

// Acceptance suite: analytic engine against Monte-Carlo and brute-force
// oracles. Every tolerance, trial count and parameter set is fixed here;
// only the seed can be changed.

namespace leocov {

/// One numeric comparison. `relation` is "<=" or ">=" against `limit`.
struct CheckResult {
  std::string name;
  double observed = 0.0;
  std::string relation;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;

  bool passed() const;
};

struct ValidationOptions {
  std::uint64_t seed = 20240917;
  unsigned threads = 0;
  std::ostream* log = nullptr;
};

/// Criteria run by run_validation(). Determinism of the report itself is
/// checked by running the suite twice (see the acceptance test).
inline constexpr int kFirstCriterion = 1;
inline constexpr int kLastCriterion = 8;

CriterionResult run_criterion(int id, const ValidationOptions& options);

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool passed() const;
  /// Deterministic JSON text: no timings, fixed key order.
  std::string to_json() const;
};

/// Called after each criterion with its wall time in seconds.
using CriterionTimer = std::function<void(const CriterionResult&, double)>;

/// Runs the listed criteria (all when `ids` is empty).
ValidationReport run_validation(const ValidationOptions& options,
                                std::span<const int> ids = {},
                                const CriterionTimer& on_done = {});

/// Runs the suite and writes out_dir/validation_report.json. Returns 0 when
/// every check passes, 1 otherwise.
int cmd_validate(const ValidationOptions& options,
                 const std::filesystem::path& out_dir,
                 std::span<const int> ids = {});

}  // namespace leocov

#endif  // LEOCOV_VALIDATION_HPP

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "softdeco/kinematics.hpp"
#include "softdeco/numerics.hpp"

namespace softdeco::checks {

/// Deliberate defects for negative-control runs.
enum class Fault {
  none,
  metric_sign,  ///< conservation test contracts with a Euclidean metric
};

struct CheckOptions {
  std::uint64_t seed = 20240611;
  QuadratureSpec quadrature{};
  Fault fault = Fault::none;
};

struct CheckResult {
  int number = 0;
  std::string id;       ///< stable, grep-friendly
  bool passed = false;
  std::string detail;   ///< measured values against their bounds
  double seconds = 0.0;
};

struct CheckInfo {
  int number;
  const char* id;
  const char* title;
};

/// The suite in its fixed order.
const std::vector<CheckInfo>& catalog();

/// Run one check by number (1-based). Throws std::out_of_range for an unknown number.
CheckResult run_check(int number, const CheckOptions& opt);

/// Run every check; `threads` > 1 spreads them over worker threads, the
/// result order stays the catalog order.
std::vector<CheckResult> run_all(const CheckOptions& opt, int threads = 1);

// ---- generators shared with the property tests --------------------------

/// Uniformly distributed unit vector.
Vec3 random_direction(std::mt19937_64& rng);

/// Worldline with `kinks` interior kinks (so kinks + 1 segments), speeds
/// below max_speed, proper durations in [0.1, 2] and a start event within
/// the unit box.
Worldline random_worldline(std::mt19937_64& rng, int kinks, double max_speed = 0.9, double charge = 1.0);

/// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace softdeco::checks

#pragma once

#include <cmath>

#include "sppa/errors.hpp"

namespace sppa {

// Power-law step sequence lambda_n = lambda0 * (n + n0 + 1)^(-gamma).
// gamma in (1/2, 1] guarantees sum lambda_n = inf and sum lambda_n^2 < inf.
struct StepSchedule {
  double lambda0 = 1.0;
  double gamma = 0.75;
  long n0 = 0;

  StepSchedule() = default;
  StepSchedule(double lambda0_, double gamma_, long n0_ = 0)
      : lambda0(lambda0_), gamma(gamma_), n0(n0_) {
    if (!(lambda0 > 0.0)) throw ConfigError("schedule: lambda0 must be > 0");
    if (!(gamma > 0.5) || !(gamma <= 1.0))
      throw ConfigError(
          "schedule: gamma must lie in (0.5, 1] so that the steps are "
          "square-summable but not summable");
    if (n0 < 0) throw ConfigError("schedule: n0 must be >= 0");
  }

  double lambda(long n) const { return lambda0 * std::pow(static_cast<double>(n + n0 + 1), -gamma); }
};

}  // namespace sppa

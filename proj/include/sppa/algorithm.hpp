#pragma once

#include <chrono>
#include <functional>
#include <optional>

#include "sppa/dykstra.hpp"
#include "sppa/random_family.hpp"
#include "sppa/schedule.hpp"

namespace sppa {

struct SppaState {
  long n = 0;          // completed iterations
  Vector x;            // current iterate
  Vector xbar;         // lambda-weighted ergodic average
  double lambda_sum = 0.0;

  explicit SppaState(Vector x0) : x(std::move(x0)), xbar(Vector::Zero(x.size())) {}
};

// Incremental lambda-weighted mean; algebraically equal to the batch formula.
inline std::pair<Vector, double> update_average(const Vector& xbar, double lambda_sum,
                                                const Vector& x_new, double lambda_new) {
  const double total = lambda_sum + lambda_new;
  return {xbar + (lambda_new / total) * (x_new - xbar), total};
}

// One iteration x <- J_{lambda_n}(A(xi, .), x); returns the sampled index.
inline int sppa_step(SppaState& state, const RandomFamily& family, const StepSchedule& schedule,
                     SampleStream& stream) {
  require_dim(state.x, family.dim, "sppa_step state");
  const double lam = schedule.lambda(state.n);
  const int idx = sample(family, stream);
  state.x = resolvent(family.members[static_cast<size_t>(idx)], lam, state.x);
  std::tie(state.xbar, state.lambda_sum) =
      update_average(state.xbar, state.lambda_sum, state.x, lam);
  ++state.n;
  return idx;
}

struct DiagnosticsConfig {
  std::optional<Vector> x_star;            // known solution, enables dist_to_solution
  std::optional<Intersection> domain;      // essential intersection of member domains
  std::optional<Intersection> feasible;    // feasible set for d(xbar, X) reporting
  std::function<double(const Vector&)> objective;  // F(xbar) reporting, may be empty
  long stride = 0;                         // 0 = auto
  long average_burn_in = 0;                // restart the ergodic average at this iteration
};

struct TraceRow {
  long n = 0;
  double lambda = 0.0;
  int xi_index = 0;
  std::optional<double> dist_to_solution;
  std::optional<double> dist_to_domain;
  std::optional<double> dist_avg_to_feasible;
  std::optional<double> objective_avg;
  double norm_x = 0.0;
};

struct RunReport {
  std::vector<TraceRow> rows;
  // Full per-step series, kept when the matching diagnostic is configured.
  std::vector<double> solution_dist_series;
  std::vector<double> domain_dist_series;
  std::vector<double> domain_ratio_series;  // sum_k d(x_k, D) / sum_k lambda_k
  Vector final_x, final_xbar;
  long iterations = 0;
  uint64_t seed = 0;
  double wall_seconds = 0.0;
};

inline long auto_stride(long iterations) {
  return iterations <= 10000 ? 1 : (iterations + 9999) / 10000;
}

inline RunReport run(const RandomFamily& family, const StepSchedule& schedule, const Vector& x0,
                     long iterations, SampleStream& stream,
                     const DiagnosticsConfig& diag = {}) {
  if (iterations < 1) throw ConfigError("run: iterations must be >= 1");
  require_dim(x0, family.dim, "x0");
  require_finite(x0, "x0");
  const auto t0 = std::chrono::steady_clock::now();
  const long stride = diag.stride > 0 ? diag.stride : auto_stride(iterations);

  SppaState state(x0);
  RunReport report;
  report.seed = stream.seed();
  report.iterations = iterations;
  double cum_domain_dist = 0.0, cum_lambda = 0.0;

  for (long k = 1; k <= iterations; ++k) {
    const double lam = schedule.lambda(state.n);
    if (state.n == diag.average_burn_in && diag.average_burn_in > 0) {
      state.xbar.setZero();
      state.lambda_sum = 0.0;
    }
    const int idx = sppa_step(state, family, schedule, stream);
    if (!state.x.allFinite())
      throw NonFiniteIterate("run: iterate left the finite range at n=" + std::to_string(k));
    cum_lambda += lam;

    if (diag.x_star) report.solution_dist_series.push_back((state.x - *diag.x_star).norm());
    if (diag.domain) {
      const double d = distance_to(*diag.domain, state.x);
      cum_domain_dist += d;
      report.domain_dist_series.push_back(d);
      report.domain_ratio_series.push_back(cum_domain_dist / cum_lambda);
    }

    if ((iterations - k) % stride == 0) {
      TraceRow row;
      row.n = k;
      row.lambda = lam;
      row.xi_index = idx;
      row.norm_x = state.x.norm();
      if (diag.x_star) row.dist_to_solution = report.solution_dist_series.back();
      if (diag.domain) row.dist_to_domain = report.domain_dist_series.back();
      if (diag.feasible) row.dist_avg_to_feasible = distance_to(*diag.feasible, state.xbar);
      if (diag.objective) row.objective_avg = diag.objective(state.xbar);
      report.rows.push_back(std::move(row));
    }
  }
  report.final_x = state.x;
  report.final_xbar = state.xbar;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

struct FejerDiagnostic {
  double max_increase = 0.0;             // largest one-step growth of ||x_n - x*||
  double tail_positive_variation = 0.0;  // sum of positive increments over the last half
};

inline FejerDiagnostic fejer_diagnostic(const std::vector<double>& solution_dist_series) {
  FejerDiagnostic d;
  const size_t n = solution_dist_series.size();
  for (size_t k = 1; k < n; ++k) {
    const double inc = solution_dist_series[k] - solution_dist_series[k - 1];
    d.max_increase = std::max(d.max_increase, inc);
    if (k >= n / 2 && inc > 0.0) d.tail_positive_variation += inc;
  }
  return d;
}

struct DomainDistanceDiagnostic {
  double sup_ratio = 0.0;    // sup_n sum_k d(x_k, D) / sum_k lambda_k
  double final_ratio = 0.0;
};

inline DomainDistanceDiagnostic domain_distance_diagnostic(
    const std::vector<double>& domain_ratio_series) {
  DomainDistanceDiagnostic d;
  for (double r : domain_ratio_series) d.sup_ratio = std::max(d.sup_ratio, r);
  if (!domain_ratio_series.empty()) d.final_ratio = domain_ratio_series.back();
  return d;
}

}  // namespace sppa

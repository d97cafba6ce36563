#pragma once

#include "sppa/algorithm.hpp"

namespace sppa {

struct ProblemInstance {
  RandomFamily family;
  std::optional<Vector> known_solution;
  // Weighted objective terms; F(x) = sum_i weight_i * f_i(x).
  std::vector<std::pair<double, ConvexFn>> objective;
  std::optional<Intersection> feasible_set;
  bool strong_convergence = false;  // acceptance checks the pointwise iterate
};

inline double objective_value(const ProblemInstance& prob, const Vector& x) {
  double s = 0.0;
  for (const auto& [w, f] : prob.objective) s += w * value(f, x);
  return s;
}

inline DiagnosticsConfig default_diagnostics(const ProblemInstance& prob) {
  DiagnosticsConfig diag;
  diag.x_star = prob.known_solution;
  diag.feasible = prob.feasible_set;
  if (!prob.family.common_full_domain && prob.feasible_set) diag.domain = prob.feasible_set;
  if (!prob.objective.empty())
    diag.objective = [&prob](const Vector& x) { return objective_value(prob, x); };
  return diag;
}

// Reference solver for mean quadratics over an intersection.  Fixed step 1/L.
inline Vector projected_gradient_oracle(const Matrix& Q, const Vector& b,
                                        const Intersection& feasible, double tol = 1e-10,
                                        long max_iter = 2000000) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
  const double L = std::max(es.eigenvalues().maxCoeff(), 1e-12);
  Vector x = dykstra_project(feasible, Vector::Zero(b.size())).point;
  for (long it = 0; it < max_iter; ++it) {
    const Vector g = Q * x + b;
    const Vector xn = dykstra_project(feasible, x - g / L, tol * 1e-2).point;
    const double res = (x - xn).norm();
    x = xn;
    if (res <= tol) return x;
  }
  throw NoConvergence("projected_gradient_oracle: residual did not reach tolerance");
}

inline double kkt_residual(const Matrix& Q, const Vector& b, const Intersection& feasible,
                           const Vector& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
  const double L = std::max(es.eigenvalues().maxCoeff(), 1e-12);
  return (x - dykstra_project(feasible, x - (Q * x + b) / L, 1e-12).point).norm();
}

// Random convex feasibility: SPPA over normal cones = random projections.
inline ProblemInstance build_feasibility(std::vector<ConvexSet> sets, Vector weights) {
  std::vector<OperatorSpec> members;
  members.reserve(sets.size());
  Intersection inter;
  for (ConvexSet& s : sets) {
    validate(s);
    inter.members.push_back(s);
    members.push_back(NormalCone{std::move(s)});
  }
  ProblemInstance prob{make_family(std::move(members), std::move(weights))};
  try {
    (void)dykstra_project(inter, Vector::Zero(prob.family.dim));
  } catch (const NoConvergence&) {
    throw EmptyIntersection("build_feasibility: member sets appear to have empty intersection");
  }
  prob.feasible_set = std::move(inter);
  return prob;
}

// min F(x) = sum_s w_s f_s(x) over the intersection of the given sets,
// realized as plain SPPA over the product index set: with probability p0 a
// prox step on a sampled f_s, otherwise a projection onto a sampled set.
inline ProblemInstance build_constrained_program(
    const std::vector<std::pair<double, ConvexFn>>& f_pool, std::vector<ConvexSet> sets,
    double p0) {
  if (!(p0 > 0.0) || !(p0 < 1.0)) throw ConfigError("constrained_program: p0 must be in (0,1)");
  if (f_pool.empty() || sets.empty())
    throw ConfigError("constrained_program: needs functions and sets");
  double wsum = 0.0;
  for (const auto& [w, f] : f_pool) {
    if (!(w > 0.0)) throw ConfigError("constrained_program: function weights must be > 0");
    if (fn_domain(f)) throw ConfigError("constrained_program: pool functions must be full-domain");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw ConfigError("constrained_program: function weights must sum to 1");

  std::vector<OperatorSpec> members;
  Vector weights(static_cast<Eigen::Index>(f_pool.size() + sets.size()));
  Eigen::Index k = 0;
  for (const auto& [w, f] : f_pool) {
    members.push_back(Subdifferential{f});
    weights[k++] = p0 * w;
  }
  const double pproj = (1.0 - p0) / static_cast<double>(sets.size());
  Intersection inter;
  for (ConvexSet& s : sets) {
    inter.members.push_back(s);
    members.push_back(NormalCone{std::move(s)});
    weights[k++] = pproj;
  }

  ProblemInstance prob{make_family(std::move(members), std::move(weights))};
  prob.feasible_set = inter;
  for (const auto& [w, f] : f_pool) prob.objective.emplace_back(w, f);

  // Mean quadratic, when the pool is all quadratic, enables the oracle solution.
  const Eigen::Index d = prob.family.dim;
  Matrix Qbar = Matrix::Zero(d, d);
  Vector bbar = Vector::Zero(d);
  bool all_quadratic = true;
  for (const auto& [w, f] : f_pool) {
    if (const auto* q = std::get_if<Quadratic>(&f)) {
      Qbar += w * q->Q;
      bbar += w * q->b;
    } else {
      all_quadratic = false;
      break;
    }
  }
  if (all_quadratic) prob.known_solution = projected_gradient_oracle(Qbar, bbar, inter);
  return prob;
}

// Stochastic saddle point search; solution from the mean linear system.
inline ProblemInstance build_saddle(std::vector<SaddleBilinear> pool, Vector weights) {
  if (pool.empty()) throw ConfigError("saddle: empty pool");
  if (weights.size() != static_cast<Eigen::Index>(pool.size()))
    throw DimensionMismatch("saddle: weights/pool count mismatch");
  const Eigen::Index d = pool.front().dx() + pool.front().dy();
  Matrix Tbar = Matrix::Zero(d, d);
  Vector vbar = Vector::Zero(d);
  std::vector<OperatorSpec> members;
  for (size_t i = 0; i < pool.size(); ++i) {
    validate(OperatorSpec{pool[i]});
    Tbar += weights[static_cast<Eigen::Index>(i)] * pool[i].full_matrix();
    vbar += weights[static_cast<Eigen::Index>(i)] * pool[i].full_offset();
    members.push_back(std::move(pool[i]));
  }
  Eigen::FullPivLU<Matrix> lu(Tbar);
  if (!lu.isInvertible()) throw SingularMean("saddle: mean operator is singular (non-unique saddle)");
  const Vector zstar = lu.solve(-vbar);
  ProblemInstance prob{make_family(std::move(members), std::move(weights))};
  prob.known_solution = zstar;
  return prob;
}

// Affine pool whose mean has strongly monotone symmetric part; the iterates
// themselves converge, so acceptance checks the pointwise error.
inline ProblemInstance build_strongly_monotone(std::vector<AffineMonotone> pool, Vector weights,
                                               double min_modulus = 0.0) {
  if (pool.empty()) throw ConfigError("strongly_monotone: empty pool");
  if (weights.size() != static_cast<Eigen::Index>(pool.size()))
    throw DimensionMismatch("strongly_monotone: weights/pool count mismatch");
  const Eigen::Index d = pool.front().b.size();
  Matrix Mbar = Matrix::Zero(d, d);
  Vector bbar = Vector::Zero(d);
  std::vector<OperatorSpec> members;
  for (size_t i = 0; i < pool.size(); ++i) {
    validate(OperatorSpec{pool[i]});
    Mbar += weights[static_cast<Eigen::Index>(i)] * pool[i].M;
    bbar += weights[static_cast<Eigen::Index>(i)] * pool[i].b;
    members.push_back(std::move(pool[i]));
  }
  const double alpha = min_symmetric_eigenvalue(Mbar);
  if (alpha <= std::max(min_modulus, 0.0))
    throw ConfigError("strongly_monotone: mean modulus " + std::to_string(alpha) +
                      " below required minimum");
  Eigen::PartialPivLU<Matrix> lu(Mbar);
  const Vector xstar = lu.solve(-bbar);
  if ((Mbar * xstar + bbar).norm() > 1e-9 * (1.0 + bbar.norm()))
    throw SingularSystem("strongly_monotone: mean solve failed");
  ProblemInstance prob{make_family(std::move(members), std::move(weights))};
  prob.known_solution = xstar;
  prob.strong_convergence = true;
  return prob;
}

// Residual of the known-solution certificate: mean-operator norm when the
// members are single-valued at x*, else the KKT residual of the mean
// quadratic over the feasible set.
inline double certificate_residual(const ProblemInstance& prob) {
  if (!prob.known_solution) throw ConfigError("certificate: no known solution recorded");
  const Vector& xs = *prob.known_solution;
  try {
    return mean_apply(prob.family, xs).norm();
  } catch (const Error&) {
    // constrained instances: normal cones are set-valued at the active boundary
  }
  if (!prob.feasible_set || prob.objective.empty())
    throw ConfigError("certificate: no verifiable certificate for this instance");
  const Eigen::Index d = prob.family.dim;
  Matrix Qbar = Matrix::Zero(d, d);
  Vector bbar = Vector::Zero(d);
  for (const auto& [w, f] : prob.objective) {
    const auto* q = std::get_if<Quadratic>(&f);
    if (!q) throw ConfigError("certificate: non-quadratic objective has no KKT oracle");
    Qbar += w * q->Q;
    bbar += w * q->b;
  }
  return kkt_residual(Qbar, bbar, *prob.feasible_set, xs);
}

inline void verify_certificate(const ProblemInstance& prob, double tol = 1e-9) {
  const double r = certificate_residual(prob);
  if (!(r <= tol))
    throw NoConvergence("certificate residual " + std::to_string(r) + " exceeds tolerance");
}

}  // namespace sppa

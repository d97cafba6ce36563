#pragma once

#include "sppa/sets.hpp"

namespace sppa {

struct ProjectionResult {
  Vector point;
  double distance = 0.0;
};

// Dykstra's algorithm: converges to the exact projection onto the
// intersection, not merely to some feasible point.
inline ProjectionResult dykstra_project(const Intersection& inter, const Vector& x,
                                        double tol = 1e-10, long max_iter = 20000) {
  const size_t m = inter.members.size();
  if (m == 1) {
    const Vector p = project(inter.members[0], x);
    return {p, (x - p).norm()};
  }
  Vector p = x;
  std::vector<Vector> corrections(m, Vector::Zero(x.size()));
  for (long cycle = 0; cycle < max_iter; ++cycle) {
    const Vector prev = p;
    for (size_t i = 0; i < m; ++i) {
      const Vector z = p + corrections[i];
      const Vector pn = project(inter.members[i], z);
      corrections[i] = z - pn;
      p = pn;
    }
    double infeas = 0.0;
    for (const ConvexSet& s : inter.members)
      infeas = std::max(infeas, (p - project(s, p)).norm());
    if ((p - prev).norm() <= tol && infeas <= tol) return {p, (x - p).norm()};
  }
  throw NoConvergence("dykstra_project: no convergence (empty or irregular intersection?)");
}

inline double distance_to(const Intersection& inter, const Vector& x, double tol = 1e-10) {
  // cheap exit when x is already feasible
  bool inside = true;
  for (const ConvexSet& s : inter.members)
    if (!contains(s, x, 1e-14)) {
      inside = false;
      break;
    }
  if (inside) return 0.0;
  return dykstra_project(inter, x, tol).distance;
}

}  // namespace sppa

#pragma once

#include <algorithm>
#include <variant>
#include <vector>

#include "sppa/vector.hpp"

namespace sppa {

struct Box;
struct Halfspace;
struct Hyperplane;
struct Ball;
struct Intersection;

using ConvexSet = std::variant<Box, Halfspace, Hyperplane, Ball, Intersection>;

struct Box {
  Vector lower, upper;
};

// { x : normal.x <= offset }
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

// { x : normal.x == offset }
struct Hyperplane {
  Vector normal;
  double offset = 0.0;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

struct Intersection {
  std::vector<ConvexSet> members;
};

inline Eigen::Index set_dim(const ConvexSet& s);

inline void validate(const ConvexSet& s) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Box>) {
          if (v.lower.size() != v.upper.size()) throw DimensionMismatch("box bounds");
          if (v.lower.size() < 1) throw ConfigError("box: dimension must be >= 1");
          if ((v.lower.array() > v.upper.array()).any())
            throw ConfigError("box: lower must be <= upper componentwise");
          require_finite(v.lower, "box lower");
          require_finite(v.upper, "box upper");
        } else if constexpr (std::is_same_v<T, Halfspace> || std::is_same_v<T, Hyperplane>) {
          require_finite(v.normal, "normal");
          if (v.normal.size() < 1 || v.normal.norm() == 0.0)
            throw ConfigError("halfspace/hyperplane: normal must be nonzero");
          if (!std::isfinite(v.offset)) throw ConfigError("offset must be finite");
        } else if constexpr (std::is_same_v<T, Ball>) {
          require_finite(v.center, "ball center");
          if (v.center.size() < 1) throw ConfigError("ball: dimension must be >= 1");
          if (!(v.radius > 0.0)) throw ConfigError("ball: radius must be > 0");
        } else {
          if (v.members.empty()) throw ConfigError("intersection: needs at least one member");
          const Eigen::Index d = set_dim(v.members.front());
          for (const ConvexSet& m : v.members) {
            validate(m);
            if (set_dim(m) != d) throw DimensionMismatch("intersection member dimensions differ");
            if (std::holds_alternative<Intersection>(m))
              throw ConfigError("intersection: nested intersections are not supported");
          }
        }
      },
      s);
}

inline Eigen::Index set_dim(const ConvexSet& s) {
  return std::visit(
      [](const auto& v) -> Eigen::Index {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Box>) return v.lower.size();
        else if constexpr (std::is_same_v<T, Halfspace> || std::is_same_v<T, Hyperplane>)
          return v.normal.size();
        else if constexpr (std::is_same_v<T, Ball>) return v.center.size();
        else return set_dim(v.members.front());
      },
      s);
}

// Exact nearest point; Intersection is handled by dykstra_project instead.
inline Vector project(const ConvexSet& s, const Vector& x) {
  require_dim(x, set_dim(s), "project");
  return std::visit(
      [&x](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Box>) {
          return x.cwiseMax(v.lower).cwiseMin(v.upper);
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          const double viol = v.normal.dot(x) - v.offset;
          if (viol <= 0.0) return x;
          return x - (viol / v.normal.squaredNorm()) * v.normal;
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          const double r = v.normal.dot(x) - v.offset;
          return x - (r / v.normal.squaredNorm()) * v.normal;
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Vector u = x - v.center;
          const double n = u.norm();
          if (n <= v.radius) return x;
          return v.center + (v.radius / n) * u;
        } else {
          throw UnsupportedSet("project: use dykstra_project for intersections");
        }
      },
      s);
}

inline bool contains(const ConvexSet& s, const Vector& x, double tol = 1e-9) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Intersection>) {
          return std::all_of(v.members.begin(), v.members.end(),
                             [&](const ConvexSet& m) { return contains(m, x, tol); });
        } else {
          return (x - project(s, x)).norm() <= tol;
        }
      },
      s);
}

// Strict interior membership; hyperplanes have empty interior.
inline bool strictly_inside(const ConvexSet& s, const Vector& x, double margin = 1e-9) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Box>) {
          return ((x - v.lower).array() > margin).all() && ((v.upper - x).array() > margin).all();
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          return v.normal.dot(x) - v.offset < -margin * v.normal.norm();
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          return false;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - v.center).norm() < v.radius - margin;
        } else {
          return std::all_of(v.members.begin(), v.members.end(),
                             [&](const ConvexSet& m) { return strictly_inside(m, x, margin); });
        }
      },
      s);
}

// argmin_{n in N_S(x)} ||g + n||, for x in S.  Used for least-norm subgradients
// of indicator-bearing composites.
inline Vector normal_cone_least_norm(const ConvexSet& s, const Vector& x, const Vector& g,
                                     double tol = 1e-9) {
  require_dim(x, set_dim(s), "normal_cone_least_norm");
  if (!contains(s, x, tol)) throw DomainError("normal_cone_least_norm: point outside the set");
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Box>) {
          Vector r = g;
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            const bool at_lo = x[i] - v.lower[i] <= tol;
            const bool at_hi = v.upper[i] - x[i] <= tol;
            if (at_lo && at_hi) r[i] = 0.0;                    // pinned coordinate, normal line
            else if (at_lo) r[i] = std::min(g[i], 0.0);        // cone (-inf, 0]
            else if (at_hi) r[i] = std::max(g[i], 0.0);        // cone [0, +inf)
          }
          return r;
        } else if constexpr (std::is_same_v<T, Halfspace>) {
          if (v.offset - v.normal.dot(x) > tol * v.normal.norm()) return g;
          const double t = std::max(0.0, -g.dot(v.normal) / v.normal.squaredNorm());
          return g + t * v.normal;
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          return g - (g.dot(v.normal) / v.normal.squaredNorm()) * v.normal;
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Vector u = x - v.center;
          if (v.radius - u.norm() > tol) return g;
          const Vector nrm = u / u.norm();
          const double t = std::max(0.0, -g.dot(nrm));
          return g + t * nrm;
        } else {
          throw UnsupportedSet("normal_cone_least_norm: intersections not supported");
        }
      },
      s);
}

}  // namespace sppa

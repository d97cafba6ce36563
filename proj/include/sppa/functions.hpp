#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "sppa/sets.hpp"

namespace sppa {

struct Quadratic;
struct WeightedL1;
struct LinearFn;
struct IndicatorFn;
struct SumFn;

using ConvexFn = std::variant<Quadratic, WeightedL1, LinearFn, IndicatorFn, SumFn>;

// f(x) = 1/2 x'Qx + b'x
struct Quadratic {
  Matrix Q;
  Vector b;
};

// f(x) = sum_i w_i |x_i|, w >= 0
struct WeightedL1 {
  Vector weights;
};

// f(x) = b'x
struct LinearFn {
  Vector b;
};

struct IndicatorFn {
  ConvexSet set;
};

// Sum of terms.  Restricted so the prox stays closed-form: any number of
// quadratic/linear terms plus at most one nonsmooth term (WeightedL1 or
// IndicatorFn); when a nonsmooth term is present the combined quadratic must
// be a scalar multiple of the identity.
struct SumFn {
  std::vector<ConvexFn> terms;
};

inline Eigen::Index fn_dim(const ConvexFn& f) {
  return std::visit(
      [](const auto& v) -> Eigen::Index {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) return v.b.size();
        else if constexpr (std::is_same_v<T, WeightedL1>) return v.weights.size();
        else if constexpr (std::is_same_v<T, LinearFn>) return v.b.size();
        else if constexpr (std::is_same_v<T, IndicatorFn>) return set_dim(v.set);
        else return fn_dim(v.terms.front());
      },
      f);
}

namespace detail {

// Flattened view of a (possibly composite) function: combined quadratic part
// (Q, b) plus at most one nonsmooth term.
struct FnParts {
  Matrix Q;
  Vector b;
  const WeightedL1* l1 = nullptr;
  const IndicatorFn* indicator = nullptr;
  bool scalar_quadratic = true;  // Q == alpha * I
  double alpha = 0.0;
};

inline void accumulate(const ConvexFn& f, FnParts& p) {
  std::visit(
      [&p](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          p.Q += v.Q;
          p.b += v.b;
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          p.b += v.b;
        } else if constexpr (std::is_same_v<T, WeightedL1>) {
          if (p.l1 || p.indicator)
            throw UnsupportedComposite("sum: at most one nonsmooth term is supported");
          p.l1 = &v;
        } else if constexpr (std::is_same_v<T, IndicatorFn>) {
          if (p.l1 || p.indicator)
            throw UnsupportedComposite("sum: at most one nonsmooth term is supported");
          p.indicator = &v;
        } else {
          for (const ConvexFn& t : v.terms) accumulate(t, p);
        }
      },
      f);
}

inline FnParts flatten(const ConvexFn& f) {
  const Eigen::Index d = fn_dim(f);
  FnParts p;
  p.Q = Matrix::Zero(d, d);
  p.b = Vector::Zero(d);
  accumulate(f, p);
  const Matrix D = p.Q - p.Q(0, 0) * Matrix::Identity(d, d);
  p.scalar_quadratic = D.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + std::abs(p.Q(0, 0)));
  p.alpha = p.Q(0, 0);
  if ((p.l1 || p.indicator) && !p.scalar_quadratic)
    throw UnsupportedComposite(
        "sum: a nonsmooth term requires the quadratic part to be a multiple of the identity");
  return p;
}

}  // namespace detail

inline void validate(const ConvexFn& f) {
  std::visit(
      [&f](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          if (v.Q.rows() != v.Q.cols() || v.Q.rows() != v.b.size())
            throw DimensionMismatch("quadratic: Q/b shapes");
          if (!v.Q.allFinite() || !v.b.allFinite()) throw ConfigError("quadratic: non-finite data");
          if (min_symmetric_eigenvalue(v.Q) < -kPsdTol)
            throw ConfigError("quadratic: Q must be positive semidefinite");
        } else if constexpr (std::is_same_v<T, WeightedL1>) {
          require_finite(v.weights, "l1 weights");
          if (v.weights.size() < 1 || (v.weights.array() < 0.0).any())
            throw ConfigError("weighted_l1: weights must be >= 0");
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          require_finite(v.b, "linear b");
        } else if constexpr (std::is_same_v<T, IndicatorFn>) {
          validate(v.set);
        } else {
          if (v.terms.empty()) throw ConfigError("sum: needs at least one term");
          const Eigen::Index d = fn_dim(v.terms.front());
          for (const ConvexFn& t : v.terms) {
            validate(t);
            if (fn_dim(t) != d) throw DimensionMismatch("sum term dimensions differ");
          }
          (void)detail::flatten(f);  // rejects unsupported composites
        }
      },
      f);
}

// +inf outside indicator domains (membership tested with a small tolerance).
inline double value(const ConvexFn& f, const Vector& x) {
  require_dim(x, fn_dim(f), "value");
  return std::visit(
      [&x](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return 0.5 * x.dot(v.Q * x) + v.b.dot(x);
        } else if constexpr (std::is_same_v<T, WeightedL1>) {
          return v.weights.dot(x.cwiseAbs());
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          return v.b.dot(x);
        } else if constexpr (std::is_same_v<T, IndicatorFn>) {
          return contains(v.set, x) ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
          double s = 0.0;
          for (const ConvexFn& t : v.terms) s += value(t, x);
          return s;
        }
      },
      f);
}

inline Vector soft_threshold(const Vector& x, const Vector& thresh) {
  Vector r(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]) - thresh[i];
    r[i] = m > 0.0 ? (x[i] > 0.0 ? m : -m) : 0.0;  // ties at |x_i| = thresh map to 0
  }
  return r;
}

inline Vector solve_spd_shifted(const Matrix& Q, double lambda, const Vector& rhs) {
  const Eigen::Index d = rhs.size();
  const Matrix A = Matrix::Identity(d, d) + lambda * Q;
  Eigen::PartialPivLU<Matrix> lu(A);
  const Vector y = lu.solve(rhs);
  if (!y.allFinite() || (A * y - rhs).norm() > 1e-8 * (1.0 + rhs.norm()))
    throw SingularSystem("prox: shifted quadratic solve failed");
  return y;
}

// argmin_t lambda*f(t) + 1/2 ||t - x||^2
inline Vector prox(const ConvexFn& f, double lambda, const Vector& x) {
  if (!(lambda > 0.0)) throw ConfigError("prox: lambda must be > 0");
  require_dim(x, fn_dim(f), "prox");
  require_finite(x, "prox input");
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return solve_spd_shifted(v.Q, lambda, x - lambda * v.b);
        } else if constexpr (std::is_same_v<T, WeightedL1>) {
          return soft_threshold(x, lambda * v.weights);
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          return x - lambda * v.b;
        } else if constexpr (std::is_same_v<T, IndicatorFn>) {
          return project(v.set, x);
        } else {
          const detail::FnParts p = detail::flatten(f);
          if (!p.l1 && !p.indicator) return solve_spd_shifted(p.Q, lambda, x - lambda * p.b);
          // scalar quadratic + one nonsmooth term
          const double scale = 1.0 + lambda * p.alpha;
          const Vector t0 = (x - lambda * p.b) / scale;
          if (p.indicator) return project(p.indicator->set, t0);
          return soft_threshold(t0, (lambda / scale) * p.l1->weights);
        }
      },
      f);
}

// Closure of dom f as a set, or nullopt for full-space domains.
inline std::optional<ConvexSet> fn_domain(const ConvexFn& f) {
  if (const auto* ind = std::get_if<IndicatorFn>(&f)) return ind->set;
  if (std::holds_alternative<SumFn>(f)) {
    const detail::FnParts p = detail::flatten(f);
    if (p.indicator) return p.indicator->set;
  }
  return std::nullopt;
}

// Least-norm subgradient at x in dom f.
inline Vector least_norm_subgradient(const ConvexFn& f, const Vector& x) {
  require_dim(x, fn_dim(f), "least_norm_subgradient");
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return v.Q * x + v.b;
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          return v.b;
        } else if constexpr (std::is_same_v<T, WeightedL1>) {
          Vector g(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i)
            g[i] = x[i] > 0.0 ? v.weights[i] : (x[i] < 0.0 ? -v.weights[i] : 0.0);
          return g;
        } else if constexpr (std::is_same_v<T, IndicatorFn>) {
          if (!contains(v.set, x)) throw DomainError("least_norm_subgradient: x outside the set");
          return Vector::Zero(x.size());
        } else {
          const detail::FnParts p = detail::flatten(f);
          Vector g = p.Q * x + p.b;
          if (p.indicator) return normal_cone_least_norm(p.indicator->set, x, g);
          if (p.l1) {
            for (Eigen::Index i = 0; i < x.size(); ++i) {
              const double w = p.l1->weights[i];
              if (x[i] > 0.0) g[i] += w;
              else if (x[i] < 0.0) g[i] -= w;
              else g[i] = g[i] > w ? g[i] - w : (g[i] < -w ? g[i] + w : 0.0);
            }
          }
          return g;
        }
      },
      f);
}

// Gradient where f is differentiable at x; SetValuedAt on kinks/boundaries.
inline Vector single_valued_subgradient(const ConvexFn& f, const Vector& x) {
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return v.Q * x + v.b;
        } else if constexpr (std::is_same_v<T, LinearFn>) {
          return v.b;
        } else if constexpr (std::is_same_v<T, WeightedL1>) {
          Vector g(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0 && v.weights[i] > 0.0)
              throw SetValuedAt("weighted_l1 is nonsmooth at a zero coordinate");
            g[i] = x[i] > 0.0 ? v.weights[i] : (x[i] < 0.0 ? -v.weights[i] : 0.0);
          }
          return g;
        } else if constexpr (std::is_same_v<T, IndicatorFn>) {
          if (!contains(v.set, x)) throw DomainError("subgradient: x outside the set");
          if (!strictly_inside(v.set, x))
            throw SetValuedAt("indicator subdifferential is a cone on the boundary");
          return Vector::Zero(x.size());
        } else {
          Vector g = Vector::Zero(x.size());
          for (const ConvexFn& t : v.terms) g += single_valued_subgradient(t, x);
          return g;
        }
      },
      f);
}

}  // namespace sppa

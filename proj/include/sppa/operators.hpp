#pragma once

#include <memory>

#include "sppa/functions.hpp"

namespace sppa {

struct AffineMonotone;
struct Subdifferential;
struct NormalCone;
struct SaddleBilinear;
struct Scaled;

using OperatorSpec =
    std::variant<AffineMonotone, Subdifferential, NormalCone, SaddleBilinear, Scaled>;

// A(x) = Mx + b, sym(M) PSD
struct AffineMonotone {
  Matrix M;
  Vector b;
};

struct Subdifferential {
  ConvexFn f;
};

struct NormalCone {
  ConvexSet set;
};

// A(x, y) = (Px + Ky + c, Ry - K'x + d) on R^{dx+dy}
struct SaddleBilinear {
  Matrix P, R, K;
  Vector c, d;

  Eigen::Index dx() const { return c.size(); }
  Eigen::Index dy() const { return d.size(); }
  Matrix full_matrix() const {
    Matrix T(dx() + dy(), dx() + dy());
    T.topLeftCorner(dx(), dx()) = P;
    T.topRightCorner(dx(), dy()) = K;
    T.bottomLeftCorner(dy(), dx()) = -K.transpose();
    T.bottomRightCorner(dy(), dy()) = R;
    return T;
  }
  Vector full_offset() const {
    Vector v(dx() + dy());
    v << c, d;
    return v;
  }
};

// alpha * inner, alpha > 0
struct Scaled {
  double alpha = 1.0;
  std::shared_ptr<const OperatorSpec> inner;
};

inline Eigen::Index op_dim(const OperatorSpec& op) {
  return std::visit(
      [](const auto& v) -> Eigen::Index {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineMonotone>) return v.b.size();
        else if constexpr (std::is_same_v<T, Subdifferential>) return fn_dim(v.f);
        else if constexpr (std::is_same_v<T, NormalCone>) return set_dim(v.set);
        else if constexpr (std::is_same_v<T, SaddleBilinear>) return v.dx() + v.dy();
        else return op_dim(*v.inner);
      },
      op);
}

inline void validate(const OperatorSpec& op) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineMonotone>) {
          if (v.M.rows() != v.M.cols() || v.M.rows() != v.b.size())
            throw DimensionMismatch("affine: M/b shapes");
          if (!v.M.allFinite() || !v.b.allFinite()) throw ConfigError("affine: non-finite data");
          if (min_symmetric_eigenvalue(v.M) < -kPsdTol)
            throw ConfigError("affine: symmetric part of M must be positive semidefinite");
        } else if constexpr (std::is_same_v<T, Subdifferential>) {
          validate(v.f);
        } else if constexpr (std::is_same_v<T, NormalCone>) {
          validate(v.set);
        } else if constexpr (std::is_same_v<T, SaddleBilinear>) {
          if (v.P.rows() != v.dx() || v.P.cols() != v.dx() || v.R.rows() != v.dy() ||
              v.R.cols() != v.dy() || v.K.rows() != v.dx() || v.K.cols() != v.dy())
            throw DimensionMismatch("saddle: block shapes");
          if (min_symmetric_eigenvalue(v.full_matrix()) < -kPsdTol)
            throw ConfigError("saddle: symmetric part must be positive semidefinite");
        } else {
          if (!(v.alpha > 0.0)) throw ConfigError("scaled: alpha must be > 0");
          if (!v.inner) throw ConfigError("scaled: missing inner operator");
          validate(*v.inner);
        }
      },
      op);
}

inline OperatorSpec rotation2d() {
  Matrix M(2, 2);
  M << 0.0, -1.0, 1.0, 0.0;
  return AffineMonotone{M, Vector::Zero(2)};
}

inline Vector solve_shifted(const Matrix& M, double lambda, const Vector& rhs) {
  const Eigen::Index d = rhs.size();
  require_finite(rhs, "resolvent input");
  const Matrix A = Matrix::Identity(d, d) + lambda * M;
  Eigen::PartialPivLU<Matrix> lu(A);
  const Vector y = lu.solve(rhs);
  if (!y.allFinite() || (A * y - rhs).norm() > 1e-8 * (1.0 + rhs.norm()))
    throw SingularSystem("resolvent: linear solve failed");
  return y;
}

// J_lambda(x) = (I + lambda A)^{-1}(x)
inline Vector resolvent(const OperatorSpec& op, double lambda, const Vector& x) {
  if (!(lambda > 0.0)) throw ConfigError("resolvent: lambda must be > 0");
  require_dim(x, op_dim(op), "resolvent");
  require_finite(x, "resolvent input");
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineMonotone>) {
          return solve_shifted(v.M, lambda, x - lambda * v.b);
        } else if constexpr (std::is_same_v<T, Subdifferential>) {
          return prox(v.f, lambda, x);
        } else if constexpr (std::is_same_v<T, NormalCone>) {
          return project(v.set, x);
        } else if constexpr (std::is_same_v<T, SaddleBilinear>) {
          return solve_shifted(v.full_matrix(), lambda, x - lambda * v.full_offset());
        } else {
          return resolvent(*v.inner, v.alpha * lambda, x);
        }
      },
      op);
}

// A_lambda(x) = (x - J_lambda(x)) / lambda
inline Vector yosida(const OperatorSpec& op, double lambda, const Vector& x) {
  return (x - resolvent(op, lambda, x)) / lambda;
}

// A_0(x): the element of least norm in A(x), for x in dom A.
inline Vector least_norm(const OperatorSpec& op, const Vector& x) {
  require_dim(x, op_dim(op), "least_norm");
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineMonotone>) {
          return v.M * x + v.b;
        } else if constexpr (std::is_same_v<T, Subdifferential>) {
          if (auto dom = fn_domain(v.f); dom && !contains(*dom, x))
            throw DomainError("least_norm: x outside dom f");
          return least_norm_subgradient(v.f, x);
        } else if constexpr (std::is_same_v<T, NormalCone>) {
          if (!contains(v.set, x)) throw DomainError("least_norm: x outside the set");
          return Vector::Zero(x.size());  // 0 is always in the normal cone
        } else if constexpr (std::is_same_v<T, SaddleBilinear>) {
          return v.full_matrix() * x + v.full_offset();
        } else {
          return v.alpha * least_norm(*v.inner, x);
        }
      },
      op);
}

// Closure of dom A, or nullopt for full-space domains.
inline std::optional<ConvexSet> op_domain(const OperatorSpec& op) {
  return std::visit(
      [](const auto& v) -> std::optional<ConvexSet> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Subdifferential>) return fn_domain(v.f);
        else if constexpr (std::is_same_v<T, NormalCone>) return v.set;
        else if constexpr (std::is_same_v<T, Scaled>) return op_domain(*v.inner);
        else return std::nullopt;
      },
      op);
}

// Projection onto cl(dom A); identity for full-domain operators.
inline Vector domain_projection(const OperatorSpec& op, const Vector& x) {
  require_dim(x, op_dim(op), "domain_projection");
  if (auto dom = op_domain(op)) return project(*dom, x);
  return x;
}

// Single-valued application A(x); SetValuedAt where the image is not a singleton.
inline Vector apply_single_valued(const OperatorSpec& op, const Vector& x) {
  require_dim(x, op_dim(op), "apply");
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineMonotone>) {
          return v.M * x + v.b;
        } else if constexpr (std::is_same_v<T, Subdifferential>) {
          return single_valued_subgradient(v.f, x);
        } else if constexpr (std::is_same_v<T, NormalCone>) {
          if (!contains(v.set, x)) throw DomainError("apply: x outside the set");
          if (!strictly_inside(v.set, x))
            throw SetValuedAt("normal cone is a nontrivial cone on the boundary");
          return Vector::Zero(x.size());
        } else if constexpr (std::is_same_v<T, SaddleBilinear>) {
          return v.full_matrix() * x + v.full_offset();
        } else {
          return v.alpha * apply_single_valued(*v.inner, x);
        }
      },
      op);
}

}  // namespace sppa

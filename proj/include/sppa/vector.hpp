#pragma once

#include <Eigen/Dense>

#include "sppa/errors.hpp"

namespace sppa {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline void require_finite(const Vector& x, const char* what = "vector") {
  if (!x.allFinite()) throw NonFiniteIterate(std::string(what) + " has non-finite entries");
}

inline void require_dim(const Vector& x, Eigen::Index d, const char* what = "vector") {
  if (x.size() != d)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(d) +
                            ", got " + std::to_string(x.size()));
}

// Smallest eigenvalue of the symmetric part of M.
inline double min_symmetric_eigenvalue(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
  return es.eigenvalues().minCoeff();
}

constexpr double kPsdTol = 1e-10;

}  // namespace sppa

#pragma once

#include <stdexcept>
#include <string>

namespace sppa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Point outside the (closure of the) operator/function domain.
struct DomainError : Error {
  using Error::Error;
};

// Operator image at the query point is a non-singleton set.
struct SetValuedAt : Error {
  using Error::Error;
};

struct SingularSystem : Error {
  using Error::Error;
};

struct UnsupportedComposite : Error {
  using Error::Error;
};

struct UnsupportedSet : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct EmptyIntersection : Error {
  using Error::Error;
};

struct SingularMean : Error {
  using Error::Error;
};

struct NonFiniteIterate : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace sppa

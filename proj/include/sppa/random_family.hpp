#pragma once

#include <cstdint>
#include <numeric>
#include <random>

#include "sppa/operators.hpp"

namespace sppa {

// Finite-support random operator family: members A(1,.),...,A(m,.) with
// sampling weights w_i > 0 summing to one.
struct RandomFamily {
  std::vector<OperatorSpec> members;
  Vector weights;
  Eigen::Index dim = 0;
  bool common_full_domain = true;
};

inline RandomFamily make_family(std::vector<OperatorSpec> members, Vector weights) {
  if (members.empty()) throw ConfigError("family: needs at least one member");
  if (weights.size() != static_cast<Eigen::Index>(members.size()))
    throw DimensionMismatch("family: weights/members count mismatch");
  if ((weights.array() <= 0.0).any()) throw ConfigError("family: weights must be > 0");
  if (std::abs(weights.sum() - 1.0) > 1e-12) throw ConfigError("family: weights must sum to 1");
  RandomFamily fam;
  fam.dim = op_dim(members.front());
  fam.common_full_domain = true;
  for (const OperatorSpec& op : members) {
    validate(op);
    if (op_dim(op) != fam.dim) throw DimensionMismatch("family: member dimensions differ");
    if (op_domain(op)) fam.common_full_domain = false;
  }
  fam.members = std::move(members);
  fam.weights = std::move(weights);
  return fam;
}

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// I.i.d. index stream; one uniform draw is consumed per sample so traces stay
// alignable across configurations.
class SampleStream {
 public:
  explicit SampleStream(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  static SampleStream for_replica(uint64_t master_seed, uint64_t replica) {
    return SampleStream(splitmix64(master_seed ^ (0x9e3779b97f4a7c15ULL * (replica + 1))));
  }

  double next_uniform() {
    ++counter_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  uint64_t seed() const { return seed_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
  std::mt19937_64 engine_;
};

// Returns a 0-based member index with probability weights[i].
inline int sample(const RandomFamily& family, SampleStream& stream) {
  const double u = stream.next_uniform();
  double cum = 0.0;
  const int m = static_cast<int>(family.members.size());
  for (int i = 0; i < m; ++i) {
    cum += family.weights[i];
    if (u < cum) return i;
  }
  return m - 1;
}

// Mean operator value sum_i w_i A(i, x); requires every member single-valued at x.
inline Vector mean_apply(const RandomFamily& family, const Vector& x) {
  require_dim(x, family.dim, "mean_apply");
  Vector acc = Vector::Zero(family.dim);
  for (size_t i = 0; i < family.members.size(); ++i)
    acc += family.weights[static_cast<Eigen::Index>(i)] *
           apply_single_valued(family.members[i], x);
  return acc;
}

// True iff x is (within tol) a zero of every member, i.e. a fixed point of
// every resolvent.  Detects the Fejer-monotone regime.
inline bool common_zero_check(const RandomFamily& family, const Vector& x, double tol) {
  for (const OperatorSpec& op : family.members) {
    try {
      if (yosida(op, 1.0, x).norm() > tol) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

}  // namespace sppa

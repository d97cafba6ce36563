#include <doctest.h>

#include "sppa/operators.hpp"
#include "test_util.hpp"

using namespace sppa;
using sppa::testing::Rng;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Box unit_box2() { return Box{Vector::Zero(2), Vector::Ones(2)}; }

}  // namespace

TEST_CASE("resolvent closed forms") {
  const OperatorSpec identity_op = AffineMonotone{Matrix::Identity(2, 2), Vector::Zero(2)};
  CHECK((resolvent(identity_op, 1.0, vec2(2, 2)) - vec2(1, 1)).norm() == doctest::Approx(0.0));

  CHECK((resolvent(rotation2d(), 1.0, vec2(1, 0)) - vec2(0.5, -0.5)).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));

  const OperatorSpec cone = NormalCone{unit_box2()};
  CHECK((resolvent(cone, 7.0, vec2(2, -0.5)) - vec2(1, 0)).norm() == doctest::Approx(0.0));

  CHECK_THROWS_AS(resolvent(identity_op, 1.0, Vector::Zero(3)), DimensionMismatch);
  CHECK_THROWS_AS(resolvent(identity_op, 0.0, vec2(1, 1)), ConfigError);
}

TEST_CASE("yosida closed forms") {
  const OperatorSpec identity_op = AffineMonotone{Matrix::Identity(2, 2), Vector::Zero(2)};
  CHECK((yosida(identity_op, 1.0, vec2(2, 2)) - vec2(1, 1)).norm() == doctest::Approx(0.0));
  CHECK((yosida(rotation2d(), 1.0, vec2(1, 0)) - vec2(0.5, 0.5)).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
  // zeros of the operator are fixed points of the resolvent
  const OperatorSpec aff = AffineMonotone{Matrix::Identity(2, 2), vec2(-1, -2)};
  CHECK(yosida(aff, 3.7, vec2(1, 2)).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("least_norm per variant") {
  const OperatorSpec l1 = Subdifferential{WeightedL1{vec1(1.0)}};
  CHECK(least_norm(l1, vec1(0)).norm() == 0.0);

  const OperatorSpec cone = NormalCone{unit_box2()};
  CHECK(least_norm(cone, vec2(0.5, 0.5)).norm() == 0.0);
  CHECK_THROWS_AS(least_norm(cone, vec2(2, 0)), DomainError);
}

TEST_CASE("domain_projection per variant") {
  const OperatorSpec aff = AffineMonotone{Matrix::Identity(2, 2), Vector::Zero(2)};
  CHECK((domain_projection(aff, vec2(3, -1)) - vec2(3, -1)).norm() == 0.0);

  const OperatorSpec cone = NormalCone{Ball{Vector::Zero(2), 1.0}};
  CHECK((domain_projection(cone, vec2(3, 4)) - vec2(0.6, 0.8)).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));

  const OperatorSpec ind = Subdifferential{IndicatorFn{Hyperplane{vec2(1, 1), 1.0}}};
  CHECK((domain_projection(ind, vec2(1, 1)) - vec2(0.5, 0.5)).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("prox closed forms") {
  CHECK((prox(ConvexFn{WeightedL1{vec1(1.0)}}, 1.0, vec1(3)) - vec1(2)).norm() == 0.0);
  // soft-threshold tie maps exactly to zero
  CHECK(prox(ConvexFn{WeightedL1{vec1(2.0)}}, 1.0, vec1(2))[0] == 0.0);

  const ConvexFn q = Quadratic{Matrix::Identity(1, 1), vec1(-2)};
  CHECK((prox(q, 1.0, vec1(0)) - vec1(1)).norm() == doctest::Approx(0.0).epsilon(1e-14));

  const ConvexFn ind = IndicatorFn{Halfspace{vec2(1, 0), 0.0}};
  CHECK((prox(ind, 5.0, vec2(1, 1)) - vec2(0, 1)).norm() == 0.0);
}

TEST_CASE("project closed forms") {
  CHECK((project(Ball{Vector::Zero(2), 1.0}, vec2(3, 4)) - vec2(0.6, 0.8)).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK((project(unit_box2(), vec2(2, -0.5)) - vec2(1, 0)).norm() == 0.0);
  CHECK((project(Halfspace{vec2(0, 1), 2.0}, vec2(5, 1)) - vec2(5, 1)).norm() == 0.0);
  CHECK_THROWS_AS(project(ConvexSet{Intersection{{unit_box2()}}}, vec2(0, 0)), UnsupportedSet);
}

TEST_CASE("construction rejects non-monotone data") {
  Matrix M(2, 2);
  M << -1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(validate(OperatorSpec{AffineMonotone{M, Vector::Zero(2)}}), ConfigError);
  CHECK_THROWS_AS(validate(ConvexFn{Quadratic{M, Vector::Zero(2)}}), ConfigError);

  SumFn two_nonsmooth;
  two_nonsmooth.terms.push_back(WeightedL1{Vector::Ones(2)});
  two_nonsmooth.terms.push_back(IndicatorFn{unit_box2()});
  CHECK_THROWS_AS(validate(ConvexFn{two_nonsmooth}), UnsupportedComposite);

  SumFn nonscalar;
  Matrix Q(2, 2);
  Q << 2.0, 0.0, 0.0, 1.0;
  nonscalar.terms.push_back(Quadratic{Q, Vector::Zero(2)});
  nonscalar.terms.push_back(WeightedL1{Vector::Ones(2)});
  CHECK_THROWS_AS(validate(ConvexFn{nonscalar}), UnsupportedComposite);
}

TEST_CASE("firm nonexpansiveness across the catalog") {
  Rng rng(101);
  for (int it = 0; it < 500; ++it) {
    const Eigen::Index d = 2 + rng.index(4);
    const OperatorSpec op = sppa::testing::random_operator(rng, d);
    const double lam = rng.log_uniform(1e-3, 1e3);
    const Vector x = rng.vector(d, 3.0), y = rng.vector(d, 3.0);
    const Vector jx = resolvent(op, lam, x), jy = resolvent(op, lam, y);
    CHECK((jx - jy).dot(x - y) >= (jx - jy).squaredNorm() - 1e-9 * (1.0 + (x - y).squaredNorm()));
  }
}

TEST_CASE("yosida is 1/lambda-Lipschitz") {
  Rng rng(102);
  for (int it = 0; it < 500; ++it) {
    const Eigen::Index d = 2 + rng.index(4);
    const OperatorSpec op = sppa::testing::random_operator(rng, d);
    const double lam = rng.log_uniform(1e-3, 1e3);
    const Vector x = rng.vector(d, 3.0), y = rng.vector(d, 3.0);
    CHECK((yosida(op, lam, x) - yosida(op, lam, y)).norm() <= (x - y).norm() / lam + 1e-9);
  }
}

TEST_CASE("yosida norm dominated by least-norm element on the domain") {
  Rng rng(103);
  for (int it = 0; it < 500; ++it) {
    const Eigen::Index d = 2 + rng.index(4);
    const OperatorSpec op = sppa::testing::random_operator(rng, d);
    const Vector x = domain_projection(op, rng.vector(d, 2.0));
    const double lam = rng.log_uniform(1e-3, 1e2);
    CHECK(yosida(op, lam, x).norm() <= least_norm(op, x).norm() + 1e-9);
  }
}

TEST_CASE("prox output satisfies the subgradient inequality") {
  Rng rng(104);
  for (int it = 0; it < 100; ++it) {
    const Eigen::Index d = 2 + rng.index(3);
    const ConvexFn f = sppa::testing::random_fn(rng, d);
    const double lam = rng.log_uniform(1e-2, 1e1);
    const Vector x = rng.vector(d, 2.0);
    const Vector j = prox(f, lam, x);
    const Vector g = (x - j) / lam;
    const auto dom = fn_domain(f);
    for (int k = 0; k < 100; ++k) {
      Vector y = rng.vector(d, 2.0);
      if (dom) y = project(*dom, y);
      CHECK(value(f, y) >= value(f, j) + g.dot(y - j) - 1e-8);
    }
  }
}

TEST_CASE("resolvent converges to the domain projection as lambda drops") {
  Rng rng(105);
  const double lams[] = {1e-2, 1e-4, 1e-6};
  for (int it = 0; it < 200; ++it) {
    const Eigen::Index d = 2 + rng.index(3);
    const OperatorSpec op = sppa::testing::random_operator(rng, d);
    const Vector x = rng.vector(d, 2.0);
    const Vector pi = domain_projection(op, x);
    double prev = std::numeric_limits<double>::infinity();
    for (double lam : lams) {
      const double err = (resolvent(op, lam, x) - pi).norm();
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
  }
}

TEST_CASE("resolvent inner-product lower bound (single-valued selection)") {
  Rng rng(106);
  const double betas[] = {0.25, 0.5, 1.0};
  for (int it = 0; it < 300; ++it) {
    const Eigen::Index d = 2 + rng.index(3);
    const OperatorSpec op = sppa::testing::random_operator(rng, d);
    const Vector x = domain_projection(op, rng.vector(d, 2.0));
    const Vector u = domain_projection(op, rng.vector(d, 2.0));
    const Vector phi = least_norm(op, u);
    const double lam = rng.log_uniform(1e-3, 1e1);
    const Vector alam = yosida(op, lam, x);
    for (double beta : betas) {
      CHECK((alam - phi).dot(x - u) >=
            lam * (1.0 - beta) * alam.squaredNorm() - (lam / (4.0 * beta)) * phi.squaredNorm() -
                1e-9);
    }
  }
}

TEST_CASE("prox stays within 2*lambda*||subgradient at projection|| of the domain") {
  Rng rng(107);
  int done = 0;
  while (done < 300) {
    const Eigen::Index d = 2 + rng.index(3);
    SumFn g;
    g.terms.push_back(Quadratic{rng.uniform(0.0, 2.0) * Matrix::Identity(d, d), rng.vector(d)});
    g.terms.push_back(IndicatorFn{sppa::testing::random_set(rng, d)});
    const ConvexFn f = g;
    const Vector x = rng.vector(d, 3.0);
    const auto dom = fn_domain(f);
    if (contains(*dom, x)) continue;  // want exterior points
    const Vector pi = project(*dom, x);
    const double lam = rng.log_uniform(1e-3, 1.0);
    const Vector phi = least_norm_subgradient(f, pi);
    CHECK((prox(f, lam, x) - pi).norm() <= 2.0 * lam * phi.norm() + 1e-9);
    ++done;
  }
}

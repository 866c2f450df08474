#include "doctest.h"
#include "rnmo/errors.hpp"
#include "rnmo/problems.hpp"
#include "test_support.hpp"

using namespace rnmo;
using rnmo::testing::directional_fd;
using rnmo::testing::random_tangent;
using rnmo::testing::vec;

TEST_CASE("eval_all examples") {
  SUBCASE("identity Rayleigh is constant") {
    const auto inst = make_rayleigh({Matrix::Identity(4, 4), Matrix::Identity(4, 4)});
    Rng rng(1);
    const Point x = random_point(4, rng);
    const Vector F = eval_all(inst.objectives, x);
    CHECK(F[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(F[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("max-linear pair at the north pole") {
    const auto inst = make_example1();
    const Vector F = eval_all(inst.objectives, Point(vec({0, 0, 1})));
    CHECK(F[0] == doctest::Approx(1.5));
    CHECK(F[1] == doctest::Approx(1.5));
  }
  SUBCASE("single-anchor median at its anchor") {
    Rng rng(3);
    const Point y = random_point(5, rng);
    const auto inst = make_geomedian({{y}, {y}}, {{1.0}, {1.0}});
    CHECK(eval_all(inst.objectives, y)[0] == 0.0);
  }
}

TEST_CASE("oracle failures carry the objective index") {
  auto sphere = std::make_shared<const Sphere>(3);
  ObjectiveOracle good{[](const Point&) { return 0.0; },
                       [](const Point& x) { return TangentVector::zero(x); }, "ok"};
  ObjectiveOracle bad{[](const Point&) -> double { throw std::runtime_error("boom"); },
                      [](const Point& x) { return TangentVector::zero(x); }, "bad"};
  const ObjectiveVector F(sphere, {good, bad});
  try {
    eval_all(F, Point::basis(3, 0));
    FAIL("expected an OracleError");
  } catch (const OracleError& e) {
    CHECK(e.index() == 1);
  }

  SUBCASE("geomedian at an antipodal anchor surfaces the cut-locus error") {
    const Point y = Point::basis(3, 0);
    const auto inst = make_geomedian({{y}, {y}}, {{1.0}, {1.0}});
    CHECK_THROWS_AS(inst.objectives.subgradient(1, Point(vec({-1, 0, 0}))), OracleError);
  }
}

TEST_CASE("transported_subgradient") {
  const auto inst = make_rayleigh(6, 1, 11);
  const Manifold& M = inst.objectives.manifold();
  const ObjectiveOracle& f = inst.objectives[0];
  Rng rng(5);
  const Point x = M.random_point(rng);
  const TangentVector g = random_tangent(x, rng, 1.0);

  CHECK((transported_subgradient(M, f, x, 0.0, g).vec() - f.clarke_subgradient(x).vec()).norm() ==
        0.0);

  // Smooth gradient field: the transported gradient moves by O(t).
  const double t = 1e-6;
  const TangentVector moved = transported_subgradient(M, f, x, t, g);
  const double lipschitz_grad = 4.0 * inst.matrices[0].norm();
  CHECK((moved.vec() - f.clarke_subgradient(x).vec()).norm() <= lipschitz_grad * t);
  CHECK(moved.base().same_as(x));

  const Point y = M.retract(x, g.scaled(t));
  CHECK(moved.norm() == doctest::Approx(f.clarke_subgradient(y).norm()).epsilon(1e-10));

  const TangentVector far = transported_subgradient(M, f, x, 0.7, g);
  CHECK(far.norm() == doctest::Approx(f.clarke_subgradient(M.retract(x, g.scaled(0.7))).norm())
                          .epsilon(1e-10));
}

TEST_CASE("Rayleigh subgradient matches geodesic finite differences") {
  const auto inst = make_rayleigh(8, 2, 21);
  const Manifold& M = inst.objectives.manifold();
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = M.random_point(rng);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& f = inst.objectives[i];
      const TangentVector g = f.clarke_subgradient(x);
      for (int k = 0; k < 8; ++k) {
        // Tangent basis: projected coordinate axes.
        const TangentVector d = M.project_tangent(x, Vector::Unit(8, k));
        const double fd = directional_fd(M, f.eval, x, d, 1e-5);
        CHECK(std::abs(fd - g.vec().dot(d.vec())) <= 1e-5);
      }
    }
  }
}

TEST_CASE("geomedian subgradient inequality away from anchors") {
  const auto inst = make_geomedian(5, {{0.1, 0.2, 0.3, 0.4}, {0.5, 0.5}}, 17);
  const Manifold& M = inst.objectives.manifold();
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x = M.random_point(rng);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& f = inst.objectives[i];
      const TangentVector xi = f.clarke_subgradient(x);
      CHECK(xi.norm() <= 1.0 + 1e-12);
      CHECK(std::abs(xi.vec().dot(x.coords())) <= 1e-10);
      const TangentVector v = random_tangent(x, rng, 1e-4);
      // First-order expansion along the geodesic; the remainder is O(‖v‖²).
      CHECK(f.eval(M.retract(x, v)) >= f.eval(x) + xi.vec().dot(v.vec()) - 1e-6);
    }
  }
}

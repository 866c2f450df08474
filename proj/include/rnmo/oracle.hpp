#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rnmo/manifold.hpp"

namespace rnmo {

/// One objective f_i: its value and one element of its Riemannian Clarke
/// subdifferential at a point.
struct ObjectiveOracle {
  std::function<double(const Point&)> eval;
  std::function<TangentVector(const Point&)> clarke_subgradient;
  std::string label;
};

/// The objective vector F = (f_1, ..., f_m) together with the manifold it
/// lives on.
class ObjectiveVector {
 public:
  ObjectiveVector(std::shared_ptr<const Manifold> manifold, std::vector<ObjectiveOracle> oracles);

  const Manifold& manifold() const noexcept { return *manifold_; }
  std::shared_ptr<const Manifold> manifold_ptr() const noexcept { return manifold_; }
  const std::vector<ObjectiveOracle>& oracles() const noexcept { return oracles_; }
  const ObjectiveOracle& operator[](std::size_t i) const { return oracles_.at(i); }
  std::size_t size() const noexcept { return oracles_.size(); }

  // Oracle failures are rethrown as OracleError carrying the objective index.
  double eval(std::size_t i, const Point& x) const;
  TangentVector subgradient(std::size_t i, const Point& x) const;

 private:
  std::shared_ptr<const Manifold> manifold_;
  std::vector<ObjectiveOracle> oracles_;
};

Vector eval_all(const ObjectiveVector& F, const Point& x);

/// T_{x <- R_x(t g)} applied to a Clarke subgradient of f at R_x(t g).
/// For t == 0 this is the subgradient at x itself.
TangentVector transported_subgradient(const Manifold& M, const ObjectiveOracle& f, const Point& x,
                                      double t, const TangentVector& g);

}  // namespace rnmo

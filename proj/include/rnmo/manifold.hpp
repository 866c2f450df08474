#pragma once

#include <cstdint>
#include <random>

#include "rnmo/point.hpp"

namespace rnmo {

using Rng = std::mt19937_64;

struct ManifoldParams {
  Eigen::Index dim_ambient = 0;
  double injectivity_radius = 0.0;
};

/// Geometry consumed by the solver: a Riemannian metric, a retraction with
/// its inverse, and a vector transport back to a base point.
///
/// The solver assumes the retraction/transport pair satisfies the locking
/// condition with unit scaling (exponential map + parallel transport), so
/// no scaling factor appears anywhere downstream.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldParams params() const = 0;

  virtual double inner(const Point& x, const TangentVector& u, const TangentVector& v) const = 0;
  virtual Point retract(const Point& x, const TangentVector& xi) const = 0;
  virtual TangentVector inverse_retract(const Point& x, const Point& y) const = 0;
  virtual double distance(const Point& x, const Point& y) const = 0;
  /// Moves `xi_y` (tangent at y) into the tangent space at x.
  virtual TangentVector transport_to_base(const Point& x, const Point& y,
                                          const TangentVector& xi_y) const = 0;
  virtual TangentVector project_tangent(const Point& x, const Vector& v) const = 0;
  virtual Point random_point(Rng& rng) const = 0;

  Eigen::Index dim_ambient() const { return params().dim_ambient; }
  double injectivity_radius() const { return params().injectivity_radius; }
};

}  // namespace rnmo

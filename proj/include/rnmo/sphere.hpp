#pragma once

#include "rnmo/manifold.hpp"

namespace rnmo {

/// The unit sphere S^{p-1} in R^p with the metric inherited from R^p, the
/// exponential map as retraction and parallel transport along minimizing
/// geodesics as vector transport.
class Sphere final : public Manifold {
 public:
  // 1 + <x,y> below this counts as antipodal.
  static constexpr double kCutLocusTol = 1e-12;
  // Tangent norms below this retract to the base point itself.
  static constexpr double kZeroStep = 1e-14;

  explicit Sphere(Eigen::Index p);

  ManifoldParams params() const override;

  double inner(const Point& x, const TangentVector& u, const TangentVector& v) const override;
  Point retract(const Point& x, const TangentVector& xi) const override;
  TangentVector inverse_retract(const Point& x, const Point& y) const override;
  double distance(const Point& x, const Point& y) const override;
  TangentVector transport_to_base(const Point& x, const Point& y,
                                  const TangentVector& xi_y) const override;
  TangentVector project_tangent(const Point& x, const Vector& v) const override;
  Point random_point(Rng& rng) const override;

 private:
  void check_dim(const Point& x, const char* op) const;

  Eigen::Index p_;
};

/// Uniform sample on S^{p-1}: a normalized vector of i.i.d. standard normals.
Point random_point(Eigen::Index p, Rng& rng);

}  // namespace rnmo

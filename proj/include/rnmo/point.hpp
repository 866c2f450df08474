#pragma once

#include <Eigen/Dense>

namespace rnmo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kUnitNormTol = 1e-10;
inline constexpr double kTangencyTol = 1e-10;
inline constexpr double kSameBaseTol = 1e-12;

/// A point on the unit sphere S^{p-1}, stored by its ambient coordinates.
///
/// Construction validates p >= 2 and |‖coords‖ - 1| <= 1e-10. Use
/// `Point::normalized` to project an arbitrary nonzero vector onto the sphere.
class Point {
 public:
  explicit Point(Vector coords);

  static Point normalized(const Vector& v);
  static Point basis(Eigen::Index p, Eigen::Index i);

  const Vector& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  bool same_as(const Point& other, double tol = kSameBaseTol) const;

 private:
  Vector coords_;
};

/// An element of the tangent space at `base`, stored in ambient coordinates.
///
/// Construction validates |<base, vec>| <= 1e-10 * max(1, ‖vec‖).
class TangentVector {
 public:
  TangentVector(Point base, Vector vec);

  static TangentVector zero(const Point& base);

  const Point& base() const noexcept { return base_; }
  const Vector& vec() const noexcept { return vec_; }
  Eigen::Index dim() const noexcept { return vec_.size(); }
  double norm() const { return vec_.norm(); }

  TangentVector scaled(double s) const;
  TangentVector operator-() const { return scaled(-1.0); }

 private:
  Point base_;
  Vector vec_;
};

}  // namespace rnmo

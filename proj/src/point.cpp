#include "rnmo/point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rnmo/errors.hpp"

namespace rnmo {

Point::Point(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw ContractViolation("Point: ambient dimension must be at least 2");
  }
  const double n = coords_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitNormTol) {
    throw ContractViolation("Point: coordinates are not on the unit sphere (norm " +
                            std::to_string(n) + ")");
  }
}

Point Point::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ContractViolation("Point::normalized: vector has zero or non-finite norm");
  }
  return Point(v / n);
}

Point Point::basis(Eigen::Index p, Eigen::Index i) {
  if (i < 0 || i >= p) {
    throw ContractViolation("Point::basis: index out of range");
  }
  return Point(Vector::Unit(p, i));
}

bool Point::same_as(const Point& other, double tol) const {
  if (dim() != other.dim()) return false;
  return (coords_ - other.coords_).lpNorm<Eigen::Infinity>() <= tol;
}

TangentVector::TangentVector(Point base, Vector vec) : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != base_.dim()) {
    throw ContractViolation("TangentVector: dimension does not match base point");
  }
  const double radial = std::abs(base_.coords().dot(vec_));
  if (!std::isfinite(radial) || radial > kTangencyTol * std::max(1.0, vec_.norm())) {
    throw ContractViolation("TangentVector: vector is not tangent at its base (|<x,v>| = " +
                            std::to_string(radial) + ")");
  }
}

TangentVector TangentVector::zero(const Point& base) {
  return TangentVector(base, Vector::Zero(base.dim()));
}

TangentVector TangentVector::scaled(double s) const { return TangentVector(base_, s * vec_); }

}  // namespace rnmo

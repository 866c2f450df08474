#include "rnmo/sphere.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rnmo/errors.hpp"

namespace rnmo {

namespace {

void require_base(const TangentVector& v, const Point& x, const char* op) {
  if (!v.base().same_as(x)) {
    throw ContractViolation(std::string(op) + ": tangent vector is based at a different point");
  }
}

Vector project(const Vector& x, const Vector& v) { return v - x.dot(v) * x; }

}  // namespace

Sphere::Sphere(Eigen::Index p) : p_(p) {
  if (p < 2) throw ContractViolation("Sphere: ambient dimension must be at least 2");
}

ManifoldParams Sphere::params() const { return {p_, std::numbers::pi}; }

void Sphere::check_dim(const Point& x, const char* op) const {
  if (x.dim() != p_) {
    throw ContractViolation(std::string(op) + ": point dimension " + std::to_string(x.dim()) +
                            " does not match sphere dimension " + std::to_string(p_));
  }
}

double Sphere::inner(const Point& x, const TangentVector& u, const TangentVector& v) const {
  check_dim(x, "inner");
  require_base(u, x, "inner");
  require_base(v, x, "inner");
  return u.vec().dot(v.vec());
}

Point Sphere::retract(const Point& x, const TangentVector& xi) const {
  check_dim(x, "retract");
  require_base(xi, x, "retract");
  const double n = xi.norm();
  if (n < kZeroStep) return x;
  Vector y = std::cos(n) * x.coords() + (std::sin(n) / n) * xi.vec();
  return Point::normalized(y);
}

// Geodesic distance arccos<x,y>, evaluated as 2 atan2(‖x - y‖, ‖x + y‖):
// exact at y = x and y = -x, and accurate for tiny distances where arccos
// loses half the digits.
double Sphere::distance(const Point& x, const Point& y) const {
  check_dim(x, "distance");
  check_dim(y, "distance");
  return 2.0 * std::atan2((x.coords() - y.coords()).norm(), (x.coords() + y.coords()).norm());
}

TangentVector Sphere::inverse_retract(const Point& x, const Point& y) const {
  check_dim(x, "inverse_retract");
  check_dim(y, "inverse_retract");
  const double c = x.coords().dot(y.coords());
  if (1.0 + c < kCutLocusTol) {
    throw CutLocusError("inverse_retract: points are antipodal");
  }
  Vector w = project(x.coords(), y.coords() - x.coords());
  const double wn = w.norm();
  if (wn == 0.0) return TangentVector::zero(x);
  w *= distance(x, y) / wn;
  // Remove the rounding residue along x.
  return TangentVector(x, project(x.coords(), w));
}

TangentVector Sphere::transport_to_base(const Point& x, const Point& y,
                                        const TangentVector& xi_y) const {
  check_dim(x, "transport_to_base");
  require_base(xi_y, y, "transport_to_base");
  // v = log_y(x) is the initial velocity of the geodesic from y to x.
  const TangentVector v = inverse_retract(y, x);
  const double theta = v.norm();
  if (theta == 0.0) return TangentVector(x, project(x.coords(), xi_y.vec()));
  const Vector u = v.vec() / theta;
  const double along = u.dot(xi_y.vec());
  Vector out = xi_y.vec() + ((std::cos(theta) - 1.0) * along) * u -
               (std::sin(theta) * along) * y.coords();
  return TangentVector(x, project(x.coords(), out));
}

TangentVector Sphere::project_tangent(const Point& x, const Vector& v) const {
  check_dim(x, "project_tangent");
  if (v.size() != p_) throw ContractViolation("project_tangent: vector dimension mismatch");
  return TangentVector(x, project(x.coords(), v));
}

Point Sphere::random_point(Rng& rng) const { return rnmo::random_point(p_, rng); }

Point random_point(Eigen::Index p, Rng& rng) {
  if (p < 2) throw ContractViolation("random_point: ambient dimension must be at least 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(p);
  for (;;) {
    for (Eigen::Index i = 0; i < p; ++i) v[i] = normal(rng);
    if (v.norm() > 0.0) return Point::normalized(v);
  }
}

}  // namespace rnmo

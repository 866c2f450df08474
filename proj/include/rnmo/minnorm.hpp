#pragma once

#include <vector>

#include "rnmo/point.hpp"

namespace rnmo {

/// Working set W of subgradients, all tangent at a common base point.
/// Insertion skips vectors within 1e-12 (max-abs) of an existing member.
class SubgradientBundle {
 public:
  static constexpr double kDuplicateTol = 1e-12;

  explicit SubgradientBundle(Point base);

  // Returns false when `v` duplicates an existing member.
  bool insert(const TangentVector& v);

  const Point& base() const noexcept { return base_; }
  const std::vector<TangentVector>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const TangentVector& operator[](std::size_t i) const { return members_.at(i); }

  Matrix gram() const;

 private:
  Point base_;
  std::vector<TangentVector> members_;
};

struct MinNormOptions {
  // Stop when ‖x‖² - min_i <x, ξ_i> <= gap_tol * max(1, ‖x‖²), x = Σ λ_i ξ_i.
  double gap_tol = 1e-12;
  // Absolute gap accepted when the active-set iteration stalls in rounding noise.
  double stall_gap_tol = 1e-9;
  // Major-iteration cap is cap_factor * |W|.
  int cap_factor = 100;
  int projected_gradient_iters = 20000;
};

struct MinNormResult {
  TangentVector direction;  // g = -Σ λ_i ξ_i
  Vector weights;           // λ on the unit simplex, one entry per bundle member
  double norm = 0.0;
  double gap = 0.0;         // final duality gap ‖g‖² + max_i <g, ξ_i>
  int iterations = 0;
  bool used_fallback = false;
};

/// argmin over g in -conv W of ‖g‖, solved with Wolfe's minimum-norm-point
/// method on the Gram matrix of W. Falls back to projected gradient on the
/// simplex when the affine subproblem is numerically singular.
///
/// Throws NumericalError (carrying the best duality gap) when neither route
/// reaches the tolerance.
MinNormResult min_norm_neg_hull(const SubgradientBundle& W, const MinNormOptions& opts = {});

namespace detail {

// Minimum of λᵀGλ over the simplex; returns λ. Exposed for testing.
Vector simplex_qp_wolfe(const Matrix& G, const MinNormOptions& opts, int& iterations,
                        bool& used_fallback, double& gap);
Vector simplex_qp_projected_gradient(const Matrix& G, Vector lambda, int max_iters, double gap_tol,
                                     double& gap);
Vector project_to_simplex(const Vector& v);

}  // namespace detail

}  // namespace rnmo

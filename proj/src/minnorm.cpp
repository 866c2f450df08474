#include "rnmo/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <optional>

#include "rnmo/errors.hpp"

namespace rnmo {

SubgradientBundle::SubgradientBundle(Point base) : base_(std::move(base)) {}

bool SubgradientBundle::insert(const TangentVector& v) {
  if (!v.base().same_as(base_)) {
    throw ContractViolation("SubgradientBundle::insert: vector is based at a different point");
  }
  for (const auto& m : members_) {
    if ((m.vec() - v.vec()).lpNorm<Eigen::Infinity>() <= kDuplicateTol) return false;
  }
  members_.push_back(v);
  return true;
}

Matrix SubgradientBundle::gram() const {
  const auto r = static_cast<Eigen::Index>(members_.size());
  Matrix V(base_.dim(), r);
  for (Eigen::Index i = 0; i < r; ++i) V.col(i) = members_[static_cast<std::size_t>(i)].vec();
  return V.transpose() * V;
}

namespace detail {

namespace {

// Minimizer of αᵀ G_S α subject to Σ α = 1 (no sign constraint), from the
// bordered KKT system. Returns nullopt when the system stays singular after
// a tiny diagonal shift.
std::optional<Vector> affine_min(const Matrix& G, const std::vector<Eigen::Index>& S, double scale) {
  const auto s = static_cast<Eigen::Index>(S.size());
  Matrix K = Matrix::Zero(s + 1, s + 1);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) K(a, b) = G(S[a], S[b]);
    K(a, s) = 1.0;
    K(s, a) = 1.0;
  }
  Vector rhs = Vector::Zero(s + 1);
  rhs[s] = 1.0;

  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt == 1) {
      for (Eigen::Index a = 0; a < s; ++a) K(a, a) += 1e-14 * scale;
    }
    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible()) continue;
    Vector sol = lu.solve(rhs);
    if (!sol.allFinite()) continue;
    Vector alpha = sol.head(s);
    if (std::abs(alpha.sum() - 1.0) > 1e-8) continue;
    return alpha;
  }
  return std::nullopt;
}

double duality_gap(const Matrix& G, const Vector& lambda) {
  const Vector Gl = G * lambda;
  return lambda.dot(Gl) - Gl.minCoeff();
}

}  // namespace

Vector project_to_simplex(const Vector& v) {
  // Sort-based Euclidean projection onto {λ >= 0, Σ λ = 1}.
  Vector u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    cumsum += u[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Vector simplex_qp_projected_gradient(const Matrix& G, Vector lambda, int max_iters, double gap_tol,
                                     double& gap) {
  const double lipschitz = 2.0 * std::max(G.trace(), 1e-300);
  const double step = 1.0 / lipschitz;
  Vector best = lambda;
  double best_gap = duality_gap(G, lambda);
  for (int k = 0; k < max_iters && best_gap > gap_tol; ++k) {
    lambda = project_to_simplex(lambda - step * 2.0 * (G * lambda));
    const double g = duality_gap(G, lambda);
    if (g < best_gap) {
      best_gap = g;
      best = lambda;
    }
  }
  gap = best_gap;
  return best;
}

Vector simplex_qp_wolfe(const Matrix& G, const MinNormOptions& opts, int& iterations,
                        bool& used_fallback, double& gap) {
  const Eigen::Index r = G.rows();
  const double scale = std::max(1.0, G.diagonal().maxCoeff());
  used_fallback = false;
  iterations = 0;

  Eigen::Index start = 0;
  G.diagonal().minCoeff(&start);
  std::vector<Eigen::Index> S{start};
  Vector lambda = Vector::Zero(r);
  lambda[start] = 1.0;

  auto fallback = [&]() {
    used_fallback = true;
    return simplex_qp_projected_gradient(G, lambda, opts.projected_gradient_iters,
                                         opts.stall_gap_tol, gap);
  };

  const int cap = opts.cap_factor * static_cast<int>(r);
  for (int it = 0; it < cap; ++it) {
    iterations = it + 1;
    const Vector Gl = G * lambda;
    const double xx = lambda.dot(Gl);
    Eigen::Index j = 0;
    const double min_proj = Gl.minCoeff(&j);
    gap = xx - min_proj;
    if (gap <= opts.gap_tol * std::max(1.0, xx)) return lambda;

    if (std::find(S.begin(), S.end(), j) != S.end()) {
      // No new vertex improves the current face; the remaining gap is rounding.
      if (gap <= opts.stall_gap_tol) return lambda;
      return fallback();
    }
    S.push_back(j);

    // Minor cycle: move toward the affine minimizer of the current face,
    // dropping vertices whose weight hits zero.
    for (;;) {
      const auto alpha = affine_min(G, S, scale);
      if (!alpha) return fallback();
      const auto s = static_cast<Eigen::Index>(S.size());
      if ((alpha->array() > 0.0).all()) {
        for (Eigen::Index a = 0; a < s; ++a) lambda[S[a]] = (*alpha)[a];
        break;
      }
      double theta = 1.0;
      Eigen::Index leaving = -1;
      for (Eigen::Index a = 0; a < s; ++a) {
        const double la = lambda[S[a]];
        const double aa = (*alpha)[a];
        if (aa <= 0.0) {
          const double th = la / (la - aa);
          if (th < theta) {
            theta = th;
            leaving = a;
          }
        }
      }
      if (leaving < 0) return fallback();
      if (S[leaving] == j && theta == 0.0) {
        // The vertex just added cannot enter the face.
        if (gap <= opts.stall_gap_tol) return lambda;
        return fallback();
      }
      for (Eigen::Index a = 0; a < s; ++a) {
        lambda[S[a]] = (1.0 - theta) * lambda[S[a]] + theta * (*alpha)[a];
      }
      lambda[S[leaving]] = 0.0;
      std::vector<Eigen::Index> kept;
      for (Eigen::Index a = 0; a < s; ++a) {
        if (lambda[S[a]] > 0.0) kept.push_back(S[a]);
        else lambda[S[a]] = 0.0;
      }
      S = std::move(kept);
      lambda /= lambda.sum();
    }
  }
  gap = duality_gap(G, lambda);
  if (gap <= opts.stall_gap_tol) return lambda;
  return fallback();
}

}  // namespace detail

MinNormResult min_norm_neg_hull(const SubgradientBundle& W, const MinNormOptions& opts) {
  if (W.empty()) throw ContractViolation("min_norm_neg_hull: empty bundle");
  const auto r = static_cast<Eigen::Index>(W.size());
  const Point& base = W.base();

  bool all_zero = true;
  for (const auto& m : W.members()) all_zero = all_zero && m.norm() < 1e-14;
  if (all_zero) {
    Vector weights = Vector::Zero(r);
    weights[0] = 1.0;
    return {TangentVector::zero(base), weights, 0.0, 0.0, 0, false};
  }

  const Matrix G = W.gram();
  int iterations = 0;
  bool used_fallback = false;
  double gap = 0.0;
  Vector lambda = detail::simplex_qp_wolfe(G, opts, iterations, used_fallback, gap);
  if (used_fallback && gap > opts.stall_gap_tol) {
    throw NumericalError("min_norm_neg_hull: no convergence (duality gap " + std::to_string(gap) + ")",
                         gap);
  }

  Vector dir = Vector::Zero(base.dim());
  for (Eigen::Index i = 0; i < r; ++i) {
    if (lambda[i] != 0.0) dir -= lambda[i] * W[static_cast<std::size_t>(i)].vec();
  }
  dir -= base.coords().dot(dir) * base.coords();

  double max_inner = -std::numeric_limits<double>::infinity();
  for (const auto& m : W.members()) max_inner = std::max(max_inner, dir.dot(m.vec()));
  const double n = dir.norm();
  return {TangentVector(base, std::move(dir)), std::move(lambda), n, n * n + max_inner, iterations,
          used_fallback};
}

}  // namespace rnmo

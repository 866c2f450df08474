#include "rnmo/descent.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <optional>

#include "rnmo/errors.hpp"

namespace rnmo {

void SolverParams::validate(double injectivity_radius) const {
  if (!(epsilon > 0.0)) throw ConfigError("eps", "must be positive");
  if (!(epsilon < 0.5 * injectivity_radius)) {
    throw ConfigError("eps", "must be below half the injectivity radius (" +
                                 std::to_string(0.5 * injectivity_radius) + ")");
  }
  if (!(delta > 0.0)) throw ConfigError("delta", "must be positive");
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("c", "must lie in (0, 1)");
  if (!(alpha > 1.0)) throw ConfigError("alpha", "must be greater than 1");
  if (!(t0 > 0.0)) throw ConfigError("t0", "must be positive");
  if (max_outer_iters < 0) throw ConfigError("max_iters", "must be non-negative");
  if (max_pdd_iters < 1) throw ConfigError("max_pdd_iters", "must be at least 1");
  if (max_pns_bisections < 1) throw ConfigError("max_pns_bisections", "must be at least 1");
}

const char* to_string(SubgradientSearch s) {
  switch (s) {
    case SubgradientSearch::Found: return "Found";
    case SubgradientSearch::StationaryH: return "StationaryH";
    case SubgradientSearch::CapHit: return "CapHit";
  }
  return "?";
}

const char* to_string(DirectionStatus s) {
  switch (s) {
    case DirectionStatus::AcceptableDescent: return "AcceptableDescent";
    case DirectionStatus::BelowDelta: return "BelowDelta";
    case DirectionStatus::CapHit: return "CapHit";
  }
  return "?";
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::CriticalReached: return "CriticalReached";
    case RunStatus::IterationCapHit: return "IterationCapHit";
    case RunStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

NewSubgradient find_new_subgradient(const ObjectiveVector& F, std::size_t j, const Point& x,
                                    double fx_j, const TangentVector& g, const SolverParams& params) {
  const Manifold& M = F.manifold();
  const double gn = g.norm();
  if (!(gn > 0.0)) throw ContractViolation("find_new_subgradient: zero search direction");
  const double gn2c = params.c * gn * gn;

  auto h = [&](double t, const Point& y) { return F.eval(j, y) - fx_j + t * gn2c; };

  double a = 0.0;
  double b = params.epsilon / gn;
  double hb = h(b, M.retract(x, g.scaled(b)));
  double t = 0.5 * (a + b);

  std::optional<TangentVector> xi;
  for (int k = 0; k < params.max_pns_bisections; ++k) {
    const Point y = M.retract(x, g.scaled(t));
    // Unit locking factor: the transported vector is used as is.
    xi = M.transport_to_base(x, y, F.subgradient(j, y));
    if (xi->vec().dot(g.vec()) > -gn2c) {
      return {t, *xi, SubgradientSearch::Found, k};
    }
    const double ht = h(t, y);
    if (hb > ht) {
      a = t;
    } else {
      b = t;
      hb = ht;
    }
    const double next = 0.5 * (a + b);
    if (next == a || next == b) {
      // Interval collapsed to a single double: h_j is stationary here.
      return {t, *xi, SubgradientSearch::StationaryH, k + 1};
    }
    t = next;
  }
  return {t, *xi, SubgradientSearch::CapHit, params.max_pns_bisections};
}

DescentDirection compute_descent_direction(const Point& x, const ObjectiveVector& F,
                                           const SolverParams& params) {
  return compute_descent_direction(x, eval_all(F, x), F, params);
}

DescentDirection compute_descent_direction(const Point& x, const Vector& fx,
                                           const ObjectiveVector& F, const SolverParams& params) {
  const Manifold& M = F.manifold();
  const std::size_t m = F.size();

  // W_0: the Clarke subgradient of each objective at x itself, a member of
  // its ε-subdifferential.
  SubgradientBundle W(x);
  for (std::size_t i = 0; i < m; ++i) W.insert(F.subgradient(i, x));

  int inner = 0;
  int pns_calls = 0;
  std::vector<double> norms;
  auto finish = [&](const TangentVector& g, DirectionStatus flag, std::string diag) {
    return DescentDirection{g, W, flag, inner, pns_calls, norms, std::move(diag)};
  };

  std::optional<TangentVector> g;
  for (int s = 0; s < params.max_pdd_iters; ++s) {
    const MinNormResult mn = min_norm_neg_hull(W, params.minnorm);
    g = mn.direction;
    ++inner;
    const double gn = g->norm();
    norms.push_back(gn);
    if (gn <= params.delta) return finish(*g, DirectionStatus::BelowDelta, {});

    const double t = params.epsilon / gn;
    const Point y = M.retract(x, g->scaled(t));
    std::vector<std::size_t> violated;
    for (std::size_t j = 0; j < m; ++j) {
      if (F.eval(j, y) > decrease_threshold(fx[static_cast<Eigen::Index>(j)], t, params.c, gn)) {
        violated.push_back(j);
      }
    }
    if (violated.empty()) return finish(*g, DirectionStatus::AcceptableDescent, {});

    bool grew = false;
    for (std::size_t j : violated) {
      const NewSubgradient ns =
          find_new_subgradient(F, j, x, fx[static_cast<Eigen::Index>(j)], *g, params);
      ++pns_calls;
      if (ns.flag != SubgradientSearch::Found) {
        return finish(*g, DirectionStatus::CapHit,
                      std::string("subgradient search for objective ") + std::to_string(j) +
                          " ended with " + to_string(ns.flag) + " after " +
                          std::to_string(ns.bisections) + " bisections");
      }
      if (!(ns.xi.vec().dot(g->vec()) > -params.c * gn * gn)) {
        return finish(*g, DirectionStatus::CapHit, "new subgradient fails the strict inner-product bound");
      }
      grew = W.insert(ns.xi) || grew;
    }
    if (!grew) {
      return finish(*g, DirectionStatus::CapHit, "no new subgradient entered the bundle");
    }
  }
  return finish(*g, DirectionStatus::CapHit,
                "direction search hit the cap of " + std::to_string(params.max_pdd_iters) +
                    " rounds");
}

ArmijoStep armijo_step(const Point& x, const Vector& fx, const TangentVector& g,
                       const ObjectiveVector& F, const SolverParams& params) {
  const Manifold& M = F.manifold();
  const double gn = g.norm();
  if (!(gn > 0.0)) throw ContractViolation("armijo_step: zero search direction");

  auto accepted = [&](double t, const Vector& fy) {
    for (Eigen::Index i = 0; i < fx.size(); ++i) {
      if (!(fy[i] <= decrease_threshold(fx[i], t, params.c, gn))) return false;
    }
    return true;
  };

  int trials = 0;
  if (params.t0 * gn >= params.epsilon) {
    auto largest =
        static_cast<long>(std::floor((std::log(params.t0 * gn) - std::log(params.epsilon)) /
                                     std::log(params.alpha)));
    // Keep every trial step at or above ε/‖g‖ despite rounding in the logs.
    while (largest >= 0 && params.t0 * std::pow(params.alpha, -static_cast<double>(largest)) * gn <
                               params.epsilon) {
      --largest;
    }
    for (long l = 0; l <= largest; ++l) {
      const double t = params.t0 * std::pow(params.alpha, -static_cast<double>(l));
      Point y = M.retract(x, g.scaled(t));
      Vector fy = eval_all(F, y);
      ++trials;
      if (accepted(t, fy)) return {t, std::move(y), std::move(fy), false, trials};
    }
  }
  const double t = params.epsilon / gn;
  Point y = M.retract(x, g.scaled(t));
  Vector fy = eval_all(F, y);
  return {t, std::move(y), std::move(fy), true, trials};
}

RunRecord run(const Point& x0, const ObjectiveVector& F, const SolverParams& params) {
  params.validate(F.manifold().injectivity_radius());
  RunRecord rec;
  try {
    Point x = x0;
    Vector fx = eval_all(F, x);
    for (int k = 0;; ++k) {
      const DescentDirection dd = compute_descent_direction(x, fx, F, params);
      rec.iterates.push_back(x);
      rec.objective_values.push_back(fx);
      rec.direction_norms.push_back(dd.direction.norm());
      rec.step_sizes.push_back(0.0);
      rec.pdd_inner_counts.push_back(dd.inner_iterations);
      rec.pns_call_counts.push_back(dd.pns_calls);

      if (dd.flag == DirectionStatus::BelowDelta) {
        rec.status = RunStatus::CriticalReached;
        rec.final_bundle = dd.bundle.members();
        return rec;
      }
      if (dd.flag == DirectionStatus::CapHit) {
        rec.status = RunStatus::NumericalFailure;
        rec.message = dd.diagnostic;
        return rec;
      }
      if (k >= params.max_outer_iters) {
        rec.status = RunStatus::IterationCapHit;
        return rec;
      }

      ArmijoStep step = armijo_step(x, fx, dd.direction, F, params);
      rec.step_sizes.back() = step.t;
      const double gn = dd.direction.norm();
      for (Eigen::Index i = 0; i < fx.size(); ++i) {
        if (!(step.f_next[i] <= decrease_threshold(fx[i], step.t, params.c, gn))) {
          rec.status = RunStatus::NumericalFailure;
          rec.message = "accepted step violates the decrease certificate";
          return rec;
        }
      }
      x = std::move(step.x_next);
      fx = std::move(step.f_next);
    }
  } catch (const std::exception& e) {
    rec.status = RunStatus::NumericalFailure;
    rec.message = e.what();
  }
  return rec;
}

}  // namespace rnmo

#pragma once

#include <string>
#include <vector>

#include "rnmo/minnorm.hpp"
#include "rnmo/oracle.hpp"

namespace rnmo {

struct SolverParams {
  double epsilon = 1e-4;  // radius of the ε-subdifferential ball (tangent norm)
  double delta = 1e-3;    // criticality tolerance on the min-norm direction
  double c = 0.25;        // Armijo constant in (0, 1)
  double alpha = 2.0;     // step shrink base, > 1
  double t0 = 1.0;        // initial trial step
  int max_outer_iters = 10000;
  int max_pdd_iters = 200;
  int max_pns_bisections = 50;
  MinNormOptions minnorm;

  // Throws ConfigError naming the first invalid field.
  void validate(double injectivity_radius) const;
};

enum class SubgradientSearch { Found, StationaryH, CapHit };
enum class DirectionStatus { AcceptableDescent, BelowDelta, CapHit };
enum class RunStatus { CriticalReached, IterationCapHit, NumericalFailure };

const char* to_string(SubgradientSearch s);
const char* to_string(DirectionStatus s);
const char* to_string(RunStatus s);

struct NewSubgradient {
  double t = 0.0;
  TangentVector xi;  // already transported back to x
  SubgradientSearch flag = SubgradientSearch::CapHit;
  int bisections = 0;
};

/// Bisection search for a transported subgradient of objective j at some
/// R_x(t g), t in [0, ε/‖g‖], with <ξ, g> > -c‖g‖².
///
/// `fx_j` is f_j(x). Bisection keeps the half where h_j(t) = f_j(R_x(t g))
/// - f_j(x) + c t ‖g‖² has not yet fallen below h_j(b).
NewSubgradient find_new_subgradient(const ObjectiveVector& F, std::size_t j, const Point& x,
                                    double fx_j, const TangentVector& g, const SolverParams& params);

struct DescentDirection {
  TangentVector direction;
  SubgradientBundle bundle;
  DirectionStatus flag = DirectionStatus::CapHit;
  int inner_iterations = 0;         // number of min-norm solves
  int pns_calls = 0;
  std::vector<double> inner_norms;  // ‖g̃_s‖ for each inner round
  std::string diagnostic;           // set on CapHit
};

/// Grows a subgradient bundle at x until its min-norm negated element either
/// has norm <= δ or passes the sufficient-decrease test
///   f_i(R_x((ε/‖g‖) g)) <= f_i(x) - cε‖g‖   for every i.
DescentDirection compute_descent_direction(const Point& x, const ObjectiveVector& F,
                                           const SolverParams& params);
DescentDirection compute_descent_direction(const Point& x, const Vector& fx,
                                           const ObjectiveVector& F, const SolverParams& params);

struct ArmijoStep {
  double t = 0.0;
  Point x_next;
  Vector f_next;
  bool fallback = false;  // true when t = ε/‖g‖
  int trials = 0;
};

/// Largest step α^{-ℓ} t0 >= ε/‖g‖ giving the Armijo decrease in every
/// objective, or ε/‖g‖ when none does.
ArmijoStep armijo_step(const Point& x, const Vector& fx, const TangentVector& g,
                       const ObjectiveVector& F, const SolverParams& params);

/// Right-hand side of the common decrease test f_i(x) - t c ‖g‖². Every
/// decrease comparison in the solver goes through this so that the line
/// search and the direction test agree bit for bit.
inline double decrease_threshold(double fx, double t, double c, double gnorm) {
  return fx - t * c * gnorm * gnorm;
}

struct RunRecord {
  std::vector<Point> iterates;
  std::vector<Vector> objective_values;
  std::vector<double> direction_norms;
  std::vector<double> step_sizes;  // 0 on the terminal entry
  std::vector<int> pdd_inner_counts;
  std::vector<int> pns_call_counts;
  RunStatus status = RunStatus::NumericalFailure;
  std::string message;
  // Bundle whose min-norm element certified the stop (CriticalReached only).
  std::vector<TangentVector> final_bundle;

  std::size_t steps() const { return iterates.empty() ? 0 : iterates.size() - 1; }
};

/// Outer descent loop. Each recorded entry k holds x_k, F(x_k), ‖g_k‖, the
/// accepted step t_k and the inner-loop counts used to compute g_k.
RunRecord run(const Point& x0, const ObjectiveVector& F, const SolverParams& params);

}  // namespace rnmo

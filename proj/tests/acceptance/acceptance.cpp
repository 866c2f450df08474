// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
// `--expect-fail N` (repeatable) declares criterion N as a known, analyzed
// failure. Its FAIL line is still printed; the exit status is zero only when
// the failing set equals the declared set, so an unexpected pass also
// surfaces as an error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "../unit/simplex_grid_oracle.hpp"
#include "../unit/test_support.hpp"
#include "rnmo/experiment.hpp"

using namespace rnmo;
using rnmo::testing::random_tangent;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kStarts = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::set<int> failed;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
  std::printf("[%s] criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) failed.insert(id);
}

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s > limit_seconds) {
    o.pass = false;
    o.detail += "; exceeded the " + std::to_string(static_cast<int>(limit_seconds)) + " s budget";
  }
  report(id, name, o, s);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// All runs produced by the reproduction criteria, for the invariant checks.
struct Collected {
  std::string label;
  const ProblemInstance* problem;
  std::vector<RunRecord> records;
};
// Deques keep references to earlier entries valid.
std::deque<ProblemInstance> instances;
std::deque<Collected> collected;

const Collected& solve(const std::string& label, Family f, int m) {
  instances.push_back(make_problem(default_descriptor(f, m)));
  const ProblemInstance& inst = instances.back();
  collected.push_back({label, &inst, run_multistart(inst, SolverParams{}, kStarts, 1, 0)});
  return collected.back();
}

Outcome ani_within(const Collected& c, double lo, double hi, bool require_all_critical) {
  const BatchSummary s = summarize(c.records, 1);
  Outcome o;
  o.pass = s.mean_iterations >= lo && s.mean_iterations <= hi && s.critical_reached > 0;
  if (require_all_critical) o.pass = o.pass && s.critical_reached == kStarts;
  o.detail = c.label + " ANI " + fmt("%.2f", s.mean_iterations) + " in [" + fmt("%.1f", lo) +
             ", " + fmt("%.1f", hi) + "], critical " + std::to_string(s.critical_reached) + "/" +
             std::to_string(kStarts);
  return o;
}

Outcome merge(const std::vector<Outcome>& parts) {
  Outcome o;
  for (const auto& p : parts) {
    o.pass = o.pass && p.pass;
    o.detail += (o.detail.empty() ? "" : "; ") + p.detail;
  }
  return o;
}

Outcome geometry() {
  Rng rng(2025);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double dist_err = 0, iso_err = 0, lock_err = 0, round_err = 0;
  bool zero_exact = true;
  for (int k = 0; k < 1000; ++k) {
    const int p = 2 + k % 9;
    const Sphere S(p);
    const Point x = S.random_point(rng);
    const double r = kPi * (1e-3 + (1.0 - 2e-3) * unif(rng));
    const TangentVector xi = random_tangent(x, rng, r);
    zero_exact = zero_exact && S.retract(x, TangentVector::zero(x)).coords() == x.coords();
    const Point y = S.retract(x, xi);
    dist_err = std::max(dist_err, std::abs(S.distance(y, x) - r));

    // Transport isometry from a random point z back to x.
    const Point z = S.random_point(rng);
    if (S.distance(x, z) < kPi - 1e-3) {
      const TangentVector u = random_tangent(z, rng, 1.0 + unif(rng));
      const TangentVector w = random_tangent(z, rng, 1.0 + unif(rng));
      const TangentVector tu = S.transport_to_base(x, z, u), tw = S.transport_to_base(x, z, w);
      iso_err = std::max(iso_err, std::abs(tu.vec().dot(tw.vec()) - u.vec().dot(w.vec())));
      iso_err = std::max(iso_err, std::abs(tu.norm() - u.norm()));
      round_err =
          std::max(round_err, (S.retract(x, S.inverse_retract(x, z)).coords() - z.coords()).norm());
    }

    // Locking: forward transport of ξ equals d/ds R_x(sξ) at s = 1.
    const TangentVector short_xi = random_tangent(x, rng, 0.05 + 1.4 * unif(rng));
    const Point yl = S.retract(x, short_xi);
    const double h = 1e-5;
    const Vector fd = (S.retract(x, short_xi.scaled(1 + h)).coords() -
                       S.retract(x, short_xi.scaled(1 - h)).coords()) / (2 * h);
    lock_err = std::max(lock_err, (S.transport_to_base(yl, x, short_xi).vec() - fd).norm());
  }
  Outcome o;
  o.pass = zero_exact && dist_err <= 1e-10 && iso_err <= 1e-10 && lock_err <= 1e-6 &&
           round_err <= 1e-8;
  o.detail = std::string("zero-step ") + (zero_exact ? "exact" : "inexact") +
             fmt(", distance %.2e", dist_err) + fmt(", isometry %.2e", iso_err) +
             fmt(", locking %.2e", lock_err) + fmt(", log/exp %.2e", round_err);
  return o;
}

Outcome minnorm_oracle() {
  Rng rng(4242);
  std::uniform_int_distribution<int> dim(2, 5), count(1, 4);
  std::uniform_real_distribution<double> len(0.1, 2.0);
  double max_gap = 0, max_resid = -1e300;
  bool below = true;
  for (int k = 0; k < 200; ++k) {
    const Point x = random_point(dim(rng), rng);
    SubgradientBundle W(x);
    const int r = count(rng);
    while (static_cast<int>(W.size()) < r) W.insert(random_tangent(x, rng, len(rng)));
    const MinNormResult res = min_norm_neg_hull(W);
    const double grid = rnmo::testing::grid_min_norm(W.gram(), 1000);
    below = below && grid >= res.norm - 1e-12;
    max_gap = std::max(max_gap, std::abs(grid - res.norm));
    for (const auto& m : W.members()) {
      max_resid = std::max(max_resid, res.direction.vec().dot(m.vec()) + res.norm * res.norm);
    }
  }
  Outcome o;
  o.pass = max_gap <= 2e-3 && max_resid <= 1e-8 && below;
  o.detail = fmt("max |grid - solver| %.2e", max_gap) +
             fmt(", max <g,xi> + |g|^2 %.2e", max_resid) +
             (below ? "" : ", solver above grid optimum");
  return o;
}

Outcome rayleigh_fd() {
  const auto inst = make_rayleigh(100, 2, 0);
  const Manifold& M = inst.objectives.manifold();
  Rng rng(31);
  double err = 0;
  for (int k = 0; k < 100; ++k) {
    const Point x = M.random_point(rng);
    for (int d = 0; d < 10; ++d) {
      const TangentVector dir = random_tangent(x, rng, 1.0);
      for (std::size_t i = 0; i < inst.objectives.size(); ++i) {
        const double fd = rnmo::testing::directional_fd(M, inst.objectives[i].eval, x, dir, 1e-5);
        err = std::max(err, std::abs(fd - inst.objectives.subgradient(i, x).vec().dot(dir.vec())));
      }
    }
  }
  return {err <= 1e-5, fmt("max |fd - <grad,d>| %.2e over 100 points x 10 directions", err)};
}

Outcome rayleigh_spectrum(const Collected& c) {
  bool ok = true;
  double worst = 0;
  for (std::size_t i = 0; i < c.problem->matrices.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c.problem->matrices[i], Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    for (const auto& r : c.records) {
      const double f = r.objective_values.back()[static_cast<Eigen::Index>(i)];
      const double out = std::max(lo - f, f - hi);
      worst = std::max(worst, out);
      ok = ok && f >= lo - 1e-9 && f <= hi + 1e-9;
    }
  }
  return {ok, c.label + " final values inside the spectrum" + fmt(" (max excursion %.1e)", worst)};
}

Outcome descent_invariant() {
  const double bound = SolverParams{}.c * SolverParams{}.epsilon * SolverParams{}.delta;
  long steps = 0, violations = 0;
  for (const auto& c : collected) {
    for (const auto& r : c.records) {
      for (std::size_t k = 0; k + 1 < r.iterates.size(); ++k) {
        ++steps;
        const double gn = r.direction_norms[k], t = r.step_sizes[k];
        const Vector& f0 = r.objective_values[k];
        const Vector& f1 = r.objective_values[k + 1];
        for (Eigen::Index i = 0; i < f0.size(); ++i) {
          if (!(f1[i] <= f0[i] - t * SolverParams{}.c * gn * gn)) ++violations;
        }
      }
      const Vector& first = r.objective_values.front();
      const Vector& last = r.objective_values.back();
      for (Eigen::Index i = 0; i < first.size(); ++i) {
        if (!(first[i] - last[i] >= bound * static_cast<double>(r.steps()))) ++violations;
      }
    }
  }
  return {violations == 0, std::to_string(steps) + " steps checked, " +
                               std::to_string(violations) + " violations"};
}

Outcome termination_certificate() {
  long critical = 0, bad = 0;
  for (const auto& c : collected) {
    for (const auto& r : c.records) {
      if (r.status != RunStatus::CriticalReached) continue;
      ++critical;
      SubgradientBundle W(r.iterates.back());
      for (const auto& m : r.final_bundle) W.insert(m);
      if (W.empty() || !(min_norm_neg_hull(W).norm <= 1e-3)) ++bad;
    }
  }
  return {bad == 0 && critical > 0, std::to_string(critical) +
                                        " critical runs re-certified, " + std::to_string(bad) +
                                        " with bundle min-norm above 1e-3"};
}

Outcome pareto_shape(const Collected& c) {
  std::vector<Vector> pts;
  for (const auto& r : c.records) pts.push_back(r.objective_values.back());
  int dominated = 0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (a != b && ((pts[b].array() + 1e-3) < pts[a].array()).all()) {
        ++dominated;
        break;
      }
    }
  }
  // Outliers are reported, never failed.
  return {true, std::to_string(dominated) + " of " + std::to_string(pts.size()) +
                    " final points dominated beyond the 1e-3 band (report only)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int a = 1; a < argc; ++a) {
    if (std::string(argv[a]) == "--expect-fail" && a + 1 < argc) {
      expected.insert(std::stoi(argv[++a]));
    } else {
      std::fprintf(stderr, "usage: %s [--expect-fail N]...\n", argv[0]);
      return 64;
    }
  }
  std::printf("acceptance suite: %d starts per reproduction\n", kStarts);

  criterion(1, "geometry", 5, geometry);
  criterion(2, "min-norm oracle", 30, minnorm_oracle);
  criterion(5, "Rayleigh finite differences", 60, rayleigh_fd);

  const Collected* ex1 = nullptr;
  criterion(6, "max-linear ANI", 60, [&] {
    ex1 = &solve("example1", Family::MaxLinear, 2);
    return ani_within(*ex1, 2.0, 10.0, true);
  });
  criterion(7, "geodesic median ANI", 300, [&] {
    return merge({ani_within(solve("geomedian m=2", Family::GeoMedian, 2), 5, 40, false),
                  ani_within(solve("geomedian m=3", Family::GeoMedian, 3), 5, 40, false)});
  });
  criterion(8, "Rayleigh ANI and spectrum", 900, [&] {
    const Collected& r2 = solve("rayleigh m=2", Family::Rayleigh, 2);
    const Collected& r3 = solve("rayleigh m=3", Family::Rayleigh, 3);
    return merge({ani_within(r2, 266.3 / 3, 266.3 * 3, false),
                  ani_within(r3, 192.4 / 3, 192.4 * 3, false), rayleigh_spectrum(r2),
                  rayleigh_spectrum(r3)});
  });
  criterion(9, "sphere lasso ANI", 900, [&] {
    return merge({ani_within(solve("lasso m=2", Family::SphereLasso, 2), 98.8 / 3, 98.8 * 3, false),
                  ani_within(solve("lasso m=3", Family::SphereLasso, 3), 102.1 / 3, 102.1 * 3,
                             false)});
  });

  // Invariants over every run produced above.
  criterion(3, "descent invariant", 60, descent_invariant);
  criterion(4, "termination certificate", 60, termination_certificate);
  criterion(10, "Pareto front shape", 60, [&] {
    if (ex1 == nullptr) return Outcome{false, "example1 runs unavailable"};
    return pareto_shape(*ex1);
  });

  std::printf("%s: %zu criterion failure(s)\n", failed.empty() ? "ACCEPTED" : "REJECTED",
              failed.size());
  for (int id : failed) {
    std::printf("  criterion %d failed%s\n", id,
                expected.count(id) ? " (declared known failure)" : " (UNEXPECTED)");
  }
  for (int id : expected) {
    if (!failed.count(id)) std::printf("  criterion %d passed but was declared failing\n", id);
  }
  return failed == expected ? 0 : 1;
}

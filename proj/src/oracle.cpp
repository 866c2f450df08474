#include "rnmo/oracle.hpp"

#include <exception>

#include "rnmo/errors.hpp"

namespace rnmo {

ObjectiveVector::ObjectiveVector(std::shared_ptr<const Manifold> manifold,
                                 std::vector<ObjectiveOracle> oracles)
    : manifold_(std::move(manifold)), oracles_(std::move(oracles)) {
  if (!manifold_) throw ContractViolation("ObjectiveVector: null manifold");
  if (oracles_.empty()) throw ContractViolation("ObjectiveVector: needs at least one objective");
  for (const auto& o : oracles_) {
    if (!o.eval || !o.clarke_subgradient) {
      throw ContractViolation("ObjectiveVector: oracle '" + o.label + "' is incomplete");
    }
  }
}

double ObjectiveVector::eval(std::size_t i, const Point& x) const {
  try {
    return oracles_.at(i).eval(x);
  } catch (const OracleError&) {
    throw;
  } catch (const std::exception& e) {
    throw OracleError(i, e.what());
  }
}

TangentVector ObjectiveVector::subgradient(std::size_t i, const Point& x) const {
  try {
    return oracles_.at(i).clarke_subgradient(x);
  } catch (const OracleError&) {
    throw;
  } catch (const std::exception& e) {
    throw OracleError(i, e.what());
  }
}

Vector eval_all(const ObjectiveVector& F, const Point& x) {
  Vector out(static_cast<Eigen::Index>(F.size()));
  for (std::size_t i = 0; i < F.size(); ++i) out[static_cast<Eigen::Index>(i)] = F.eval(i, x);
  return out;
}

TangentVector transported_subgradient(const Manifold& M, const ObjectiveOracle& f, const Point& x,
                                      double t, const TangentVector& g) {
  if (t == 0.0) return f.clarke_subgradient(x);
  const Point y = M.retract(x, g.scaled(t));
  // Parallel transport satisfies the locking condition with unit factor, so
  // the transported vector is used without rescaling.
  return M.transport_to_base(x, y, f.clarke_subgradient(y));
}

}  // namespace rnmo

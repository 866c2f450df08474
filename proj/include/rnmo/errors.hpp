#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnmo {

// Broken precondition or invariant (base-point mismatch, off-manifold point...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A requested log map or transport crosses the cut locus (antipodal points).
class CutLocusError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative numerical routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Failure inside the evaluation of one objective, tagged with its index.
class OracleError : public std::runtime_error {
 public:
  OracleError(std::size_t index, const std::string& what)
      : std::runtime_error("objective " + std::to_string(index) + ": " + what),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Invalid user-facing configuration; names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace rnmo

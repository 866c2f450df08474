#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnmo/oracle.hpp"

namespace rnmo {

enum class Family { MaxLinear, GeoMedian, Rayleigh, SphereLasso };

// Accepts canonical names (maxlinear, geomedian, rayleigh, lasso) and the
// aliases example1..example4. Throws ConfigError("family") otherwise.
Family parse_family(const std::string& name);
const char* family_name(Family f);

/// Everything needed to rebuild a benchmark instance bit for bit.
struct ProblemDescriptor {
  Family family = Family::MaxLinear;
  int p = 3;
  int m = 2;
  int n = 0;                                 // rows of A_i (SphereLasso only)
  std::uint64_t instance_seed = 0;
  std::vector<std::vector<double>> weights;  // GeoMedian: one simplex per objective
  std::vector<double> lambdas;               // SphereLasso: one λ_i per objective

  // Throws ConfigError naming the offending field.
  void validate() const;
};

/// Benchmark defaults: S^2 with m = 2 for MaxLinear; p = 100 with the
/// published anchor weights for GeoMedian; p = 100 for Rayleigh; n = 100,
/// p = 60, λ = (0.01, 0.02, 0.02) for SphereLasso. `m` selects the 2- or
/// 3-objective variant where one exists.
ProblemDescriptor default_descriptor(Family f, int m = 2);

nlohmann::json to_json(const ProblemDescriptor& d);
// Missing keys take the family defaults; unknown families and malformed
// weights raise ConfigError.
ProblemDescriptor descriptor_from_json(const nlohmann::json& j);

struct ProblemInstance {
  ProblemDescriptor descriptor;
  ObjectiveVector objectives;
  std::vector<Matrix> matrices;             // Rayleigh: symmetric A_i; Lasso: A_i (n x p)
  std::vector<Vector> offsets;              // Lasso: b_i
  std::vector<std::vector<Point>> anchors;  // GeoMedian: y_j^i
};

ProblemInstance make_example1();
ProblemInstance make_geomedian(int p, const std::vector<std::vector<double>>& weights,
                               std::uint64_t anchor_seed);
ProblemInstance make_geomedian(std::vector<std::vector<Point>> anchors,
                               const std::vector<std::vector<double>>& weights);
ProblemInstance make_rayleigh(int p, int m, std::uint64_t matrix_seed);
ProblemInstance make_rayleigh(std::vector<Matrix> symmetric);
ProblemInstance make_sphere_lasso(int n, int p, int m, const std::vector<double>& lambdas,
                                  std::uint64_t data_seed);
ProblemInstance make_sphere_lasso(std::vector<Matrix> A, std::vector<Vector> b,
                                  const std::vector<double>& lambdas);

ProblemInstance make_problem(const ProblemDescriptor& d);

}  // namespace rnmo

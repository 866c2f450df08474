#include "rnmo/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <numeric>

#include "rnmo/errors.hpp"
#include "rnmo/sphere.hpp"

namespace rnmo {

namespace {

constexpr double kMaxTieTol = 1e-12;
constexpr double kAnchorTol = 1e-9;
constexpr double kSimplexTol = 1e-9;

const std::vector<std::vector<double>> kGeoMedianWeights = {
    {0.1, 0.1, 0.1, 0.2, 0.2, 0.3},
    {0.1, 0.2, 0.3, 0.4},
    {0.1, 0.1, 0.2, 0.3, 0.3},
};
const std::vector<double> kLassoLambdas = {0.01, 0.02, 0.02};

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix A(rows, cols);
  // Row-major fill keeps the draw order independent of Eigen's storage.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = normal(rng);
  return A;
}

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void validate_weights(const std::vector<std::vector<double>>& weights) {
  if (weights.empty()) throw ConfigError("weights", "need at least one objective");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto& w = weights[i];
    const std::string field = "weights[" + std::to_string(i) + "]";
    if (w.empty()) throw ConfigError(field, "empty weight vector");
    for (double v : w) {
      if (!(v >= 0.0)) throw ConfigError(field, "weights must be nonnegative");
    }
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(s - 1.0) > kSimplexTol) throw ConfigError(field, "weights must sum to 1");
  }
}

}  // namespace

Family parse_family(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "maxlinear" || s == "example1") return Family::MaxLinear;
  if (s == "geomedian" || s == "example2") return Family::GeoMedian;
  if (s == "rayleigh" || s == "example3") return Family::Rayleigh;
  if (s == "lasso" || s == "spherelasso" || s == "example4") return Family::SphereLasso;
  throw ConfigError("family", "unknown problem family '" + name + "'");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::MaxLinear: return "maxlinear";
    case Family::GeoMedian: return "geomedian";
    case Family::Rayleigh: return "rayleigh";
    case Family::SphereLasso: return "lasso";
  }
  return "?";
}

void ProblemDescriptor::validate() const {
  if (m < 1) throw ConfigError("m", "must be at least 1");
  if (p < 2) throw ConfigError("p", "must be at least 2");
  switch (family) {
    case Family::MaxLinear:
      if (p != 3) throw ConfigError("p", "maxlinear is defined on S^2 (p = 3)");
      if (m != 2) throw ConfigError("m", "maxlinear has exactly 2 objectives");
      break;
    case Family::GeoMedian:
      validate_weights(weights);
      if (static_cast<int>(weights.size()) != m) {
        throw ConfigError("weights", "need one weight vector per objective");
      }
      break;
    case Family::Rayleigh:
      break;
    case Family::SphereLasso:
      if (n < 1) throw ConfigError("n", "must be at least 1");
      if (static_cast<int>(lambdas.size()) != m) {
        throw ConfigError("lambdas", "need one lambda per objective");
      }
      for (double l : lambdas) {
        if (!(l >= 0.0)) throw ConfigError("lambdas", "must be nonnegative");
      }
      break;
  }
}

ProblemDescriptor default_descriptor(Family f, int m) {
  ProblemDescriptor d;
  d.family = f;
  d.m = m;
  switch (f) {
    case Family::MaxLinear:
      d.p = 3;
      d.m = 2;
      break;
    case Family::GeoMedian:
      d.p = 100;
      for (int i = 0; i < m; ++i) {
        d.weights.push_back(kGeoMedianWeights[static_cast<std::size_t>(i) % kGeoMedianWeights.size()]);
      }
      break;
    case Family::Rayleigh:
      d.p = 100;
      break;
    case Family::SphereLasso:
      d.n = 100;
      d.p = 60;
      for (int i = 0; i < m; ++i) {
        d.lambdas.push_back(kLassoLambdas[std::min<std::size_t>(static_cast<std::size_t>(i),
                                                                kLassoLambdas.size() - 1)]);
      }
      break;
  }
  return d;
}

nlohmann::json to_json(const ProblemDescriptor& d) {
  nlohmann::json j;
  j["family"] = family_name(d.family);
  j["p"] = d.p;
  j["m"] = d.m;
  j["instance_seed"] = d.instance_seed;
  if (d.family == Family::GeoMedian) j["weights"] = d.weights;
  if (d.family == Family::SphereLasso) {
    j["n"] = d.n;
    j["lambdas"] = d.lambdas;
  }
  return j;
}

ProblemDescriptor descriptor_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("problem", "expected an object");
  if (!j.contains("family")) throw ConfigError("family", "missing");
  try {
    const Family f = parse_family(j.at("family").get<std::string>());
    const int m = j.value("m", 2);
    ProblemDescriptor d = default_descriptor(f, m);
    d.p = j.value("p", d.p);
    d.n = j.value("n", d.n);
    d.instance_seed = j.value("instance_seed", d.instance_seed);
    if (j.contains("weights")) d.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    if (j.contains("lambdas")) d.lambdas = j.at("lambdas").get<std::vector<double>>();
    d.validate();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("problem", e.what());
  }
}

ProblemInstance make_example1() {
  ProblemDescriptor d = default_descriptor(Family::MaxLinear);
  // f1 = max(0.5 x1 + x3, 0.3 x2 + 1.5 x3); lowest active piece on ties.
  auto sphere = std::make_shared<const Sphere>(3);
  ObjectiveOracle f1;
  f1.label = "max(0.5x1+x3, 0.3x2+1.5x3)";
  f1.eval = [](const Point& x) {
    return std::max(0.5 * x[0] + x[2], 0.3 * x[1] + 1.5 * x[2]);
  };
  f1.clarke_subgradient = [sphere](const Point& x) {
    const double v1 = 0.5 * x[0] + x[2];
    const double v2 = 0.3 * x[1] + 1.5 * x[2];
    Vector grad(3);
    if (v1 >= v2 - kMaxTieTol) grad << 0.5, 0.0, 1.0;
    else grad << 0.0, 0.3, 1.5;
    return sphere->project_tangent(x, grad);
  };
  // f2 = |x1 - 0.5| + x2 + x3, with sign(0) = 0 at the kink.
  ObjectiveOracle f2;
  f2.label = "|x1-0.5|+x2+x3";
  f2.eval = [](const Point& x) { return std::abs(x[0] - 0.5) + x[1] + x[2]; };
  f2.clarke_subgradient = [sphere](const Point& x) {
    const double r = x[0] - 0.5;
    Vector grad(3);
    grad << (std::abs(r) <= kMaxTieTol ? 0.0 : sign0(r)), 1.0, 1.0;
    return sphere->project_tangent(x, grad);
  };
  return ProblemInstance{std::move(d), ObjectiveVector(sphere, {f1, f2}), {}, {}, {}};
}

ProblemInstance make_geomedian(int p, const std::vector<std::vector<double>>& weights,
                               std::uint64_t anchor_seed) {
  validate_weights(weights);
  if (p < 2) throw ConfigError("p", "must be at least 2");
  Rng rng(anchor_seed);
  std::vector<std::vector<Point>> anchors;
  for (const auto& w : weights) {
    std::vector<Point> ys;
    for (std::size_t j = 0; j < w.size(); ++j) ys.push_back(random_point(p, rng));
    anchors.push_back(std::move(ys));
  }
  ProblemInstance inst = make_geomedian(std::move(anchors), weights);
  inst.descriptor.instance_seed = anchor_seed;
  return inst;
}

ProblemInstance make_geomedian(std::vector<std::vector<Point>> anchors,
                               const std::vector<std::vector<double>>& weights) {
  validate_weights(weights);
  if (anchors.size() != weights.size()) {
    throw ConfigError("weights", "need one weight vector per anchor set");
  }
  ProblemDescriptor d;
  d.family = Family::GeoMedian;
  d.m = static_cast<int>(weights.size());
  d.p = static_cast<int>(anchors.at(0).at(0).dim());
  d.weights = weights;
  auto sphere = std::make_shared<const Sphere>(d.p);

  std::vector<ObjectiveOracle> oracles;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (anchors[i].size() != weights[i].size()) {
      throw ConfigError("weights[" + std::to_string(i) + "]", "length differs from anchor count");
    }
    auto ys = std::make_shared<const std::vector<Point>>(anchors[i]);
    auto w = std::make_shared<const std::vector<double>>(weights[i]);
    ObjectiveOracle f;
    f.label = "geomedian[" + std::to_string(i) + "]";
    f.eval = [sphere, ys, w](const Point& x) {
      double s = 0.0;
      for (std::size_t j = 0; j < ys->size(); ++j) s += (*w)[j] * sphere->distance(x, (*ys)[j]);
      return s;
    };
    // -Σ w_j log_x(y_j) / dist(x, y_j); terms at an anchor contribute 0.
    f.clarke_subgradient = [sphere, ys, w](const Point& x) {
      Vector g = Vector::Zero(x.dim());
      for (std::size_t j = 0; j < ys->size(); ++j) {
        const TangentVector v = sphere->inverse_retract(x, (*ys)[j]);
        const double d = v.norm();
        if (d < kAnchorTol) continue;
        g -= ((*w)[j] / d) * v.vec();
      }
      return sphere->project_tangent(x, g);
    };
    oracles.push_back(std::move(f));
  }
  ProblemInstance inst{std::move(d), ObjectiveVector(sphere, std::move(oracles)), {}, {}, {}};
  inst.anchors = std::move(anchors);
  return inst;
}

ProblemInstance make_rayleigh(int p, int m, std::uint64_t matrix_seed) {
  if (p < 2) throw ConfigError("p", "must be at least 2");
  if (m < 1) throw ConfigError("m", "must be at least 1");
  Rng rng(matrix_seed);
  std::vector<Matrix> As;
  for (int i = 0; i < m; ++i) {
    const Matrix B = standard_normal(p, p, rng);
    As.push_back(0.5 * (B + B.transpose()));
  }
  ProblemInstance inst = make_rayleigh(std::move(As));
  inst.descriptor.instance_seed = matrix_seed;
  return inst;
}

ProblemInstance make_rayleigh(std::vector<Matrix> symmetric) {
  if (symmetric.empty()) throw ConfigError("m", "must be at least 1");
  ProblemDescriptor d;
  d.family = Family::Rayleigh;
  d.m = static_cast<int>(symmetric.size());
  d.p = static_cast<int>(symmetric[0].rows());
  auto sphere = std::make_shared<const Sphere>(d.p);
  std::vector<ObjectiveOracle> oracles;
  for (std::size_t i = 0; i < symmetric.size(); ++i) {
    const Matrix& A = symmetric[i];
    if (A.rows() != d.p || A.cols() != d.p) throw ConfigError("matrices", "shape mismatch");
    if ((A - A.transpose()).lpNorm<Eigen::Infinity>() > 1e-12) {
      throw ConfigError("matrices", "A_" + std::to_string(i) + " is not symmetric");
    }
    auto Ap = std::make_shared<const Matrix>(A);
    ObjectiveOracle f;
    f.label = "rayleigh[" + std::to_string(i) + "]";
    f.eval = [Ap](const Point& x) { return x.coords().dot(*Ap * x.coords()); };
    // 2(Ax - (xᵀAx)x), the projected Euclidean gradient.
    f.clarke_subgradient = [sphere, Ap](const Point& x) {
      return sphere->project_tangent(x, 2.0 * (*Ap * x.coords()));
    };
    oracles.push_back(std::move(f));
  }
  ProblemInstance inst{std::move(d), ObjectiveVector(sphere, std::move(oracles)), {}, {}, {}};
  inst.matrices = std::move(symmetric);
  return inst;
}

ProblemInstance make_sphere_lasso(int n, int p, int m, const std::vector<double>& lambdas,
                                  std::uint64_t data_seed) {
  if (n < 1) throw ConfigError("n", "must be at least 1");
  if (p < 2) throw ConfigError("p", "must be at least 2");
  if (static_cast<int>(lambdas.size()) != m) {
    throw ConfigError("lambdas", "need one lambda per objective");
  }
  Rng rng(data_seed);
  std::vector<Matrix> As;
  std::vector<Vector> bs;
  for (int i = 0; i < m; ++i) {
    As.push_back(standard_normal(n, p, rng));
    bs.push_back(standard_normal(n, 1, rng).col(0));
  }
  ProblemInstance inst = make_sphere_lasso(std::move(As), std::move(bs), lambdas);
  inst.descriptor.instance_seed = data_seed;
  return inst;
}

ProblemInstance make_sphere_lasso(std::vector<Matrix> A, std::vector<Vector> b,
                                  const std::vector<double>& lambdas) {
  if (A.empty() || A.size() != b.size() || A.size() != lambdas.size()) {
    throw ConfigError("lambdas", "need one (A, b, lambda) triple per objective");
  }
  ProblemDescriptor d;
  d.family = Family::SphereLasso;
  d.m = static_cast<int>(A.size());
  d.n = static_cast<int>(A[0].rows());
  d.p = static_cast<int>(A[0].cols());
  d.lambdas = lambdas;
  d.validate();
  auto sphere = std::make_shared<const Sphere>(d.p);
  std::vector<ObjectiveOracle> oracles;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].rows() != d.n || A[i].cols() != d.p || b[i].size() != d.n) {
      throw ConfigError("matrices", "shape mismatch in objective " + std::to_string(i));
    }
    auto Ap = std::make_shared<const Matrix>(A[i]);
    auto bp = std::make_shared<const Vector>(b[i]);
    const double lambda = lambdas[i];
    ObjectiveOracle f;
    f.label = "lasso[" + std::to_string(i) + "]";
    f.eval = [Ap, bp, lambda](const Point& x) {
      return 0.5 * (*Ap * x.coords() - *bp).squaredNorm() + lambda * x.coords().lpNorm<1>();
    };
    // Projection of Aᵀ(Ax - b) + λ sign(x), with sign(0) = 0.
    f.clarke_subgradient = [sphere, Ap, bp, lambda](const Point& x) {
      Vector g = Ap->transpose() * (*Ap * x.coords() - *bp);
      for (Eigen::Index k = 0; k < g.size(); ++k) g[k] += lambda * sign0(x[k]);
      return sphere->project_tangent(x, g);
    };
    oracles.push_back(std::move(f));
  }
  ProblemInstance inst{std::move(d), ObjectiveVector(sphere, std::move(oracles)), {}, {}, {}};
  inst.matrices = std::move(A);
  inst.offsets = std::move(b);
  return inst;
}

ProblemInstance make_problem(const ProblemDescriptor& d) {
  d.validate();
  switch (d.family) {
    case Family::MaxLinear: {
      ProblemInstance inst = make_example1();
      inst.descriptor.instance_seed = d.instance_seed;
      return inst;
    }
    case Family::GeoMedian: return make_geomedian(d.p, d.weights, d.instance_seed);
    case Family::Rayleigh: return make_rayleigh(d.p, d.m, d.instance_seed);
    case Family::SphereLasso: return make_sphere_lasso(d.n, d.p, d.m, d.lambdas, d.instance_seed);
  }
  throw ConfigError("family", "unhandled family");
}

}  // namespace rnmo

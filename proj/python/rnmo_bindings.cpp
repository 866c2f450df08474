#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rnmo/errors.hpp"
#include "rnmo/experiment.hpp"
#include "rnmo/sphere.hpp"

namespace py = pybind11;
using namespace rnmo;

namespace {

// Points and tangent vectors cross the boundary as plain arrays.
Point point(const Vector& v) { return Point(v); }
TangentVector tangent(const Point& x, const Vector& v) { return TangentVector(x, v); }

py::dict min_norm_dict(const MinNormResult& r) {
  py::dict d;
  d["direction"] = r.direction.vec();
  d["weights"] = r.weights;
  d["norm"] = r.norm;
  d["gap"] = r.gap;
  d["iterations"] = r.iterations;
  d["used_fallback"] = r.used_fallback;
  return d;
}

std::vector<Vector> coords_of(const std::vector<Point>& pts) {
  std::vector<Vector> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.coords());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonsmooth multiobjective descent on the unit sphere";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<CutLocusError>(m, "CutLocusError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<OracleError>(m, "OracleError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  // Sphere geometry on plain arrays.
  py::class_<Sphere>(m, "Sphere")
      .def(py::init<int>(), py::arg("p"))
      .def_property_readonly("dim", &Sphere::dim_ambient)
      .def_property_readonly("injectivity_radius", &Sphere::injectivity_radius)
      .def("inner",
           [](const Sphere& S, const Vector& x, const Vector& u, const Vector& v) {
             const Point p = point(x);
             return S.inner(p, tangent(p, u), tangent(p, v));
           },
           py::arg("x"), py::arg("u"), py::arg("v"))
      .def("retract",
           [](const Sphere& S, const Vector& x, const Vector& xi) {
             const Point p = point(x);
             return Vector(S.retract(p, tangent(p, xi)).coords());
           },
           py::arg("x"), py::arg("xi"))
      .def("inverse_retract",
           [](const Sphere& S, const Vector& x, const Vector& y) {
             return Vector(S.inverse_retract(point(x), point(y)).vec());
           },
           py::arg("x"), py::arg("y"))
      .def("distance",
           [](const Sphere& S, const Vector& x, const Vector& y) {
             return S.distance(point(x), point(y));
           },
           py::arg("x"), py::arg("y"))
      .def(
          "transport",
          [](const Sphere& S, const Vector& x, const Vector& y, const Vector& xi_y) {
            const Point py_ = point(y);
            return Vector(S.transport_to_base(point(x), py_, tangent(py_, xi_y)).vec());
          },
          py::arg("x"), py::arg("y"), py::arg("xi_y"),
          "Transport a tangent vector at y back to the tangent space at x.")
      .def("project_tangent",
           [](const Sphere& S, const Vector& x, const Vector& v) {
             return Vector(S.project_tangent(point(x), v).vec());
           },
           py::arg("x"), py::arg("v"))
      .def(
          "random_point",
          [](const Sphere& S, std::uint64_t seed) {
            Rng rng(seed);
            return Vector(S.random_point(rng).coords());
          },
          py::arg("seed"));

  m.def(
      "min_norm",
      [](const Vector& x, const std::vector<Vector>& vectors) {
        const Point p = point(x);
        SubgradientBundle W(p);
        for (const auto& v : vectors) W.insert(tangent(p, v));
        return min_norm_dict(min_norm_neg_hull(W));
      },
      py::arg("x"), py::arg("vectors"),
      "Minimum-norm element of the negated convex hull of tangent vectors at x. Members "
      "within 1e-12 of an earlier one are merged, so `weights` follows the deduplicated order.");

  py::enum_<Family>(m, "Family")
      .value("MaxLinear", Family::MaxLinear)
      .value("GeoMedian", Family::GeoMedian)
      .value("Rayleigh", Family::Rayleigh)
      .value("SphereLasso", Family::SphereLasso);

  py::class_<ProblemDescriptor>(m, "ProblemDescriptor")
      .def(py::init([](const std::string& family, int m_) {
             return default_descriptor(parse_family(family), m_);
           }),
           py::arg("family"), py::arg("m") = 2)
      .def_readwrite("family", &ProblemDescriptor::family)
      .def_readwrite("p", &ProblemDescriptor::p)
      .def_readwrite("m", &ProblemDescriptor::m)
      .def_readwrite("n", &ProblemDescriptor::n)
      .def_readwrite("instance_seed", &ProblemDescriptor::instance_seed)
      .def_readwrite("weights", &ProblemDescriptor::weights)
      .def_readwrite("lambdas", &ProblemDescriptor::lambdas)
      .def("to_json", [](const ProblemDescriptor& d) { return to_json(d).dump(); });

  py::class_<ProblemInstance>(m, "Problem")
      .def(py::init(&make_problem), py::arg("descriptor"))
      .def_static("example1", &make_example1)
      .def_static(
          "rayleigh", [](std::vector<Matrix> A) { return make_rayleigh(std::move(A)); },
          py::arg("matrices"))
      .def_static(
          "sphere_lasso",
          [](std::vector<Matrix> A, std::vector<Vector> b, const std::vector<double>& lambdas) {
            return make_sphere_lasso(std::move(A), std::move(b), lambdas);
          },
          py::arg("A"), py::arg("b"), py::arg("lambdas"))
      .def_static(
          "geomedian",
          [](const std::vector<std::vector<Vector>>& anchors,
             const std::vector<std::vector<double>>& weights) {
            std::vector<std::vector<Point>> pts;
            for (const auto& set : anchors) {
              std::vector<Point> s;
              for (const auto& v : set) s.push_back(point(v));
              pts.push_back(std::move(s));
            }
            return make_geomedian(std::move(pts), weights);
          },
          py::arg("anchors"), py::arg("weights"))
      .def_readonly("descriptor", &ProblemInstance::descriptor)
      .def_readonly("matrices", &ProblemInstance::matrices)
      .def_readonly("offsets", &ProblemInstance::offsets)
      .def_property_readonly("m", [](const ProblemInstance& p) { return p.objectives.size(); })
      .def_property_readonly("p", [](const ProblemInstance& p) { return p.descriptor.p; })
      .def("eval",
           [](const ProblemInstance& p, const Vector& x) { return eval_all(p.objectives, point(x)); },
           py::arg("x"))
      .def("subgradient",
           [](const ProblemInstance& p, std::size_t i, const Vector& x) {
             if (i >= p.objectives.size()) throw py::index_error("objective index out of range");
             return Vector(p.objectives.subgradient(i, point(x)).vec());
           },
           py::arg("i"), py::arg("x"))
      .def(
          "start_point",
          [](const ProblemInstance& p, std::uint64_t seed, int index) {
            return Vector(start_point(p.objectives.manifold(), seed, index).coords());
          },
          py::arg("seed"), py::arg("index"), "Start point of run `index`, drawn from seed + index.");

  py::class_<SolverParams>(m, "SolverParams")
      .def(py::init<>())
      .def_readwrite("eps", &SolverParams::epsilon)
      .def_readwrite("delta", &SolverParams::delta)
      .def_readwrite("c", &SolverParams::c)
      .def_readwrite("alpha", &SolverParams::alpha)
      .def_readwrite("t0", &SolverParams::t0)
      .def_readwrite("max_iters", &SolverParams::max_outer_iters)
      .def_readwrite("max_pdd_iters", &SolverParams::max_pdd_iters)
      .def_readwrite("max_pns_bisections", &SolverParams::max_pns_bisections)
      .def("__repr__", [](const SolverParams& s) {
        std::ostringstream os;
        os << "SolverParams(eps=" << s.epsilon << ", delta=" << s.delta << ", c=" << s.c
           << ", alpha=" << s.alpha << ", t0=" << s.t0 << ")";
        return os.str();
      });

  py::enum_<RunStatus>(m, "RunStatus")
      .value("CriticalReached", RunStatus::CriticalReached)
      .value("IterationCapHit", RunStatus::IterationCapHit)
      .value("NumericalFailure", RunStatus::NumericalFailure);

  py::enum_<DirectionStatus>(m, "DirectionStatus")
      .value("AcceptableDescent", DirectionStatus::AcceptableDescent)
      .value("BelowDelta", DirectionStatus::BelowDelta)
      .value("CapHit", DirectionStatus::CapHit);

  py::class_<RunRecord>(m, "RunRecord")
      .def_property_readonly("iterates", [](const RunRecord& r) { return coords_of(r.iterates); })
      .def_readonly("objective_values", &RunRecord::objective_values)
      .def_readonly("direction_norms", &RunRecord::direction_norms)
      .def_readonly("step_sizes", &RunRecord::step_sizes)
      .def_readonly("pdd_inner_counts", &RunRecord::pdd_inner_counts)
      .def_readonly("pns_call_counts", &RunRecord::pns_call_counts)
      .def_readonly("status", &RunRecord::status)
      .def_readonly("message", &RunRecord::message)
      .def_property_readonly("steps", &RunRecord::steps)
      .def("trace_csv", [](const RunRecord& r) {
        std::ostringstream os;
        emit_trace_csv(r, os);
        return os.str();
      });

  m.def(
      "compute_descent_direction",
      [](const ProblemInstance& p, const Vector& x, const SolverParams& params) {
        const DescentDirection dd = compute_descent_direction(point(x), p.objectives, params);
        py::dict d;
        d["direction"] = dd.direction.vec();
        d["status"] = dd.flag;
        d["inner_iterations"] = dd.inner_iterations;
        d["pns_calls"] = dd.pns_calls;
        d["inner_norms"] = dd.inner_norms;
        d["bundle_size"] = dd.bundle.size();
        d["diagnostic"] = dd.diagnostic;
        return d;
      },
      py::arg("problem"), py::arg("x"), py::arg("params") = SolverParams{});

  m.def(
      "run",
      [](const ProblemInstance& p, const Vector& x0, const SolverParams& params) {
        py::gil_scoped_release release;
        return run(point(x0), p.objectives, params);
      },
      py::arg("problem"), py::arg("x0"), py::arg("params") = SolverParams{});

  m.def(
      "run_multistart",
      [](const ProblemInstance& p, const SolverParams& params, int starts, std::uint64_t seed,
         int jobs) {
        py::gil_scoped_release release;
        return run_multistart(p, params, starts, seed, jobs);
      },
      py::arg("problem"), py::arg("params") = SolverParams{}, py::arg("starts") = 100,
      py::arg("seed") = 1, py::arg("jobs") = 0);

  m.def(
      "_resolve_config",
      [](const std::string& json_text) {
        return to_json(parse_config(nlohmann::json::parse(json_text))).dump();
      },
      py::arg("config_json"));

  m.def(
      "_run_batch",
      [](const std::string& json_text) {
        const ExperimentConfig cfg = parse_config(nlohmann::json::parse(json_text));
        BatchSummary s;
        {
          py::gil_scoped_release release;
          s = run_batch(cfg);
        }
        py::dict d;
        d["mean_iterations"] = s.mean_iterations;
        d["critical_reached"] = s.critical_reached;
        d["iteration_cap_hit"] = s.iteration_cap_hit;
        d["numerical_failure"] = s.numerical_failure;
        d["iterations"] = [&] {
          std::vector<int> it;
          for (const auto& r : s.runs) it.push_back(r.iterations);
          return it;
        }();
        d["output_dir"] = cfg.output_dir;
        return d;
      },
      py::arg("config_json"));
}

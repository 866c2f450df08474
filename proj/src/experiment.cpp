#include "rnmo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include "rnmo/errors.hpp"

namespace rnmo {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  problem.validate();
  solver.validate(std::numbers::pi);
  if (num_starts < 1) throw ConfigError("starts", "must be at least 1");
  if (jobs < 0) throw ConfigError("jobs", "must be non-negative");
}

ExperimentConfig parse_config(const nlohmann::json& file, const ConfigOverrides& flags) {
  if (!file.is_null() && !file.is_object()) throw ConfigError("config", "expected a JSON object");
  ExperimentConfig cfg;
  try {
    nlohmann::json problem = file.is_object() && file.contains("problem") ? file.at("problem")
                                                                            : nlohmann::json::object();
    if (flags.family) {
      // A different family invalidates family-specific payloads from the file.
      if (problem.contains("family") &&
          parse_family(problem.at("family").get<std::string>()) != parse_family(*flags.family)) {
        problem.erase("weights");
        problem.erase("lambdas");
      }
      problem["family"] = *flags.family;
    }
    if (flags.p) problem["p"] = *flags.p;
    if (flags.m) problem["m"] = *flags.m;
    if (flags.n) problem["n"] = *flags.n;
    if (flags.instance_seed) problem["instance_seed"] = *flags.instance_seed;
    cfg.problem = descriptor_from_json(problem);

    const nlohmann::json solver = file.is_object() && file.contains("solver")
                                      ? file.at("solver")
                                      : nlohmann::json::object();
    SolverParams& s = cfg.solver;
    s.epsilon = flags.eps.value_or(solver.value("eps", s.epsilon));
    s.delta = flags.delta.value_or(solver.value("delta", s.delta));
    s.c = flags.c.value_or(solver.value("c", s.c));
    s.alpha = flags.alpha.value_or(solver.value("alpha", s.alpha));
    s.t0 = flags.t0.value_or(solver.value("t0", s.t0));
    s.max_outer_iters = flags.max_iters.value_or(solver.value("max_iters", s.max_outer_iters));
    s.max_pdd_iters = solver.value("max_pdd_iters", s.max_pdd_iters);
    s.max_pns_bisections = solver.value("max_pns_bisections", s.max_pns_bisections);
    s.minnorm.gap_tol = solver.value("minnorm_gap_tol", s.minnorm.gap_tol);

    const nlohmann::json top = file.is_object() ? file : nlohmann::json::object();
    cfg.num_starts = flags.starts.value_or(top.value("starts", cfg.num_starts));
    cfg.start_seed = flags.seed.value_or(top.value("seed", cfg.start_seed));
    cfg.output_dir = flags.out.value_or(top.value("out", cfg.output_dir.string()));
    cfg.jobs = flags.jobs.value_or(top.value("jobs", cfg.jobs));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::optional<fs::path>& path, const ConfigOverrides& flags) {
  nlohmann::json file;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("config", "cannot open " + path->string());
    try {
      file = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", e.what());
    }
  }
  return parse_config(file, flags);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  const SolverParams& s = cfg.solver;
  return {
      {"problem", to_json(cfg.problem)},
      {"solver",
       {{"eps", s.epsilon},
        {"delta", s.delta},
        {"c", s.c},
        {"alpha", s.alpha},
        {"t0", s.t0},
        {"max_iters", s.max_outer_iters},
        {"max_pdd_iters", s.max_pdd_iters},
        {"max_pns_bisections", s.max_pns_bisections},
        {"minnorm_gap_tol", s.minnorm.gap_tol}}},
      {"starts", cfg.num_starts},
      {"seed", cfg.start_seed},
      {"out", cfg.output_dir.string()},
      {"jobs", cfg.jobs},
  };
}

Point start_point(const Manifold& M, std::uint64_t start_seed, int index) {
  Rng rng(start_seed + static_cast<std::uint64_t>(index));
  return M.random_point(rng);
}

std::vector<RunRecord> run_multistart(const ProblemInstance& problem, const SolverParams& params,
                                      int num_starts, std::uint64_t start_seed, int jobs) {
  params.validate(problem.objectives.manifold().injectivity_radius());
  std::vector<RunRecord> records(static_cast<std::size_t>(std::max(num_starts, 0)));
  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(num_starts, 1));

  std::atomic<int> next{0};
  auto work = [&]() {
    for (int k = next.fetch_add(1); k < num_starts; k = next.fetch_add(1)) {
      const Point x0 = start_point(problem.objectives.manifold(), start_seed, k);
      records[static_cast<std::size_t>(k)] = run(x0, problem.objectives, params);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return records;
}

BatchSummary summarize(const std::vector<RunRecord>& records, std::uint64_t start_seed) {
  BatchSummary out;
  double total = 0.0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const RunRecord& r = records[k];
    RunSummary s;
    s.start = static_cast<int>(k);
    s.seed = start_seed + k;
    s.status = r.status;
    s.iterations = static_cast<int>(r.steps());
    if (!r.objective_values.empty()) s.final_objectives = r.objective_values.back();
    if (!r.direction_norms.empty()) s.final_norm = r.direction_norms.back();
    s.message = r.message;
    switch (r.status) {
      case RunStatus::CriticalReached:
        ++out.critical_reached;
        total += s.iterations;
        break;
      case RunStatus::IterationCapHit: ++out.iteration_cap_hit; break;
      case RunStatus::NumericalFailure: ++out.numerical_failure; break;
    }
    out.runs.push_back(std::move(s));
  }
  out.mean_iterations = out.critical_reached > 0 ? total / out.critical_reached : 0.0;
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_trace_csv(const RunRecord& record, std::ostream& os) {
  const Eigen::Index m =
      record.objective_values.empty() ? 0 : record.objective_values.front().size();
  os << "iteration";
  for (Eigen::Index i = 0; i < m; ++i) os << ",f_" << (i + 1);
  os << ",direction_norm,step_size,pdd_inner,pns_calls\n";
  for (std::size_t k = 0; k < record.iterates.size(); ++k) {
    os << k;
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << format_double(record.objective_values[k][i]);
    os << ',' << format_double(record.direction_norms[k]) << ','
       << format_double(record.step_sizes[k]) << ',' << record.pdd_inner_counts[k] << ','
       << record.pns_call_counts[k] << '\n';
  }
}

void emit_trace_csv(const RunRecord& record, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  emit_trace_csv(record, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_summary_csv(const BatchSummary& summary, std::ostream& os) {
  Eigen::Index m = 0;
  for (const auto& r : summary.runs) m = std::max(m, r.final_objectives.size());
  os << "start,seed,status,iterations,final_norm";
  for (Eigen::Index i = 0; i < m; ++i) os << ",f_" << (i + 1);
  os << '\n';
  for (const auto& r : summary.runs) {
    os << r.start << ',' << r.seed << ',' << to_string(r.status) << ',' << r.iterations << ','
       << format_double(r.final_norm);
    for (Eigen::Index i = 0; i < m; ++i) {
      os << ',' << (i < r.final_objectives.size() ? format_double(r.final_objectives[i]) : "");
    }
    os << '\n';
  }
  os << "# mean_iterations," << format_double(summary.mean_iterations) << '\n'
     << "# critical_reached," << summary.critical_reached << '\n'
     << "# iteration_cap_hit," << summary.iteration_cap_hit << '\n'
     << "# numerical_failure," << summary.numerical_failure << '\n';
}

BatchSummary run_batch(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path summary_path = dir / "summary.csv";
  {
    std::ofstream probe(summary_path, std::ios::binary);
    if (ec || !probe) {
      throw std::runtime_error("output directory " + dir.string() + " is not writable");
    }
  }

  const ProblemInstance problem = make_problem(cfg.problem);
  const auto records =
      run_multistart(problem, cfg.solver, cfg.num_starts, cfg.start_seed, cfg.jobs);
  for (std::size_t k = 0; k < records.size(); ++k) {
    emit_trace_csv(records[k], dir / ("trace_" + std::to_string(k) + ".csv"));
  }
  BatchSummary summary = summarize(records, cfg.start_seed);
  std::ofstream out(summary_path, std::ios::binary);
  write_summary_csv(summary, out);
  if (!out) throw std::runtime_error("write failed for " + summary_path.string());
  return summary;
}

}  // namespace rnmo

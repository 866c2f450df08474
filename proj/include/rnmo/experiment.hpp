#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnmo/descent.hpp"
#include "rnmo/problems.hpp"

namespace rnmo {

struct ExperimentConfig {
  ProblemDescriptor problem;
  SolverParams solver;
  int num_starts = 100;
  std::uint64_t start_seed = 1;
  std::filesystem::path output_dir = "rnmo_out";
  int jobs = 0;  // 0 selects std::thread::hardware_concurrency()

  void validate() const;
};

/// Command-line values; each set field replaces the file value.
struct ConfigOverrides {
  std::optional<std::string> family;
  std::optional<int> p, m, n;
  std::optional<double> eps, delta, c, alpha, t0;
  std::optional<int> starts;
  std::optional<std::uint64_t> seed, instance_seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<int> max_iters;
};

ExperimentConfig parse_config(const nlohmann::json& file, const ConfigOverrides& flags = {});
// Reads the JSON file at `path` (when given) and applies `flags` on top.
ExperimentConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const ConfigOverrides& flags);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Seeded start point for run `index`: uniform on the sphere from seed
/// start_seed + index, independent of the instance seed.
Point start_point(const Manifold& M, std::uint64_t start_seed, int index);

/// Independent runs from num_starts seeded start points; results are in
/// start order regardless of `jobs`.
std::vector<RunRecord> run_multistart(const ProblemInstance& problem, const SolverParams& params,
                                      int num_starts, std::uint64_t start_seed, int jobs);

struct RunSummary {
  int start = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::NumericalFailure;
  int iterations = 0;
  Vector final_objectives;
  double final_norm = 0.0;
  std::string message;
};

struct BatchSummary {
  std::vector<RunSummary> runs;
  double mean_iterations = 0.0;  // over CriticalReached runs only
  int critical_reached = 0;
  int iteration_cap_hit = 0;
  int numerical_failure = 0;
};

BatchSummary summarize(const std::vector<RunRecord>& records, std::uint64_t start_seed);

/// Runs the batch and writes trace_<k>.csv per start plus summary.csv into
/// cfg.output_dir. The directory is checked for writability first.
BatchSummary run_batch(const ExperimentConfig& cfg);

/// Header `iteration,f_1..f_m,direction_norm,step_size,pdd_inner,pns_calls`,
/// then one row per recorded iteration; numbers use 17 significant digits.
void emit_trace_csv(const RunRecord& record, std::ostream& os);
void emit_trace_csv(const RunRecord& record, const std::filesystem::path& path);
void write_summary_csv(const BatchSummary& summary, std::ostream& os);

std::string format_double(double v);

}  // namespace rnmo

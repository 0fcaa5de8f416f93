#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sglbo/baselines.hpp"
#include "sglbo/cost.hpp"
#include "sglbo/sglbo.hpp"

namespace sglbo {

enum class Task { Vqe, Vqc };

enum class OptimizerKind { Sglbo, Adam, Nft, AdamSa, AdamAss, AdamSaAss, NftSa };

const char* task_name(Task task);
const char* optimizer_name(OptimizerKind kind);
std::optional<Task> task_from_name(const std::string& name);
std::optional<OptimizerKind> optimizer_from_name(const std::string& name);

/// One benchmark batch: a task instance, an optimizer, and a grid of
/// (initial point x repeat) runs sharing one master seed.
struct ExperimentConfig {
  Task task = Task::Vqe;
  OptimizerKind optimizer = OptimizerKind::Sglbo;
  int n = 4;
  int r = 4;
  double coupling_j = 1.0;  // transverse-field Ising J
  double field_g = 1.5;     // transverse-field Ising g
  std::int64_t budget = 1'000'000;
  std::uint64_t master_seed = 1;
  int initial_points = 15;
  int repeats = 2;
  std::string noise_table_path;  // empty: ideal simulation
  std::string out_dir = ".";
  int jobs = 1;
  bool timing = false;  // fill wall_ms columns (off keeps CSVs reproducible)
  double beta = -1.0;   // < 0: task default (VQE 3, VQC 6)
  double suffix_alpha = 0.1;

  /// Optional cost baseline (the ansatz-constrained minimum) and site count;
  /// when set, the aggregate additionally reports (cost - baseline)/sites
  /// statistics computed per run before aggregation.
  std::optional<double> baseline;
  int sites = 0;  // 0: task default (VQE n, VQC 1)

  SglboConfig sglbo;  // budget/beta/timing fields are overridden per run
  AdamConfig adam;
  NftConfig nft;
};

struct RunOutcome {
  int point = 0;
  int repeat = 0;
  std::string run_id;
  bool ok = false;
  std::string error;
  RunResult result;
  double final_metric_cost = 0.0;  // exact ideal cost at the optimizer's output point
  std::int64_t audited_shots = 0;  // measurement outcomes tallied by the counter
  std::string csv_path;
};

struct ExperimentSummary {
  std::vector<RunOutcome> runs;
  std::string aggregate_path;
  /// final_metric_cost of the successful runs, in (point, repeat) order.
  std::vector<double> final_costs;
};

/// Cost-function factory for a config's task (noise table loaded if set).
std::unique_ptr<Cost> make_cost(const ExperimentConfig& config);

/// The shared uniform-random initial point for (config, point): derived from
/// the master seed and the point index only, so every optimizer sees the
/// same starting points.
std::vector<double> initial_point(const ExperimentConfig& config, int point, int dimension);

/// Execute all runs (concurrently up to config.jobs), write one CSV per run
/// plus one aggregate CSV, and return the summary. A run that fails
/// numerically is marked failed and excluded from the aggregate; the others
/// proceed.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Median with the even-count convention (mean of the two central values).
double median(std::vector<double> values);

/// Convert aggregate CSVs to whitespace-separated plot columns, transforming
/// cost statistics by (value - baseline)/sites. One ".dat" file per input.
void write_plotdata(const std::vector<std::string>& aggregate_csvs,
                    const std::string& out_dir, double baseline, double sites);

}  // namespace sglbo

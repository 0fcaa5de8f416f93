#include "sglbo/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string_view>
#include <thread>

#include "sglbo/circuit.hpp"
#include "sglbo/common.hpp"
#include "sglbo/errors.hpp"
#include "sglbo/noise.hpp"
#include "sglbo/pauli.hpp"
#include "sglbo/text.hpp"

namespace sglbo {

namespace {

constexpr std::uint64_t kInitialPointSalt = 0x49d8a1f0ull;
constexpr std::uint64_t kRunStreamSalt = 0x52d61c3bull;

struct NamedKind {
  const char* name;
  OptimizerKind kind;
};

constexpr NamedKind kOptimizerNames[] = {
    {"sglbo", OptimizerKind::Sglbo},          {"adam", OptimizerKind::Adam},
    {"nft", OptimizerKind::Nft},              {"adam-sa", OptimizerKind::AdamSa},
    {"adam-ass", OptimizerKind::AdamAss},     {"adam-sa-ass", OptimizerKind::AdamSaAss},
    {"nft-sa", OptimizerKind::NftSa},
};

bool uses_suffix_output(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Sglbo:
    case OptimizerKind::AdamSa:
    case OptimizerKind::AdamSaAss:
    case OptimizerKind::NftSa:
      return true;
    case OptimizerKind::Adam:
    case OptimizerKind::AdamAss:
    case OptimizerKind::Nft:
      return false;
  }
  return false;
}

double resolved_beta(const ExperimentConfig& config) {
  if (config.beta > 0.0) return config.beta;
  return config.task == Task::Vqe ? 3.0 : 6.0;
}

int resolved_sites(const ExperimentConfig& config) {
  if (config.sites > 0) return config.sites;
  return config.task == Task::Vqe ? config.n : 1;
}

std::string run_file_stem(const ExperimentConfig& config) {
  std::string stem = task_name(config.task);
  stem += '_';
  stem += optimizer_name(config.optimizer);
  return stem;
}

std::string make_run_id(int point, int repeat) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "p%02d_r%d", point, repeat);
  return buf;
}

RunResult dispatch_run(const ExperimentConfig& config, const Cost& cost,
                       std::span<const double> theta0, Rng& rng) {
  switch (config.optimizer) {
    case OptimizerKind::Sglbo: {
      SglboConfig sc = config.sglbo;
      sc.total_shot_budget = config.budget;
      sc.beta = resolved_beta(config);
      sc.alpha = config.suffix_alpha;
      sc.record_timing = config.timing;
      return run_sglbo(cost, sc, theta0, rng);
    }
    case OptimizerKind::Adam:
    case OptimizerKind::AdamSa:
    case OptimizerKind::AdamAss:
    case OptimizerKind::AdamSaAss: {
      AdamConfig ac = config.adam;
      ac.total_shot_budget = config.budget;
      ac.adaptive_shots = config.optimizer == OptimizerKind::AdamAss ||
                          config.optimizer == OptimizerKind::AdamSaAss;
      ac.record_timing = config.timing;
      return run_adam(cost, ac, theta0, rng);
    }
    case OptimizerKind::Nft:
    case OptimizerKind::NftSa: {
      NftConfig nc = config.nft;
      nc.total_shot_budget = config.budget;
      nc.record_timing = config.timing;
      return run_nft(cost, nc, theta0, rng);
    }
  }
  throw ArgumentError("unknown optimizer kind");
}

/// Exact ideal cost at every iterate and at every running suffix average,
/// computed from the trace after the run (prefix sums keep it linear in T).
struct TraceCosts {
  std::vector<double> at_iterate;
  std::vector<double> at_suffix;
};

TraceCosts trace_costs(const Cost& cost, const RunTrace& trace, double alpha) {
  const std::size_t rows = trace.iterates.size();
  const std::size_t dim = rows == 0 ? 0 : trace.iterates[0].size();
  TraceCosts out;
  out.at_iterate.reserve(rows);
  out.at_suffix.reserve(rows);
  std::vector<double> prefix((rows + 1) * dim, 0.0);
  std::vector<double> mean(dim);
  for (std::size_t k = 0; k < rows; ++k) {
    const auto& theta = trace.iterates[k];
    for (std::size_t i = 0; i < dim; ++i)
      prefix[(k + 1) * dim + i] = prefix[k * dim + i] + theta[i];
    out.at_iterate.push_back(cost.exact_value_noiseless(theta));
    const auto m = static_cast<std::size_t>(std::clamp<std::int64_t>(
        static_cast<std::int64_t>(ceil_tol(alpha * static_cast<double>(k + 1))),
        1, static_cast<std::int64_t>(k) + 1));
    for (std::size_t i = 0; i < dim; ++i)
      mean[i] = (prefix[(k + 1) * dim + i] - prefix[(k + 1 - m) * dim + i]) /
                static_cast<double>(m);
    out.at_suffix.push_back(cost.exact_value_noiseless(mean));
  }
  return out;
}

double mean_shots(const std::vector<std::int64_t>& s_vec) {
  if (s_vec.empty()) return 0.0;
  double sum = 0.0;
  for (auto s : s_vec) sum += static_cast<double>(s);
  return sum / static_cast<double>(s_vec.size());
}

std::string render_run_csv(const std::string& run_id, const RunTrace& trace,
                           const TraceCosts& costs, bool timing) {
  std::string out = "run,t,cumulative_shots,cost,cost_suffix,s_grad_mean,s_cost,eta_star,wall_ms\n";
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    out += run_id;
    out += ',';
    out += std::to_string(k);
    out += ',';
    out += std::to_string(k == 0 ? 0 : trace.cumulative_shots[k - 1]);
    out += ',';
    out += format_double(costs.at_iterate[k]);
    out += ',';
    out += format_double(costs.at_suffix[k]);
    out += ',';
    out += format_double(k == 0 ? 0.0 : mean_shots(trace.s_grad_history[k - 1]));
    out += ',';
    out += std::to_string(k == 0 ? 0 : trace.s_cost_history[k - 1]);
    out += ',';
    out += format_double(k == 0 ? 0.0 : trace.eta_history[k - 1]);
    out += ',';
    const bool have_ms = timing && k >= 1 && k - 1 < trace.wall_ms.size();
    out += format_double(have_ms ? trace.wall_ms[k - 1] : 0.0);
    out += '\n';
  }
  return out;
}

double geometric_mean(const std::vector<double>& values) {
  double log_sum = 0.0;
  for (double v : values) log_sum += std::log(std::max(v, 1e-300));
  return std::exp(log_sum / static_cast<double>(values.size()));
}

double arithmetic_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void append_stats(std::string& out, const std::vector<double>& values) {
  out += ',';
  out += format_double(median(values));
  out += ',';
  out += format_double(arithmetic_mean(values));
  out += ',';
  out += format_double(geometric_mean(values));
}

/// Aggregate the successful runs onto the union grid of their cumulative
/// shot counts, carrying each run's last value forward between its own
/// records. Stable under run reordering by construction.
std::string render_aggregate_csv(const ExperimentConfig& config,
                                 const std::vector<const RunOutcome*>& succeeded,
                                 const std::vector<const RunOutcome*>& failed,
                                 const std::vector<TraceCosts>& costs) {
  std::string out;
  for (const RunOutcome* run : failed) {
    out += "# failed ";
    out += run->run_id;
    out += ": ";
    out += run->error;
    out += '\n';
  }
  out += "bucket_shots,runs,cost_median,cost_mean,cost_geomean,suffix_median,suffix_mean,"
         "suffix_geomean";
  const bool with_delta = config.baseline.has_value();
  if (with_delta)
    out += ",delta_median,delta_mean,delta_geomean,delta_suffix_median,delta_suffix_mean,"
           "delta_suffix_geomean";
  out += '\n';
  if (succeeded.empty()) return out;

  std::vector<std::int64_t> grid{0};
  for (const RunOutcome* run : succeeded)
    for (auto s : run->result.trace.cumulative_shots) grid.push_back(s);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const double baseline = config.baseline.value_or(0.0);
  const double sites = static_cast<double>(resolved_sites(config));
  std::vector<std::size_t> row(succeeded.size(), 0);  // last record <= bucket
  std::vector<double> at(succeeded.size()), sfx(succeeded.size());
  std::vector<double> d_at(succeeded.size()), d_sfx(succeeded.size());
  for (std::int64_t bucket : grid) {
    for (std::size_t j = 0; j < succeeded.size(); ++j) {
      const auto& cum = succeeded[j]->result.trace.cumulative_shots;
      while (row[j] < cum.size() && cum[row[j]] <= bucket) ++row[j];
      at[j] = costs[j].at_iterate[row[j]];
      sfx[j] = costs[j].at_suffix[row[j]];
      d_at[j] = (at[j] - baseline) / sites;
      d_sfx[j] = (sfx[j] - baseline) / sites;
    }
    out += std::to_string(bucket);
    out += ',';
    out += std::to_string(succeeded.size());
    append_stats(out, at);
    append_stats(out, sfx);
    if (with_delta) {
      append_stats(out, d_at);
      append_stats(out, d_sfx);
    }
    out += '\n';
  }
  return out;
}

void validate_config(const ExperimentConfig& config) {
  if (config.n < 2) throw ConfigError("n must be at least 2");
  if (config.r < 0) throw ConfigError("r must be non-negative");
  if (config.budget < 1) throw ConfigError("budget must be positive");
  if (config.initial_points < 1) throw ConfigError("initial_points must be positive");
  if (config.repeats < 1) throw ConfigError("repeats must be positive");
  if (config.jobs < 1) throw ConfigError("jobs must be positive");
  if (config.out_dir.empty()) throw ConfigError("out_dir must be set");
  if (config.suffix_alpha <= 0.0 || config.suffix_alpha > 1.0)
    throw ConfigError("suffix_alpha must be in (0, 1]");
  if (config.sites < 0) throw ConfigError("sites must be non-negative (0 selects the task default)");
}

}  // namespace

const char* task_name(Task task) { return task == Task::Vqe ? "vqe" : "vqc"; }

const char* optimizer_name(OptimizerKind kind) {
  for (const auto& entry : kOptimizerNames)
    if (entry.kind == kind) return entry.name;
  return "unknown";
}

std::optional<Task> task_from_name(const std::string& name) {
  if (name == "vqe") return Task::Vqe;
  if (name == "vqc") return Task::Vqc;
  return std::nullopt;
}

std::optional<OptimizerKind> optimizer_from_name(const std::string& name) {
  for (const auto& entry : kOptimizerNames)
    if (name == entry.name) return entry.kind;
  return std::nullopt;
}

std::unique_ptr<Cost> make_cost(const ExperimentConfig& config) {
  std::optional<NoiseModel> noise;
  if (!config.noise_table_path.empty()) noise = load_noise_table(config.noise_table_path);
  ParamCircuit ansatz = build_ansatz(config.n, config.r);
  if (config.task == Task::Vqe) {
    PauliSum ham = tfim_hamiltonian(config.n, config.coupling_j, config.field_g);
    return std::make_unique<VqeCost>(std::move(ham), std::move(ansatz), std::move(noise));
  }
  std::vector<double> theta_star(static_cast<std::size_t>(ansatz.num_params), 0.0);
  return std::make_unique<VqcCost>(std::move(ansatz), std::move(theta_star), std::move(noise));
}

std::vector<double> initial_point(const ExperimentConfig& config, int point, int dimension) {
  Rng rng(mix_seed(config.master_seed, kInitialPointSalt + static_cast<std::uint64_t>(point)));
  std::vector<double> theta0(static_cast<std::size_t>(dimension));
  for (auto& v : theta0) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return theta0;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t half = values.size() / 2;
  if (values.size() % 2 == 1) return values[half];
  return 0.5 * (values[half - 1] + values[half]);
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  std::filesystem::create_directories(config.out_dir);

  const int total_runs = config.initial_points * config.repeats;
  ExperimentSummary summary;
  summary.runs.resize(static_cast<std::size_t>(total_runs));
  std::vector<TraceCosts> all_costs(static_cast<std::size_t>(total_runs));
  const std::string stem = run_file_stem(config);

  auto execute = [&](int index) {
    const int point = index / config.repeats;
    const int repeat = index % config.repeats;
    RunOutcome& outcome = summary.runs[static_cast<std::size_t>(index)];
    outcome.point = point;
    outcome.repeat = repeat;
    outcome.run_id = make_run_id(point, repeat);
    try {
      auto cost = make_cost(config);
      ShotCounter counter;
      cost->set_shot_counter(&counter);
      const std::vector<double> theta0 = initial_point(config, point, cost->dimension());
      Rng rng(mix_seed(mix_seed(config.master_seed, kRunStreamSalt + static_cast<std::uint64_t>(point)),
                       static_cast<std::uint64_t>(repeat)));
      outcome.result = dispatch_run(config, *cost, theta0, rng);
      outcome.audited_shots = counter.sampled;
      const std::vector<double> metric_point =
          uses_suffix_output(config.optimizer)
              ? suffix_average(outcome.result.trace.iterates, config.suffix_alpha)
              : outcome.result.final_iterate;
      outcome.final_metric_cost = cost->exact_value_noiseless(metric_point);
      all_costs[static_cast<std::size_t>(index)] =
          trace_costs(*cost, outcome.result.trace, config.suffix_alpha);
      outcome.ok = true;
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.error = e.what();
    }
  };

  if (config.jobs <= 1 || total_runs <= 1) {
    for (int index = 0; index < total_runs; ++index) execute(index);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int index = next.fetch_add(1); index < total_runs; index = next.fetch_add(1))
        execute(index);
    };
    const int workers = std::min(config.jobs, total_runs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (int index = 0; index < total_runs; ++index) {
    RunOutcome& outcome = summary.runs[static_cast<std::size_t>(index)];
    if (!outcome.ok) continue;
    const std::string csv = render_run_csv(outcome.run_id, outcome.result.trace,
                                           all_costs[static_cast<std::size_t>(index)],
                                           config.timing);
    outcome.csv_path = config.out_dir + "/" + stem + "_" + outcome.run_id + ".csv";
    write_text_file(outcome.csv_path, csv);
    summary.final_costs.push_back(outcome.final_metric_cost);
  }

  std::vector<const RunOutcome*> succeeded;
  std::vector<const RunOutcome*> failed;
  std::vector<TraceCosts> costs_ok;
  for (int index = 0; index < total_runs; ++index) {
    const RunOutcome& outcome = summary.runs[static_cast<std::size_t>(index)];
    if (outcome.ok) {
      succeeded.push_back(&outcome);
      costs_ok.push_back(std::move(all_costs[static_cast<std::size_t>(index)]));
    } else {
      failed.push_back(&outcome);
    }
  }
  summary.aggregate_path = config.out_dir + "/" + stem + "_agg.csv";
  write_text_file(summary.aggregate_path,
                  render_aggregate_csv(config, succeeded, failed, costs_ok));
  return summary;
}

void write_plotdata(const std::vector<std::string>& aggregate_csvs,
                    const std::string& out_dir, double baseline, double sites) {
  if (sites <= 0.0) throw ArgumentError("sites must be positive");
  std::filesystem::create_directories(out_dir);
  for (const std::string& path : aggregate_csvs) {
    const std::string content = read_text_file(path);
    std::vector<std::vector<std::string_view>> rows;
    std::vector<std::string_view> header;
    for (const std::string_view line : split_lines(content)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string_view> fields;
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (header.empty())
        header = std::move(fields);
      else
        rows.push_back(std::move(fields));
    }
    auto column = [&](std::string_view name) {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end())
        throw ParseError(path + ": missing aggregate column '" + std::string(name) + "'");
      return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_bucket = column("bucket_shots");
    const std::size_t c_runs = column("runs");
    const std::size_t c_cols[4] = {column("cost_median"), column("cost_mean"),
                                   column("suffix_median"), column("suffix_mean")};
    if (rows.empty()) throw ParseError(path + ": aggregate holds no data rows");

    std::string out = "# bucket_shots runs delta_median delta_mean delta_suffix_median "
                      "delta_suffix_mean\n";
    for (const auto& fields : rows) {
      if (fields.size() != header.size())
        throw ParseError(path + ": aggregate row width mismatch");
      out += fields[c_bucket];
      out += ' ';
      out += fields[c_runs];
      for (const std::size_t c : c_cols) {
        double value = 0.0;
        if (!parse_double(fields[c], value))
          throw ParseError(path + ": bad aggregate number '" + std::string(fields[c]) + "'");
        out += ' ';
        out += format_double((value - baseline) / sites);
      }
      out += '\n';
    }
    std::filesystem::path stem = std::filesystem::path(path).stem();
    write_text_file((std::filesystem::path(out_dir) / stem).string() + ".dat", out);
  }
}

}  // namespace sglbo

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "sglbo/circuit.hpp"
#include "sglbo/errors.hpp"
#include "sglbo/noise.hpp"
#include "sglbo/oracle.hpp"
#include "sglbo/pauli.hpp"
#include "sglbo/runner.hpp"
#include "sglbo/text.hpp"

namespace {

using namespace sglbo;

struct RunArgs {
  std::string task = "vqe";
  std::string optimizer = "sglbo";
  ExperimentConfig config;
  double baseline = 0.0;
  bool baseline_set = false;
  double shots_per_eval = 1000.0;
  bool shots_per_eval_set = false;
  std::string config_path;
  const CLI::App* cli = nullptr;
};

/// One key from a flat key=value config file; keys mirror the run flags.
void apply_config_value(RunArgs& args, const std::string& key, const std::string& value) {
  const auto bad = [&](const char* what) {
    throw ConfigError("config key '" + key + "': " + what + " '" + value + "'");
  };
  const auto as_double = [&] {
    double out = 0.0;
    if (!parse_double(value, out)) bad("bad number");
    return out;
  };
  const auto as_int = [&]() -> long long {
    long long out = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) bad("bad integer");
    return out;
  };
  const auto as_uint = [&]() -> unsigned long long {
    unsigned long long out = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) bad("bad integer");
    return out;
  };
  const auto as_bool = [&] {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    bad("bad boolean");
    return false;
  };
  if (key == "task") {
    args.task = value;
  } else if (key == "optimizer") {
    args.optimizer = value;
  } else if (key == "n") {
    args.config.n = static_cast<int>(as_int());
  } else if (key == "r") {
    args.config.r = static_cast<int>(as_int());
  } else if (key == "J") {
    args.config.coupling_j = as_double();
  } else if (key == "g") {
    args.config.field_g = as_double();
  } else if (key == "budget") {
    args.config.budget = as_int();
  } else if (key == "seed") {
    args.config.master_seed = as_uint();
  } else if (key == "points") {
    args.config.initial_points = static_cast<int>(as_int());
  } else if (key == "reps") {
    args.config.repeats = static_cast<int>(as_int());
  } else if (key == "noise-table") {
    args.config.noise_table_path = value;
  } else if (key == "out") {
    args.config.out_dir = value;
  } else if (key == "jobs") {
    args.config.jobs = static_cast<int>(as_int());
  } else if (key == "timing") {
    args.config.timing = as_bool();
  } else if (key == "baseline") {
    args.baseline = as_double();
    args.baseline_set = true;
  } else if (key == "sites") {
    args.config.sites = static_cast<int>(as_int());
  } else if (key == "alpha") {
    args.config.suffix_alpha = as_double();
  } else if (key == "beta") {
    args.config.beta = as_double();
  } else if (key == "kappa") {
    args.config.sglbo.kappa = as_double();
  } else if (key == "eps") {
    args.config.sglbo.eps = as_double();
  } else if (key == "init-grad-shots") {
    args.config.sglbo.initial_grad_shots = as_int();
  } else if (key == "adam-step") {
    args.config.adam.step = as_double();
  } else if (key == "shots-per-eval") {
    args.shots_per_eval = as_double();
    args.shots_per_eval_set = true;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

/// Flat key=value file feeding the run flags; flags given on the command
/// line keep their values.
void apply_run_config(RunArgs& args) {
  std::string text;
  try {
    text = read_text_file(args.config_path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  int line_no = 0;
  for (std::string_view raw : split_lines(text)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    const CLI::Option* flag = args.cli->get_option_no_throw("--" + key);
    if (flag != nullptr && flag->count() > 0) continue;
    apply_config_value(args, key, value);
  }
}

int cmd_run(RunArgs& args) {
  if (!args.config_path.empty()) apply_run_config(args);
  if (args.shots_per_eval_set) {
    args.config.adam.shots_per_eval = static_cast<std::int64_t>(args.shots_per_eval);
    args.config.nft.shots_per_eval = static_cast<std::int64_t>(args.shots_per_eval);
  }
  args.config.adam.kappa = args.config.sglbo.kappa;
  args.config.adam.initial_grad_shots = args.config.sglbo.initial_grad_shots;
  const auto task = task_from_name(args.task);
  if (!task) throw ConfigError("unknown task '" + args.task + "'");
  const auto optimizer = optimizer_from_name(args.optimizer);
  if (!optimizer) throw ConfigError("unknown optimizer '" + args.optimizer + "'");
  args.config.task = *task;
  args.config.optimizer = *optimizer;
  if (args.baseline_set) args.config.baseline = args.baseline;

  const ExperimentSummary summary = run_experiment(args.config);
  int ok = 0;
  for (const RunOutcome& run : summary.runs) {
    if (run.ok) {
      ++ok;
      std::cout << "run " << run.run_id << " shots " << run.result.total_shots
                << " audit " << run.audited_shots << " iterations "
                << run.result.iterations << " final_cost "
                << format_double(run.final_metric_cost) << "\n";
    } else {
      std::cout << "run " << run.run_id << " FAILED: " << run.error << "\n";
    }
  }
  std::cout << "task " << task_name(args.config.task) << " optimizer "
            << optimizer_name(args.config.optimizer) << " runs " << summary.runs.size()
            << " ok " << ok << " failed " << (summary.runs.size() - static_cast<std::size_t>(ok))
            << "\n";
  if (!summary.final_costs.empty())
    std::cout << "median_final_cost " << format_double(median(summary.final_costs)) << "\n";
  std::cout << "aggregate " << summary.aggregate_path << "\n";
  return ok == 0 ? 1 : 0;
}

struct OracleArgs {
  std::string task = "vqe";
  int n = 4;
  int r = 4;
  double coupling_j = 1.0;
  double field_g = 1.5;
  int starts = 200;
  std::uint64_t seed = 7;
};

int cmd_oracle(const OracleArgs& args) {
  const auto task = task_from_name(args.task);
  if (!task) throw ConfigError("unknown task '" + args.task + "'");
  ExperimentConfig config;
  config.task = *task;
  config.n = args.n;
  config.r = args.r;
  config.coupling_j = args.coupling_j;
  config.field_g = args.field_g;
  const auto cost = make_cost(config);
  if (*task == Task::Vqe) {
    const PauliSum ham = tfim_hamiltonian(args.n, args.coupling_j, args.field_g);
    std::cout << "ground_energy " << format_double(ground_state_energy(ham)) << "\n";
  }
  Rng rng(mix_seed(args.seed, 0x0eac1eull));
  const ConstrainedMinResult cmin = ansatz_constrained_minimum(*cost, args.starts, rng);
  std::cout << "constrained_minimum " << format_double(cmin.value) << "\n";
  std::cout << "starts_used " << cmin.starts_used << "\n";
  return 0;
}

struct PlotArgs {
  std::vector<std::string> aggregates;
  std::string out_dir = ".";
  double baseline = 0.0;
  double sites = 1.0;
};

int cmd_plotdata(const PlotArgs& args) {
  write_plotdata(args.aggregates, args.out_dir, args.baseline, args.sites);
  for (const std::string& path : args.aggregates)
    std::cout << "wrote " << (std::filesystem::path(args.out_dir) /
                              std::filesystem::path(path).stem()).string()
              << ".dat\n";
  return 0;
}

int cmd_noise_check(const std::string& path) {
  const NoiseModel model = load_noise_table(path);
  std::cout << serialize_noise_table(model);
  std::cerr << "qubits " << model.single_qubit_rate.size() << " pairs "
            << model.cnot_rates.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shot-budgeted variational quantum optimization benchmark"};
  app.require_subcommand(1);
  std::function<int()> action;

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Execute a batch of optimizer runs");
  run->add_option("--config", run_args.config_path,
                  "flat key=value config file; explicit flags override it");
  run->add_option("--task", run_args.task, "vqe or vqc")->capture_default_str();
  run->add_option("--optimizer", run_args.optimizer,
                  "sglbo, adam, nft, adam-sa, adam-ass, adam-sa-ass, nft-sa")
      ->capture_default_str();
  run->add_option("--n", run_args.config.n, "qubit count")->check(CLI::Range(2, 20))
      ->capture_default_str();
  run->add_option("--r", run_args.config.r, "entangling-block count")
      ->check(CLI::Range(0, 64))->capture_default_str();
  run->add_option("--J", run_args.config.coupling_j, "Ising coupling")->capture_default_str();
  run->add_option("--g", run_args.config.field_g, "transverse field")->capture_default_str();
  run->add_option("--budget", run_args.config.budget, "total shot budget per run")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--seed", run_args.config.master_seed, "master seed")->capture_default_str();
  run->add_option("--points", run_args.config.initial_points, "number of initial points")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--reps", run_args.config.repeats, "repeats per initial point")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--noise-table", run_args.config.noise_table_path,
                  "device noise table (omit for ideal simulation)");
  run->add_option("--out", run_args.config.out_dir, "output directory")->capture_default_str();
  run->add_option("--jobs", run_args.config.jobs, "concurrent runs")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_flag("--timing", run_args.config.timing, "record wall-clock columns");
  run->add_option("--baseline", run_args.baseline,
                  "cost baseline for extra (cost-baseline)/sites aggregate columns");
  run->add_option("--sites", run_args.config.sites, "site divisor (default: n for vqe, 1 for vqc)");
  run->add_option("--alpha", run_args.config.suffix_alpha, "suffix-averaging fraction")
      ->capture_default_str();
  run->add_option("--beta", run_args.config.beta, "step bound scale (default: 3 vqe, 6 vqc)");
  run->add_option("--kappa", run_args.config.sglbo.kappa, "norm-test precision")
      ->capture_default_str();
  run->add_option("--eps", run_args.config.sglbo.eps, "cost-estimation precision scale")
      ->capture_default_str();
  run->add_option("--init-grad-shots", run_args.config.sglbo.initial_grad_shots,
                  "initial per-component gradient shots")->capture_default_str();
  run->add_option("--adam-step", run_args.config.adam.step, "Adam step size")
      ->capture_default_str();
  run->add_option("--shots-per-eval", run_args.shots_per_eval,
                  "fixed shots per query for Adam and NFT");
  run->callback([&run_args, &run, &action] {
    run_args.cli = run;
    if (run->count("--shots-per-eval") > 0) run_args.shots_per_eval_set = true;
    if (run->count("--baseline") > 0) run_args.baseline_set = true;
    action = [&run_args] { return cmd_run(run_args); };
  });

  OracleArgs oracle_args;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Print exact reference values (ground energy, constrained minimum)");
  oracle->add_option("--task", oracle_args.task, "vqe or vqc")->capture_default_str();
  oracle->add_option("--n", oracle_args.n, "qubit count")->check(CLI::Range(2, 12))
      ->capture_default_str();
  oracle->add_option("--r", oracle_args.r, "entangling-block count")
      ->check(CLI::Range(0, 64))->capture_default_str();
  oracle->add_option("--J", oracle_args.coupling_j, "Ising coupling")->capture_default_str();
  oracle->add_option("--g", oracle_args.field_g, "transverse field")->capture_default_str();
  oracle->add_option("--starts", oracle_args.starts, "multistart count")
      ->check(CLI::PositiveNumber)->capture_default_str();
  oracle->add_option("--seed", oracle_args.seed, "multistart seed")->capture_default_str();
  oracle->callback([&oracle_args, &action] {
    action = [&oracle_args] { return cmd_oracle(oracle_args); };
  });

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plotdata",
                                      "Convert aggregates to (cost-baseline)/sites plot files");
  plot->add_option("aggregates", plot_args.aggregates, "aggregate CSV files")
      ->required()->expected(-1);
  plot->add_option("--out", plot_args.out_dir, "output directory")->capture_default_str();
  plot->add_option("--baseline", plot_args.baseline, "cost baseline")->capture_default_str();
  plot->add_option("--sites", plot_args.sites, "site divisor")->check(CLI::PositiveNumber)
      ->capture_default_str();
  plot->callback([&plot_args, &action] {
    action = [&plot_args] { return cmd_plotdata(plot_args); };
  });

  std::string noise_path;
  CLI::App* noise = app.add_subcommand("noise-check",
                                       "Validate a noise table and echo its canonical form");
  noise->add_option("table", noise_path, "noise table file")->required();
  noise->callback([&noise_path, &action] {
    action = [&noise_path] { return cmd_noise_check(noise_path); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

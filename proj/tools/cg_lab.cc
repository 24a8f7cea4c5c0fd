// cg-lab: generate instances, run column generation, benchmark selection
// strategies and serve the selection step as an RL environment.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cglab/bench.h"
#include "cglab/engine.h"
#include "cglab/env_bridge.h"
#include "cglab/instance.h"
#include "cglab/selection.h"

namespace fs = std::filesystem;

namespace {

struct CgFlags {
  int pool_size = 10;
  int select_count = 5;
  int iteration_cap = 1000;
  double rc_tolerance = 1e-6;
  bool no_force = false;

  void Attach(CLI::App* app) {
    app->add_option("--pool-size", pool_size, "Candidate pool size n")->check(CLI::PositiveNumber);
    app->add_option("--select-count", select_count, "Columns added per iteration k")
        ->check(CLI::PositiveNumber);
    app->add_option("--iteration-cap", iteration_cap, "Master solves before giving up")
        ->check(CLI::PositiveNumber);
    app->add_option("--rc-tolerance", rc_tolerance, "Convergence threshold on reduced cost");
    app->add_flag("--no-force", no_force, "Do not force the pricing optimum into selections");
  }

  cglab::CgConfig Config() const {
    cglab::CgConfig config;
    config.pool_size = pool_size;
    config.select_count = select_count;
    config.iteration_cap = iteration_cap;
    config.rc_tolerance = rc_tolerance;
    config.force_optimum = !no_force;
    config.Validate();
    return config;
  }
};

std::vector<std::string> StrategyNames() {
  std::vector<std::string> names(std::begin(cglab::kBuiltinStrategies),
                                 std::end(cglab::kBuiltinStrategies));
  names.push_back("external");
  return names;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int RunGen(const std::string& kind, const std::optional<std::string>& category, int count,
           double scale, std::uint64_t seed_base, const fs::path& out) {
  cglab::GenConfig config;
  config.kind = cglab::ParseProblemKind(kind);
  config.category = cglab::ParseCategory(category.value_or("easy"));
  if (count <= 0) count = cglab::DefaultDatasetSize(*config.category, scale);
  cglab::WriteDataset(out, config, count, seed_base);
  std::cout << "wrote " << count << " instances to " << out.string() << '\n';
  return 0;
}

int RunSolve(const fs::path& instance_path, const std::string& strategy_name,
             std::uint64_t seed, const std::optional<fs::path>& records,
             const std::string& policy_cmd, const CgFlags& flags) {
  const cglab::Instance instance = cglab::ReadInstance(instance_path);
  const cglab::CgConfig config = flags.Config();

  std::unique_ptr<cglab::ProcessPolicyChannel> channel;
  std::unique_ptr<cglab::SelectionStrategy> strategy;
  if (strategy_name == "external") {
    if (policy_cmd.empty()) throw std::invalid_argument("--strategy external needs --policy-cmd");
    channel = std::make_unique<cglab::ProcessPolicyChannel>(policy_cmd);
    strategy = std::make_unique<cglab::ExternalPolicy>(*channel);
  } else {
    strategy = cglab::MakeStrategy(strategy_name);
  }

  const cglab::CgRun run = cglab::RunColumnGeneration(instance, *strategy, config, seed);
  if (records) {
    std::ofstream out(*records);
    if (!out) throw std::runtime_error("cannot write " + records->string());
    for (const auto& record : run.records) out << cglab::IterationRecordToJson(record) << '\n';
  }
  nlohmann::ordered_json summary;
  summary["instance"] = instance_path.string();
  summary["strategy"] = strategy_name;
  summary["seed"] = seed;
  summary["iterations"] = run.iterations;
  summary["status"] = cglab::CgStatusName(run.status);
  summary["objective"] = run.objective;
  summary["final_best_rc"] = run.final_best_reduced_cost;
  summary["time"] = {{"rmp", run.seconds.master},
                     {"pp", run.seconds.pricing},
                     {"select", run.seconds.selection}};
  std::cout << summary.dump() << '\n';
  return run.status == cglab::CgStatus::kConverged ? 0 : 2;
}

int EmitReport(const cglab::BenchReport& report, const fs::path& out) {
  fs::create_directories(out);
  const std::string text = cglab::RenderText(report);
  WriteText(out / "report.csv", cglab::RenderCsv(report));
  WriteText(out / "report.txt", text);
  std::cout << text;
  int cap_reached = 0;
  for (const auto& row : report.rows) cap_reached += row.cap_reached;
  if (cap_reached > 0) {
    std::cerr << "warning: " << cap_reached << " run(s) stopped at the iteration cap\n";
  }
  return 0;
}

int RunBenchCommand(const std::vector<fs::path>& dataset_dirs,
                    const std::vector<std::string>& strategies, const fs::path& out,
                    std::optional<int> threads, const std::string& baseline, bool no_iterations,
                    const CgFlags& flags) {
  std::vector<cglab::Dataset> datasets;
  for (const fs::path& dir : dataset_dirs) datasets.push_back(cglab::LoadDataset(dir));
  cglab::BenchOptions options;
  options.cg = flags.Config();
  options.threads = cglab::ResolveThreads(threads);
  options.keep_iterations = !no_iterations;
  std::vector<std::vector<std::string>> lines;
  const auto results = cglab::RunBench(datasets, strategies, options, &lines);
  cglab::WriteRunFiles(out / "runs", results, &lines);
  return EmitReport(cglab::BuildReport(results, baseline), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Column-generation lab for cutting stock and graph coloring LP relaxations"};
  app.require_subcommand(1);

  std::string kind = "csp";
  std::optional<std::string> category;
  int count = 0;
  double scale = 1.0;
  std::uint64_t seed_base = 0;
  fs::path gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a dataset of random instances");
  gen->add_option("--kind", kind, "csp or gcp")->check(CLI::IsMember({"csp", "gcp"}));
  gen->add_option("--category", category, "easy, normal or hard")
      ->check(CLI::IsMember({"easy", "normal", "hard"}));
  gen->add_option("--count", count, "Number of instances (default depends on category)");
  gen->add_option("--scale", scale, "Multiplier on the default count")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed-base", seed_base, "Seed of the first instance");
  gen->add_option("--out", gen_out, "Output directory")->required();

  fs::path instance_path;
  std::string strategy = "greedy-m";
  std::uint64_t seed = 0;
  std::optional<fs::path> records;
  std::string policy_cmd;
  CgFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Run column generation on one instance");
  solve->add_option("--instance", instance_path, "Instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_option("--strategy", strategy, "Column-selection strategy")
      ->check(CLI::IsMember(StrategyNames()));
  solve->add_option("--seed", seed, "Seed for randomized strategies");
  solve->add_option("--records", records, "Write per-iteration JSON lines here");
  solve->add_option("--policy-cmd", policy_cmd, "Shell command of the external policy");
  solve_flags.Attach(solve);

  std::vector<fs::path> datasets;
  std::vector<std::string> strategies = {"greedy-s", "greedy-m", "diverse-m"};
  fs::path bench_out = ".";
  std::optional<int> threads;
  std::string baseline = "greedy-m";
  bool no_iterations = false;
  CgFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Run strategies over datasets and report");
  bench->add_option("--dataset", datasets, "Dataset directory (repeatable)")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--strategies", strategies, "Builtin strategies to compare")
      ->delimiter(',')
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(cglab::kBuiltinStrategies),
                                                     std::end(cglab::kBuiltinStrategies))));
  bench->add_option("--out", bench_out, "Directory for runs/, report.csv and report.txt");
  bench->add_option("--threads", threads, "Worker threads (CG_LAB_THREADS overrides)");
  bench->add_option("--baseline", baseline, "Strategy used for win/loss counts");
  bench->add_flag("--no-iterations", no_iterations, "Omit per-iteration lines from run files");
  bench_flags.Attach(bench);

  std::vector<fs::path> run_paths;
  fs::path report_out = ".";
  std::string report_baseline = "greedy-m";
  auto* report = app.add_subcommand("report", "Aggregate stored run files");
  report->add_option("runs", run_paths, "Run files or directories of *.jsonl");
  report->add_option("--out", report_out, "Directory for report.csv and report.txt");
  report->add_option("--baseline", report_baseline, "Strategy used for win/loss counts");

  std::optional<int> tcp_port;
  std::string problem = "csp";
  std::string env_category = "easy";
  cglab::EnvDefaults env;
  CgFlags env_flags;
  auto* serve = app.add_subcommand("serve-env", "Serve the selection MDP over NDJSON");
  serve->add_option("--tcp", tcp_port, "Listen on 127.0.0.1:PORT instead of stdin/stdout");
  serve->add_option("--problem", problem, "csp or gcp")->check(CLI::IsMember({"csp", "gcp"}));
  serve->add_option("--category", env_category, "easy, normal or hard")
      ->check(CLI::IsMember({"easy", "normal", "hard"}));
  serve->add_option("--reward-alpha", env.reward.alpha, "Objective-improvement weight");
  serve->add_option("--reward-beta", env.reward.beta, "Diversity-bonus weight");
  serve->add_option("--reward-gamma", env.reward.gamma, "Discount reported to the trainer");
  serve->add_flag("--zero-global", env.zero_global, "Zero the global features in states");
  env_flags.Attach(serve);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return RunGen(kind, category, count, scale, seed_base, gen_out);
    if (solve->parsed()) {
      return RunSolve(instance_path, strategy, seed, records, policy_cmd, solve_flags);
    }
    if (bench->parsed()) {
      return RunBenchCommand(datasets, strategies, bench_out, threads, baseline, no_iterations,
                             bench_flags);
    }
    if (report->parsed()) {
      return EmitReport(cglab::BuildReport(cglab::ReadRunFiles(run_paths), report_baseline),
                        report_out);
    }
    if (serve->parsed()) {
      env.problem = cglab::ParseProblemKind(problem);
      env.category = cglab::ParseCategory(env_category);
      env.cg = env_flags.Config();
      env.reward.Validate();
      if (tcp_port) {
        cglab::ServeTcp(*tcp_port, env, 0, [](int port) {
          std::cerr << "listening on 127.0.0.1:" << port << std::endl;
        });
      } else {
        std::ios::sync_with_stdio(false);
        cglab::ServeStream(std::cin, std::cout, env);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "cg-lab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

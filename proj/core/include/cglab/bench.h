// Strategy x dataset sweeps, run files and aggregated reports.
//
// A bench writes one JSON-lines file per (dataset, strategy) pair holding a
// "run" line per instance, optionally followed by that run's "iter" lines.
// Reports are always built from RunResult values, whether they come straight
// from a bench or are read back from run files, so both paths render the same
// bytes.

#ifndef CGLAB_BENCH_H_
#define CGLAB_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cglab/engine.h"
#include "cglab/instance.h"

namespace cglab {

struct NamedInstance {
  std::string name;  // file stem
  Instance instance;
};

struct Dataset {
  std::string name;
  std::vector<NamedInstance> instances;
};

// Reads every inst_*.json file of `dir` in name order.
Dataset LoadDataset(const std::filesystem::path& dir);

// Writes inst_00000.json ... with seeds seed_base, seed_base + 1, ...
void WriteDataset(const std::filesystem::path& dir, const GenConfig& base, int count,
                  std::uint64_t seed_base);

// Default dataset sizes per CSP category, multiplied by `scale` (at least 1).
int DefaultDatasetSize(Category category, double scale = 1.0);

std::uint64_t RunSeed(std::uint64_t instance_seed, std::string_view strategy);

// CG_LAB_THREADS when set and positive, otherwise the hardware concurrency.
int ResolveThreads(std::optional<int> requested = std::nullopt);

struct RunResult {
  std::string dataset;
  std::string strategy;
  std::string instance;
  std::uint64_t seed = 0;
  int iterations = 0;
  CgStatus status = CgStatus::kRunning;
  double objective = 0.0;
  double final_best_reduced_cost = 0.0;
  PhaseTimes seconds;

  std::string run_id() const { return dataset + "/" + strategy + "/" + instance; }
};

struct BenchOptions {
  CgConfig cg;
  int threads = 1;
  bool keep_iterations = true;  // emit "iter" lines in run files
};

// Solves every (instance, strategy) pair once. Results are ordered by
// dataset, strategy, then instance, independent of the thread count.
// `iteration_lines`, when non-null, receives the serialized "iter" lines of
// each run in the same order.
std::vector<RunResult> RunBench(const std::vector<Dataset>& datasets,
                                const std::vector<std::string>& strategies,
                                const BenchOptions& options,
                                std::vector<std::vector<std::string>>* iteration_lines = nullptr);

std::string RunResultToJson(const RunResult& result);
RunResult RunResultFromJson(std::string_view line);

// Writes runs/<dataset>__<strategy>.jsonl files below `runs_dir` and returns
// their paths.
std::vector<std::filesystem::path> WriteRunFiles(
    const std::filesystem::path& runs_dir, const std::vector<RunResult>& results,
    const std::vector<std::vector<std::string>>* iteration_lines = nullptr);

// Reads the "run" lines of every file; directories contribute their *.jsonl
// files. Missing paths are named in the thrown error.
std::vector<RunResult> ReadRunFiles(const std::vector<std::filesystem::path>& paths);

struct ReportRow {
  std::string dataset;
  std::string strategy;
  int count = 0;
  long long total_iterations = 0;
  double mean_iterations = 0.0;
  double std_iterations = 0.0;  // population standard deviation
  PhaseTimes seconds;
  int cap_reached = 0;
  int wins = 0;    // instances with fewer iterations than the baseline
  int losses = 0;  // instances with more iterations than the baseline
};

struct BenchReport {
  std::string baseline;
  std::vector<ReportRow> rows;
};

// Throws on duplicate run ids.
BenchReport BuildReport(std::vector<RunResult> results, std::string baseline = "greedy-m");

std::string RenderCsv(const BenchReport& report);
std::string RenderText(const BenchReport& report);

}  // namespace cglab

#endif  // CGLAB_BENCH_H_

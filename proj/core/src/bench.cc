#include "cglab/bench.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

namespace cglab {

namespace fs = std::filesystem;

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string ShortestDouble(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string Fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

CgStatus ParseStatus(std::string_view name) {
  if (name == "converged") return CgStatus::kConverged;
  if (name == "cap-reached") return CgStatus::kCapReached;
  if (name == "running") return CgStatus::kRunning;
  throw std::invalid_argument("unknown run status '" + std::string(name) + "'");
}

auto OrderKey(const RunResult& r) { return std::tie(r.dataset, r.strategy, r.instance); }

}  // namespace

Dataset LoadDataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("dataset directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("inst_") && name.ends_with(".json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  Dataset dataset;
  dataset.name = fs::absolute(dir).lexically_normal().filename().string();
  if (dataset.name.empty()) dataset.name = fs::absolute(dir).parent_path().filename().string();
  for (const fs::path& file : files) {
    dataset.instances.push_back({file.stem().string(), ReadInstance(file)});
  }
  return dataset;
}

void WriteDataset(const fs::path& dir, const GenConfig& base, int count,
                  std::uint64_t seed_base) {
  if (count < 0) throw std::invalid_argument("dataset count must be >= 0");
  fs::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    GenConfig config = base;
    config.seed = seed_base + static_cast<std::uint64_t>(i);
    char name[32];
    std::snprintf(name, sizeof(name), "inst_%05d.json", i);
    WriteInstance(Generate(config), dir / name);
  }
}

int DefaultDatasetSize(Category category, double scale) {
  int base = 0;
  switch (category) {
    case Category::kEasy:
      base = 1000;
      break;
    case Category::kNormal:
      base = 200;
      break;
    case Category::kHard:
      base = 100;
      break;
  }
  return std::max(1, static_cast<int>(std::lround(base * scale)));
}

std::uint64_t RunSeed(std::uint64_t instance_seed, std::string_view strategy) {
  return SplitMix64(instance_seed ^ Fnv1a(strategy));
}

int ResolveThreads(std::optional<int> requested) {
  if (const char* env = std::getenv("CG_LAB_THREADS")) {
    int value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
  }
  if (requested && *requested > 0) return *requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunResult> RunBench(const std::vector<Dataset>& datasets,
                                const std::vector<std::string>& strategies,
                                const BenchOptions& options,
                                std::vector<std::vector<std::string>>* iteration_lines) {
  options.cg.Validate();
  for (const std::string& name : strategies) MakeStrategy(name);

  struct Job {
    const Dataset* dataset;
    const NamedInstance* instance;
    const std::string* strategy;
  };
  std::vector<Job> jobs;
  for (const Dataset& dataset : datasets) {
    for (const std::string& strategy : strategies) {
      for (const NamedInstance& instance : dataset.instances) {
        jobs.push_back({&dataset, &instance, &strategy});
      }
    }
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return std::tie(a.dataset->name, *a.strategy, a.instance->name) <
           std::tie(b.dataset->name, *b.strategy, b.instance->name);
  });

  std::vector<RunResult> results(jobs.size());
  std::vector<std::vector<std::string>> lines(iteration_lines ? jobs.size() : 0);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        const Job& job = jobs[j];
        RunResult& result = results[j];
        result.dataset = job.dataset->name;
        result.strategy = *job.strategy;
        result.instance = job.instance->name;
        result.seed = RunSeed(SeedOf(job.instance->instance), *job.strategy);
        auto strategy = MakeStrategy(*job.strategy);
        CgRun run = RunColumnGeneration(job.instance->instance, *strategy, options.cg,
                                        result.seed);
        result.iterations = run.iterations;
        result.status = run.status;
        result.objective = run.objective;
        result.final_best_reduced_cost = run.final_best_reduced_cost;
        result.seconds = run.seconds;
        if (iteration_lines && options.keep_iterations) {
          for (const IterationRecord& record : run.records) {
            lines[j].push_back(IterationRecordToJson(record));
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(jobs.size());
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(jobs.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  if (error) std::rethrow_exception(error);
  if (iteration_lines) *iteration_lines = std::move(lines);
  return results;
}

std::string RunResultToJson(const RunResult& result) {
  ordered_json out;
  out["type"] = "run";
  out["run_id"] = result.run_id();
  out["dataset"] = result.dataset;
  out["strategy"] = result.strategy;
  out["instance"] = result.instance;
  out["seed"] = result.seed;
  out["iterations"] = result.iterations;
  out["status"] = CgStatusName(result.status);
  out["objective"] = result.objective;
  out["final_best_rc"] = result.final_best_reduced_cost;
  out["time"] = {{"rmp", result.seconds.master},
                 {"pp", result.seconds.pricing},
                 {"select", result.seconds.selection}};
  return out.dump();
}

RunResult RunResultFromJson(std::string_view line) {
  const auto doc = nlohmann::json::parse(line);
  RunResult result;
  result.dataset = doc.at("dataset").get<std::string>();
  result.strategy = doc.at("strategy").get<std::string>();
  result.instance = doc.at("instance").get<std::string>();
  result.seed = doc.at("seed").get<std::uint64_t>();
  result.iterations = doc.at("iterations").get<int>();
  result.status = ParseStatus(doc.at("status").get<std::string>());
  result.objective = doc.at("objective").get<double>();
  result.final_best_reduced_cost = doc.at("final_best_rc").get<double>();
  const auto& time = doc.at("time");
  result.seconds.master = time.at("rmp").get<double>();
  result.seconds.pricing = time.at("pp").get<double>();
  result.seconds.selection = time.at("select").get<double>();
  if (auto id = doc.find("run_id"); id != doc.end() && id->get<std::string>() != result.run_id()) {
    throw std::runtime_error("run line has inconsistent run_id '" + id->get<std::string>() + "'");
  }
  return result;
}

std::vector<fs::path> WriteRunFiles(const fs::path& runs_dir,
                                    const std::vector<RunResult>& results,
                                    const std::vector<std::vector<std::string>>* iteration_lines) {
  fs::create_directories(runs_dir);
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < results.size(); ++i) {
    groups[{results[i].dataset, results[i].strategy}].push_back(i);
  }
  std::vector<fs::path> paths;
  for (const auto& [key, indices] : groups) {
    const fs::path path = runs_dir / (key.first + "__" + key.second + ".jsonl");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write run file " + path.string());
    for (std::size_t i : indices) {
      out << RunResultToJson(results[i]) << '\n';
      if (iteration_lines && i < iteration_lines->size()) {
        const std::string prefix =
            R"({"type":"iter","run_id":)" + nlohmann::json(results[i].run_id()).dump() + ",";
        for (const std::string& line : (*iteration_lines)[i]) {
          out << prefix << line.substr(1) << '\n';
        }
      }
    }
    paths.push_back(path);
  }
  return paths;
}

std::vector<RunResult> ReadRunFiles(const std::vector<fs::path>& paths) {
  std::vector<fs::path> files;
  for (const fs::path& path : paths) {
    if (fs::is_directory(path)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(path)) {
      files.push_back(path);
    } else {
      throw std::runtime_error("run file not found: " + path.string());
    }
  }
  std::vector<RunResult> results;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read run file " + file.string());
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.empty()) continue;
      try {
        const auto doc = nlohmann::json::parse(line);
        if (doc.value("type", std::string()) != "run") continue;
        results.push_back(RunResultFromJson(line));
      } catch (const std::exception& e) {
        throw std::runtime_error(file.string() + ":" + std::to_string(line_number) + ": " +
                                 e.what());
      }
    }
  }
  return results;
}

BenchReport BuildReport(std::vector<RunResult> results, std::string baseline) {
  std::sort(results.begin(), results.end(),
            [](const RunResult& a, const RunResult& b) { return OrderKey(a) < OrderKey(b); });
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (OrderKey(results[i - 1]) == OrderKey(results[i])) {
      throw std::runtime_error("duplicate run id '" + results[i].run_id() + "'");
    }
  }

  std::map<std::pair<std::string, std::string>, int> baseline_iterations;
  for (const RunResult& r : results) {
    if (r.strategy == baseline) baseline_iterations[{r.dataset, r.instance}] = r.iterations;
  }

  BenchReport report;
  report.baseline = std::move(baseline);
  std::size_t begin = 0;
  while (begin < results.size()) {
    std::size_t end = begin;
    while (end < results.size() && results[end].dataset == results[begin].dataset &&
           results[end].strategy == results[begin].strategy) {
      ++end;
    }
    ReportRow row;
    row.dataset = results[begin].dataset;
    row.strategy = results[begin].strategy;
    row.count = static_cast<int>(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const RunResult& r = results[i];
      row.total_iterations += r.iterations;
      row.seconds.master += r.seconds.master;
      row.seconds.pricing += r.seconds.pricing;
      row.seconds.selection += r.seconds.selection;
      if (r.status == CgStatus::kCapReached) ++row.cap_reached;
      if (r.strategy != report.baseline) {
        auto it = baseline_iterations.find({r.dataset, r.instance});
        if (it != baseline_iterations.end()) {
          if (r.iterations < it->second) ++row.wins;
          if (r.iterations > it->second) ++row.losses;
        }
      }
    }
    row.mean_iterations = static_cast<double>(row.total_iterations) / row.count;
    double squares = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double d = results[i].iterations - row.mean_iterations;
      squares += d * d;
    }
    row.std_iterations = std::sqrt(squares / row.count);
    report.rows.push_back(std::move(row));
    begin = end;
  }
  return report;
}

std::string RenderCsv(const BenchReport& report) {
  std::ostringstream out;
  out << "dataset,strategy,instances,total_iterations,mean_iterations,std_iterations,"
         "total_seconds,rmp_seconds,pricing_seconds,selection_seconds,cap_reached,"
         "wins_vs_baseline,losses_vs_baseline,baseline\n";
  for (const ReportRow& row : report.rows) {
    out << row.dataset << ',' << row.strategy << ',' << row.count << ',' << row.total_iterations
        << ',' << ShortestDouble(row.mean_iterations) << ','
        << ShortestDouble(row.std_iterations) << ',' << ShortestDouble(row.seconds.total())
        << ',' << ShortestDouble(row.seconds.master) << ','
        << ShortestDouble(row.seconds.pricing) << ',' << ShortestDouble(row.seconds.selection)
        << ',' << row.cap_reached << ',' << row.wins << ',' << row.losses << ','
        << report.baseline << '\n';
  }
  return out.str();
}

std::string RenderText(const BenchReport& report) {
  const std::vector<std::string> header = {"dataset", "strategy", "n",      "mean iters",
                                           "std",     "total s",  "rmp s",  "pricing s",
                                           "select s", "cap",     "win/loss"};
  std::vector<std::vector<std::string>> cells;
  for (const ReportRow& row : report.rows) {
    cells.push_back({row.dataset, row.strategy, std::to_string(row.count),
                     Fixed(row.mean_iterations, 2), Fixed(row.std_iterations, 2),
                     Fixed(row.seconds.total(), 3), Fixed(row.seconds.master, 3),
                     Fixed(row.seconds.pricing, 3), Fixed(row.seconds.selection, 3),
                     std::to_string(row.cap_reached),
                     row.strategy == report.baseline
                         ? std::string("baseline")
                         : std::to_string(row.wins) + "/" + std::to_string(row.losses)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) out << "  ";
      const std::size_t pad = width[c] - line[c].size();
      if (c < 2) {
        out << line[c] << std::string(c + 1 == line.size() ? 0 : pad, ' ');
      } else {
        out << std::string(pad, ' ') << line[c];
      }
    }
    out << '\n';
  };
  emit(header);
  std::size_t total_width = 0;
  for (std::size_t w : width) total_width += w;
  out << std::string(total_width + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& line : cells) emit(line);
  out << "\nIteration counts are the comparable metric; times depend on hardware and load.\n";
  return out.str();
}

}  // namespace cglab

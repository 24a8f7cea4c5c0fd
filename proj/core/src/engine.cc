#include "cglab/engine.h"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

namespace cglab {

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void CgConfig::Validate() const {
  if (pool_size < 1) throw std::invalid_argument("CgConfig: pool_size must be >= 1");
  if (select_count < 1 || select_count > pool_size) {
    throw std::invalid_argument("CgConfig: need 1 <= select_count <= pool_size");
  }
  if (!(rc_tolerance > 0.0)) throw std::invalid_argument("CgConfig: rc_tolerance must be > 0");
  if (iteration_cap < 1) throw std::invalid_argument("CgConfig: iteration_cap must be >= 1");
}

std::string_view CgStatusName(CgStatus status) {
  switch (status) {
    case CgStatus::kRunning:
      return "running";
    case CgStatus::kConverged:
      return "converged";
    case CgStatus::kCapReached:
      return "cap-reached";
  }
  return "unknown";
}

Selection ForceOptimum(Selection selection) {
  if (selection.empty() || std::find(selection.begin(), selection.end(), 0) != selection.end()) {
    return selection;
  }
  *std::max_element(selection.begin(), selection.end()) = 0;
  return selection;
}

ColumnGeneration::ColumnGeneration(Instance instance, const CgConfig& config)
    : config_(config), master_(std::move(instance)) {
  config_.Validate();
  if (const auto* gcp = std::get_if<GcpInstance>(&master_.instance())) graph_.emplace(*gcp);
  SolveAndPrice();
  initial_objective_ = objective();
}

void ColumnGeneration::SolveAndPrice() {
  IterationRecord record;
  auto start = Clock::now();
  const LpSolution& solution = master_.Solve();
  record.seconds.master = SecondsSince(start);

  start = Clock::now();
  if (graph_) {
    pool_ = SolveGcpPricing(*graph_, solution.duals, config_.pool_size);
  } else {
    pool_ = SolveCspPricing(std::get<CspInstance>(master_.instance()), solution.duals,
                            config_.pool_size);
  }
  record.seconds.pricing = SecondsSince(start);

  record.iteration = master_.solve_count();
  record.objective = solution.objective;
  record.duals = solution.duals;
  record.pool_reduced_costs = pool_.reduced_costs;
  record.basis_events = master_.last_events();
  records_.push_back(std::move(record));

  if (pool_.best_reduced_cost() >= -config_.rc_tolerance) {
    status_ = CgStatus::kConverged;
  } else if (master_.solve_count() >= config_.iteration_cap) {
    status_ = CgStatus::kCapReached;
  }
}

StateSnapshot ColumnGeneration::Snapshot(bool zero_global) const {
  StateOptions options;
  options.pool_size = config_.pool_size;
  options.select_count = config_.select_count;
  options.obj0 = initial_objective_;
  options.zero_global = zero_global;
  return ExtractState(master_, pool_, options);
}

Transition ColumnGeneration::Apply(Selection selection, bool single_column,
                                   double selection_seconds) {
  if (done()) throw std::logic_error("ColumnGeneration::Apply after termination");
  for (int index : selection) {
    if (index < 0 || index >= pool_.size()) {
      throw std::out_of_range("selection index outside the candidate pool");
    }
  }
  if (config_.force_optimum && !single_column) selection = ForceOptimum(std::move(selection));
  Transition transition;
  transition.previous_objective = objective();
  IterationRecord& record = records_.back();
  record.selected = selection;
  record.seconds.selection = selection_seconds;
  for (int index : selection) {
    transition.selected_columns.push_back(pool_.columns[index]);
    if (auto id = master_.AddColumn(pool_.columns[index])) record.added_columns.push_back(*id);
  }
  SolveAndPrice();
  transition.objective = objective();
  return transition;
}

CgRun ColumnGeneration::Finish() && {
  CgRun run;
  run.objective = objective();
  run.iterations = iteration();
  run.status = status_;
  run.final_best_reduced_cost = pool_.best_reduced_cost();
  for (const IterationRecord& record : records_) {
    run.seconds.master += record.seconds.master;
    run.seconds.pricing += record.seconds.pricing;
    run.seconds.selection += record.seconds.selection;
  }
  run.records = std::move(records_);
  return run;
}

CgRun RunColumnGeneration(const Instance& instance, SelectionStrategy& strategy,
                          const CgConfig& config, std::uint64_t seed) {
  ColumnGeneration cg(instance, config);
  std::mt19937_64 rng(seed);
  const bool single = strategy.single_column();
  while (!cg.done()) {
    const auto start = Clock::now();
    SelectionContext ctx{cg.pool(),
                         single ? 1 : config.select_count,
                         config.force_optimum && !single,
                         cg.master(),
                         rng,
                         [&cg] { return cg.Snapshot(); }};
    Selection selection = strategy.Select(ctx);
    cg.Apply(std::move(selection), single, SecondsSince(start));
  }
  return std::move(cg).Finish();
}

namespace {

void EnumeratePatterns(const CspInstance& instance, int row, int capacity,
                       std::vector<int>& counts, std::vector<Column>& out, int limit) {
  if (row == instance.num_rows()) {
    if (std::any_of(counts.begin(), counts.end(), [](int c) { return c > 0; })) {
      if (static_cast<int>(out.size()) >= limit) {
        throw EnumerationLimitError("more than " + std::to_string(limit) + " patterns");
      }
      out.push_back(Column::FromDense(counts));
    }
    return;
  }
  const int length = instance.orders[row].length;
  for (int c = 0; c * length <= capacity; ++c) {
    counts[row] = c;
    EnumeratePatterns(instance, row + 1, capacity - c * length, counts, out, limit);
  }
  counts[row] = 0;
}

void EnumerateMaximalSets(const Graph& graph, int node, std::vector<int>& chosen,
                          std::vector<int>& blocked, std::vector<Column>& out, int limit,
                          long long& budget) {
  if (--budget < 0) throw EnumerationLimitError("independent set enumeration too large");
  if (node == graph.size()) {
    if (graph.IsMaximalIndependent(chosen)) {
      if (static_cast<int>(out.size()) >= limit) {
        throw EnumerationLimitError("more than " + std::to_string(limit) + " maximal sets");
      }
      out.push_back(Column::FromSupport(chosen));
    }
    return;
  }
  if (blocked[node] == 0) {
    chosen.push_back(node);
    for (int u : graph.neighbors(node)) ++blocked[u];
    EnumerateMaximalSets(graph, node + 1, chosen, blocked, out, limit, budget);
    for (int u : graph.neighbors(node)) --blocked[u];
    chosen.pop_back();
  }
  EnumerateMaximalSets(graph, node + 1, chosen, blocked, out, limit, budget);
}

}  // namespace

std::vector<Column> EnumerateAllColumns(const Instance& instance, int limit) {
  std::vector<Column> columns;
  if (const auto* csp = std::get_if<CspInstance>(&instance)) {
    std::vector<int> counts(csp->orders.size(), 0);
    EnumeratePatterns(*csp, 0, csp->roll_length, counts, columns, limit);
    return columns;
  }
  const Graph graph(std::get<GcpInstance>(instance));
  std::vector<int> chosen;
  std::vector<int> blocked(graph.size(), 0);
  long long budget = 100LL * limit;
  EnumerateMaximalSets(graph, 0, chosen, blocked, columns, limit, budget);
  return columns;
}

double SolveFullEnumeration(const Instance& instance, int limit) {
  Validate(instance);
  const std::vector<Column> columns = EnumerateAllColumns(instance, limit);
  const LpSolution solution = Solve(BuildCoveringLp(instance, columns));
  if (solution.status != LpStatus::kOptimal) {
    throw std::runtime_error("full master not optimal: " +
                             std::string(LpStatusName(solution.status)));
  }
  return solution.objective;
}

std::string IterationRecordToJson(const IterationRecord& record) {
  nlohmann::ordered_json out;
  out["t"] = record.iteration;
  out["obj"] = record.objective;
  out["duals"] = record.duals;
  out["pool_rc"] = record.pool_reduced_costs;
  out["selected"] = record.selected;
  out["added"] = record.added_columns;
  out["entered"] = record.basis_events.entered;
  out["left"] = record.basis_events.left;
  out["time"] = {{"rmp", record.seconds.master},
                 {"pp", record.seconds.pricing},
                 {"select", record.seconds.selection}};
  return out.dump();
}

}  // namespace cglab

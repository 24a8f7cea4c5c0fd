#include "cglab/master.h"

#include <stdexcept>
#include <string>

namespace cglab {

namespace {

std::vector<double> CoveringRhs(const Instance& instance) {
  std::vector<double> rhs;
  if (const auto* csp = std::get_if<CspInstance>(&instance)) {
    for (const Order& order : csp->orders) rhs.push_back(order.demand);
  } else {
    rhs.assign(std::get<GcpInstance>(instance).node_count, 1.0);
  }
  return rhs;
}

std::vector<SparseEntry> ToEntries(const Column& column) {
  std::vector<SparseEntry> entries;
  entries.reserve(column.support_size());
  for (const ColumnEntry& e : column.entries()) entries.push_back({e.row, double(e.coef)});
  return entries;
}

}  // namespace

std::vector<Column> InitialColumns(const Instance& instance) {
  std::vector<Column> columns;
  if (const auto* csp = std::get_if<CspInstance>(&instance)) {
    std::vector<int> counts(csp->orders.size(), 0);
    for (std::size_t i = 0; i < csp->orders.size(); ++i) {
      counts[i] = csp->roll_length / csp->orders[i].length;
      columns.push_back(Column::FromDense(counts));
      counts[i] = 0;
    }
    return columns;
  }
  const Graph graph(std::get<GcpInstance>(instance));
  std::vector<char> covered(graph.size(), 0);
  for (int v = 0; v < graph.size(); ++v) {
    if (covered[v]) continue;
    const std::vector<int> set = graph.ExtendToMaximal({v});
    for (int u : set) covered[u] = 1;
    columns.push_back(Column::FromSupport(set));
  }
  return columns;
}

DenseLp BuildCoveringLp(const Instance& instance, std::span<const Column> columns) {
  std::vector<double> rhs = CoveringRhs(instance);
  std::vector<RowSense> senses(rhs.size(), RowSense::kGreaterEqual);
  DenseLp lp(std::move(rhs), std::move(senses));
  for (const Column& column : columns) lp.AddColumn(1.0, ToEntries(column));
  return lp;
}

RmpModel::RmpModel(Instance instance)
    : instance_(std::make_shared<const Instance>(std::move(instance))) {
  Validate(*instance_);
  std::vector<double> rhs = CoveringRhs(*instance_);
  std::vector<RowSense> senses(rhs.size(), RowSense::kGreaterEqual);
  lp_ = DenseLp(std::move(rhs), std::move(senses));
  for (Column& column : InitialColumns(*instance_)) AddColumn(std::move(column));
}

std::optional<int> RmpModel::AddColumn(Column column) {
  if (column.empty() || index_.contains(column)) return std::nullopt;
  for (const ColumnEntry& e : column.entries()) {
    if (e.row < 0 || e.row >= num_rows()) {
      throw std::invalid_argument("RmpModel: column row out of range");
    }
  }
  const int j = lp_.AddColumn(1.0, ToEntries(column));
  index_.insert(column);
  columns_.push_back(std::move(column));
  in_basis_.push_back(0);
  out_of_basis_.push_back(0);
  return j;
}

const LpSolution& RmpModel::Solve() {
  std::optional<Basis> warm;
  if (solution_) warm = solution_->basis;
  LpSolution next = cglab::Solve(lp_, warm);
  if (next.status != LpStatus::kOptimal) {
    throw std::runtime_error("restricted master not solved to optimality: " +
                             std::string(LpStatusName(next.status)));
  }
  if (solution_) {
    events_ = ComputeBasisEvents(*solution_, next);
  } else {
    events_ = {};
  }
  std::vector<char> basic(columns_.size(), 0);
  for (int j : next.basic_columns) basic[j] = 1;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    ++(basic[j] ? in_basis_[j] : out_of_basis_[j]);
  }
  ++solve_count_;
  solution_ = std::move(next);
  return *solution_;
}

double RmpModel::TrialObjective(std::span<const Column> extra) const {
  DenseLp trial = lp_;
  std::set<Column> added;
  for (const Column& column : extra) {
    if (column.empty() || index_.contains(column) || !added.insert(column).second) continue;
    trial.AddColumn(1.0, ToEntries(column));
  }
  std::optional<Basis> warm;
  if (solution_) warm = solution_->basis;
  const LpSolution result = cglab::Solve(trial, warm);
  if (result.status != LpStatus::kOptimal) {
    throw std::runtime_error("trial master not solved to optimality: " +
                             std::string(LpStatusName(result.status)));
  }
  return result.objective;
}

}  // namespace cglab

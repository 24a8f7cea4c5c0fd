// The restricted master problem: covering rows over the columns known so far,
// solved warm from the previous basis, plus the basis-membership history that
// the state features read.

#ifndef CGLAB_MASTER_H_
#define CGLAB_MASTER_H_

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "cglab/instance.h"
#include "cglab/pricing.h"
#include "cglab/simplex.h"

namespace cglab {

// CSP: one homogeneous pattern per order with floor(L / l_i) pieces.
// GCP: greedy cover, each uncovered lowest-index node extended to a maximal
// independent set.
std::vector<Column> InitialColumns(const Instance& instance);

class RmpModel {
 public:
  explicit RmpModel(Instance instance);

  const Instance& instance() const { return *instance_; }
  int num_rows() const { return lp_.num_rows(); }
  int num_columns() const { return static_cast<int>(columns_.size()); }
  const Column& column(int j) const { return columns_[j]; }
  std::span<const Column> columns() const { return columns_; }
  std::span<const double> rhs() const { return lp_.rhs(); }
  bool Contains(const Column& column) const { return index_.contains(column); }

  // Returns the new column index; nullopt for empty or already present
  // columns.
  std::optional<int> AddColumn(Column column);

  // Re-solves warm from the last basis and advances the basis history.
  // Throws std::runtime_error unless the LP solves to optimality.
  const LpSolution& Solve();

  // Objective after tentatively appending `extra` (duplicates skipped). Does
  // not modify the model.
  double TrialObjective(std::span<const Column> extra) const;

  bool solved() const { return solution_.has_value(); }
  const LpSolution& solution() const { return *solution_; }
  const BasisEvents& last_events() const { return events_; }
  // Number of solves (including the current one) in which column j was
  // basic / nonbasic since it was added.
  int iterations_in_basis(int j) const { return in_basis_[j]; }
  int iterations_out_of_basis(int j) const { return out_of_basis_[j]; }
  int solve_count() const { return solve_count_; }

 private:
  std::shared_ptr<const Instance> instance_;
  DenseLp lp_;
  std::vector<Column> columns_;
  std::set<Column> index_;
  std::optional<LpSolution> solution_;
  BasisEvents events_;
  std::vector<int> in_basis_;
  std::vector<int> out_of_basis_;
  int solve_count_ = 0;
};

DenseLp BuildCoveringLp(const Instance& instance, std::span<const Column> columns);

}  // namespace cglab

#endif  // CGLAB_MASTER_H_

// The column-generation loop: solve the master, price, select, add, repeat
// until pricing finds no column with negative reduced cost.

#ifndef CGLAB_ENGINE_H_
#define CGLAB_ENGINE_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cglab/instance.h"
#include "cglab/master.h"
#include "cglab/mdp_state.h"
#include "cglab/pricing.h"
#include "cglab/selection.h"
#include "cglab/simplex.h"

namespace cglab {

struct CgConfig {
  int pool_size = 10;
  int select_count = 5;
  double rc_tolerance = 1e-6;
  int iteration_cap = 1000;
  bool force_optimum = true;
  void Validate() const;
};

enum class CgStatus { kRunning, kConverged, kCapReached };
std::string_view CgStatusName(CgStatus status);

struct PhaseTimes {
  double master = 0.0;
  double pricing = 0.0;
  double selection = 0.0;
  double total() const { return master + pricing + selection; }
};

struct IterationRecord {
  int iteration = 0;  // 1-based master solve index
  double objective = 0.0;
  std::vector<double> duals;
  std::vector<double> pool_reduced_costs;
  std::vector<int> selected;       // pool indices after forcing; empty when final
  std::vector<int> added_columns;  // master column ids created from the selection
  BasisEvents basis_events;
  PhaseTimes seconds;
};

struct CgRun {
  std::vector<IterationRecord> records;
  double objective = 0.0;
  int iterations = 0;  // master solves
  CgStatus status = CgStatus::kRunning;
  double final_best_reduced_cost = 0.0;
  PhaseTimes seconds;
};

// Replaces the worst-ranked chosen index by 0 when 0 is missing; the size is
// unchanged.
Selection ForceOptimum(Selection selection);

struct Transition {
  double previous_objective = 0.0;
  double objective = 0.0;
  std::vector<Column> selected_columns;
};

// Step-wise driver shared by the batch solver and the environment bridge.
class ColumnGeneration {
 public:
  ColumnGeneration(Instance instance, const CgConfig& config);

  bool done() const { return status_ != CgStatus::kRunning; }
  CgStatus status() const { return status_; }
  const CgConfig& config() const { return config_; }
  const RmpModel& master() const { return master_; }
  const CandidatePool& pool() const { return pool_; }
  int iteration() const { return master_.solve_count(); }
  double objective() const { return master_.solution().objective; }
  double initial_objective() const { return initial_objective_; }
  const std::vector<IterationRecord>& records() const { return records_; }

  StateSnapshot Snapshot(bool zero_global = false) const;

  // Applies the forcing rule (multi-column selections only) and adds the
  // chosen pool columns, then re-solves and re-prices.
  Transition Apply(Selection selection, bool single_column = false,
                   double selection_seconds = 0.0);

  CgRun Finish() &&;

 private:
  void SolveAndPrice();

  CgConfig config_;
  RmpModel master_;
  std::optional<Graph> graph_;
  CandidatePool pool_;
  CgStatus status_ = CgStatus::kRunning;
  double initial_objective_ = 0.0;
  std::vector<IterationRecord> records_;
};

CgRun RunColumnGeneration(const Instance& instance, SelectionStrategy& strategy,
                          const CgConfig& config, std::uint64_t seed);

class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every feasible nonzero pattern (CSP) or every maximal independent set (GCP).
std::vector<Column> EnumerateAllColumns(const Instance& instance, int limit = 20000);

// LP optimum of the full master over EnumerateAllColumns.
double SolveFullEnumeration(const Instance& instance, int limit = 20000);

std::string IterationRecordToJson(const IterationRecord& record);

}  // namespace cglab

#endif  // CGLAB_ENGINE_H_

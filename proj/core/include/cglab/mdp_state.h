// The decision-process view of column generation: the bipartite
// constraint/column state with candidate columns, the k-combination action
// table, and the per-transition reward.

#ifndef CGLAB_MDP_STATE_H_
#define CGLAB_MDP_STATE_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cglab/master.h"
#include "cglab/pricing.h"

namespace cglab {

enum ConstraintFeature : int {
  kDualValue = 0,
  kConstraintConnectivity,
  kRightHandSide,
  kSlack,
  kNumConstraintFeatures
};

enum ColumnFeature : int {
  kReducedCost = 0,
  kColumnConnectivity,
  kSolutionValue,
  kWaste,
  kLeftBasis,
  kEnteredBasis,
  kItersInBasis,
  kItersOutOfBasis,
  kIsCandidate,
  kNumColumnFeatures
};

using ConstraintFeatures = std::array<double, kNumConstraintFeatures>;
using ColumnFeatures = std::array<double, kNumColumnFeatures>;

struct StateEdge {
  int column = 0;
  int row = 0;
  double coef = 0.0;
  friend bool operator==(const StateEdge&, const StateEdge&) = default;
};

struct StateMeta {
  int n = 0;  // pool size offered
  int k = 0;  // columns to select
  int t = 0;  // master solves so far, starting at 1
  double obj = 0.0;
  double obj0 = 0.0;
  friend bool operator==(const StateMeta&, const StateMeta&) = default;
};

// Column nodes list the master's columns first, then the candidates in pool
// order. Feature normalization:
//   duals, reduced costs, slack, solution values: raw
//   rhs: divided by the largest rhs
//   connectivity: degree divided by the node count on the opposite side
//   iterations in / out of basis: divided by meta.t
//   waste (CSP only): unused roll fraction, 0 for GCP
// Global features: CSP (L, sum d_i, min l_i / L, max l_i / L); GCP (N, edge
// density).
struct StateSnapshot {
  std::vector<ConstraintFeatures> constraints;
  std::vector<ColumnFeatures> columns;
  std::vector<StateEdge> edges;
  std::vector<int> candidates;
  // Upper triangle over candidate pairs (a < b), row-major: (cosine, Jaccard).
  std::vector<std::array<double, 2>> candidate_distances;
  std::vector<double> global;
  StateMeta meta;

  std::array<double, 2> distance(int a, int b) const;
  friend bool operator==(const StateSnapshot&, const StateSnapshot&) = default;
};

struct StateOptions {
  int pool_size = 10;
  int select_count = 5;
  double obj0 = 0.0;
  bool zero_global = false;
};

StateSnapshot ExtractState(const RmpModel& master, const CandidatePool& pool,
                           const StateOptions& options);

std::string SerializeState(const StateSnapshot& state);
StateSnapshot ParseState(std::string_view text);

double CosineDistance(const Column& a, const Column& b);
double JaccardDistance(const Column& a, const Column& b);

struct RewardParams {
  double alpha = 300.0;
  double beta = 0.02;
  double gamma = 0.9;
  void Validate() const;
};

// Sum of pairwise cosine distances over the selection.
double DiversityBonus(std::span<const Column> selected);

// r = -1 + alpha (prev - new) / obj0 + beta * DiversityBonus(selected).
// Throws std::invalid_argument when obj0 <= 0.
double ComputeReward(double prev_obj, double new_obj, double obj0,
                     std::span<const Column> selected, const RewardParams& params);

// All k-combinations of {0..n-1} in lexicographic order. When forcing, only
// combinations containing index 0 are valid.
class ActionTable {
 public:
  ActionTable(int n, int k, bool force_optimum);

  int size() const { return static_cast<int>(actions_.size()); }
  const std::vector<int>& action(int i) const { return actions_[i]; }
  bool valid(int i) const { return valid_[i]; }
  int valid_count() const;
  // Index of a sorted combination, or -1.
  int Find(std::span<const int> combination) const;

 private:
  std::vector<std::vector<int>> actions_;
  std::vector<bool> valid_;
};

}  // namespace cglab

#endif  // CGLAB_MDP_STATE_H_

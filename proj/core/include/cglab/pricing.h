// Columns and the pricing problems that generate them.
//
// CSP pricing is a bounded integer knapsack over piece counts; GCP pricing is a
// maximum-weight independent set whose solutions are extended to maximal
// independent sets. Both return the k best solutions as a CandidatePool.

#ifndef CGLAB_PRICING_H_
#define CGLAB_PRICING_H_

#include <compare>
#include <span>
#include <vector>

#include "cglab/instance.h"

namespace cglab {

// Values closer than this are ties; ties keep the lexicographically larger
// coefficient vector first.
inline constexpr double kTieTolerance = 1e-9;

struct ColumnEntry {
  int row = 0;
  int coef = 0;
  friend auto operator<=>(const ColumnEntry&, const ColumnEntry&) = default;
};

// Sparse nonnegative integer column with unit cost. Entries are sorted by row
// and hold strictly positive coefficients, so equality is structural.
class Column {
 public:
  Column() = default;
  static Column FromDense(std::span<const int> counts);
  static Column FromSupport(std::span<const int> rows);

  std::span<const ColumnEntry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int support_size() const { return static_cast<int>(entries_.size()); }
  int coef(int row) const;
  std::vector<double> Dense(int num_rows) const;
  bool Intersects(const Column& other) const;

  friend auto operator<=>(const Column&, const Column&) = default;
  friend bool operator==(const Column&, const Column&) = default;

 private:
  std::vector<ColumnEntry> entries_;
};

double ReducedCost(const Column& column, std::span<const double> duals);

struct CandidatePool {
  std::vector<Column> columns;        // best first
  std::vector<double> reduced_costs;  // parallel to columns

  int size() const { return static_cast<int>(columns.size()); }
  bool empty() const { return columns.empty(); }
  double best_reduced_cost() const { return reduced_costs.front(); }
};

struct ScoredPattern {
  std::vector<int> counts;
  double value = 0.0;
};

// The `pool_size` best cutting patterns by dual value sum_i u_i a_i, subject
// to sum_i l_i a_i <= L and 0 <= a_i <= floor(L / l_i). Includes the zero
// pattern when it ranks.
std::vector<ScoredPattern> KBestPatterns(const CspInstance& instance,
                                         std::span<const double> duals, int pool_size);

CandidatePool SolveCspPricing(const CspInstance& instance, std::span<const double> duals,
                              int pool_size);

class Graph {
 public:
  explicit Graph(const GcpInstance& instance);

  int size() const { return n_; }
  bool adjacent(int u, int v) const { return adjacency_[u * n_ + v] != 0; }
  std::span<const int> neighbors(int v) const { return neighbors_[v]; }
  bool IsIndependent(std::span<const int> nodes) const;
  bool IsMaximalIndependent(std::span<const int> nodes) const;
  // Adds every node compatible with the set, in ascending index order.
  std::vector<int> ExtendToMaximal(std::vector<int> nodes) const;

 private:
  int n_;
  std::vector<char> adjacency_;
  std::vector<std::vector<int>> neighbors_;
};

struct ScoredSet {
  std::vector<int> nodes;  // ascending
  double value = 0.0;
};

// The `pool_size` best independent sets (maximal or not) by weight sum.
std::vector<ScoredSet> KBestIndependentSets(const Graph& graph,
                                            std::span<const double> weights, int pool_size);

CandidatePool SolveGcpPricing(const GcpInstance& instance, std::span<const double> duals,
                              int pool_size);
CandidatePool SolveGcpPricing(const Graph& graph, std::span<const double> duals,
                              int pool_size);

}  // namespace cglab

#endif  // CGLAB_PRICING_H_

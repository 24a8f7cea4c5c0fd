#include "cglab/pricing.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cglab {

Column Column::FromDense(std::span<const int> counts) {
  Column column;
  for (int row = 0; row < static_cast<int>(counts.size()); ++row) {
    if (counts[row] < 0) throw std::invalid_argument("Column: negative coefficient");
    if (counts[row] > 0) column.entries_.push_back({row, counts[row]});
  }
  return column;
}

Column Column::FromSupport(std::span<const int> rows) {
  std::vector<int> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Column column;
  for (int row : sorted) column.entries_.push_back({row, 1});
  return column;
}

int Column::coef(int row) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), row,
                             [](const ColumnEntry& e, int r) { return e.row < r; });
  return it != entries_.end() && it->row == row ? it->coef : 0;
}

std::vector<double> Column::Dense(int num_rows) const {
  std::vector<double> dense(num_rows, 0.0);
  for (const ColumnEntry& e : entries_) dense[e.row] = e.coef;
  return dense;
}

bool Column::Intersects(const Column& other) const {
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->row == b->row) return true;
    if (a->row < b->row) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

double ReducedCost(const Column& column, std::span<const double> duals) {
  double dual_sum = 0.0;
  for (const ColumnEntry& e : column.entries()) dual_sum += duals[e.row] * e.coef;
  return 1.0 - dual_sum;
}

namespace {

// Ranked list of the k best solutions seen so far. A newcomer goes after every
// entry it ties with, so with lexicographically decreasing discovery order the
// earlier (larger) vector wins ties.
template <typename Solution>
class KBestList {
 public:
  explicit KBestList(int k) : k_(k) {}

  bool full() const { return static_cast<int>(items_.size()) >= k_; }
  double threshold() const { return items_.back().value; }

  // True when nothing scoring at most `bound` can enter the list.
  bool Dominates(double bound) const { return full() && bound <= threshold() + kTieTolerance; }

  void Offer(Solution solution) {
    auto pos = std::find_if(items_.begin(), items_.end(), [&](const Solution& s) {
      return s.value < solution.value - kTieTolerance;
    });
    items_.insert(pos, std::move(solution));
    if (static_cast<int>(items_.size()) > k_) items_.pop_back();
  }

  std::vector<Solution> Take() { return std::move(items_); }

 private:
  int k_;
  std::vector<Solution> items_;
};

// Branch and bound over piece counts in row order, larger counts first, so
// complete patterns are visited in lexicographically decreasing order.
class KnapsackSearch {
 public:
  KnapsackSearch(const CspInstance& instance, std::span<const double> duals, int k)
      : lengths_(instance.orders.size()),
        upper_(instance.orders.size()),
        duals_(duals.begin(), duals.end()),
        best_(k),
        counts_(instance.orders.size(), 0) {
    const int m = instance.num_rows();
    for (int i = 0; i < m; ++i) {
      lengths_[i] = instance.orders[i].length;
      upper_[i] = instance.roll_length / lengths_[i];
      if (duals_[i] > 0.0) by_efficiency_.push_back(i);
    }
    std::stable_sort(by_efficiency_.begin(), by_efficiency_.end(), [&](int a, int b) {
      return duals_[a] * lengths_[b] > duals_[b] * lengths_[a];
    });
    capacity_ = instance.roll_length;
  }

  std::vector<ScoredPattern> Run() {
    Search(0, capacity_, 0.0);
    return best_.Take();
  }

 private:
  // Fractional bounded-knapsack relaxation over rows >= first.
  double Bound(int first, int capacity, double value) const {
    double room = capacity;
    for (int i : by_efficiency_) {
      if (i < first) continue;
      if (room <= 0.0) break;
      const double take = std::min<double>(upper_[i], room / lengths_[i]);
      value += take * duals_[i];
      room -= take * lengths_[i];
    }
    return value;
  }

  void Search(int row, int capacity, double value) {
    if (best_.Dominates(Bound(row, capacity, value))) return;
    if (row == static_cast<int>(lengths_.size())) {
      best_.Offer({counts_, value});
      return;
    }
    const int max_count = std::min(upper_[row], capacity / lengths_[row]);
    for (int c = max_count; c >= 0; --c) {
      counts_[row] = c;
      Search(row + 1, capacity - c * lengths_[row], value + c * duals_[row]);
    }
    counts_[row] = 0;
  }

  std::vector<int> lengths_;
  std::vector<int> upper_;
  std::vector<double> duals_;
  std::vector<int> by_efficiency_;
  int capacity_ = 0;
  KBestList<ScoredPattern> best_;
  std::vector<int> counts_;
};

// Branch and bound over node inclusion in index order, include branch first,
// so indicator vectors are visited in lexicographically decreasing order.
class IndependentSetSearch {
 public:
  IndependentSetSearch(const Graph& graph, std::span<const double> weights, int k)
      : graph_(graph), weights_(weights), best_(k), blocked_(graph.size(), 0) {}

  std::vector<ScoredSet> Run() {
    Search(0, 0.0);
    return best_.Take();
  }

 private:
  double Bound(int first, double value) const {
    for (int v = first; v < graph_.size(); ++v) {
      if (blocked_[v] == 0 && weights_[v] > 0.0) value += weights_[v];
    }
    return value;
  }

  void Search(int node, double value) {
    if (best_.Dominates(Bound(node, value))) return;
    if (node == graph_.size()) {
      best_.Offer({chosen_, value});
      return;
    }
    if (blocked_[node] == 0) {
      chosen_.push_back(node);
      for (int u : graph_.neighbors(node)) ++blocked_[u];
      Search(node + 1, value + weights_[node]);
      for (int u : graph_.neighbors(node)) --blocked_[u];
      chosen_.pop_back();
    }
    Search(node + 1, value);
  }

  const Graph& graph_;
  std::span<const double> weights_;
  KBestList<ScoredSet> best_;
  std::vector<int> blocked_;
  std::vector<int> chosen_;
};

void CheckPoolArgs(int num_rows, std::span<const double> duals, int pool_size) {
  if (pool_size < 1) throw std::invalid_argument("pricing: pool_size must be >= 1");
  if (static_cast<int>(duals.size()) != num_rows) {
    throw std::invalid_argument("pricing: dual vector has wrong length");
  }
}

}  // namespace

std::vector<ScoredPattern> KBestPatterns(const CspInstance& instance,
                                         std::span<const double> duals, int pool_size) {
  CheckPoolArgs(instance.num_rows(), duals, pool_size);
  return KnapsackSearch(instance, duals, pool_size).Run();
}

CandidatePool SolveCspPricing(const CspInstance& instance, std::span<const double> duals,
                              int pool_size) {
  CandidatePool pool;
  for (ScoredPattern& pattern : KBestPatterns(instance, duals, pool_size)) {
    pool.columns.push_back(Column::FromDense(pattern.counts));
    pool.reduced_costs.push_back(1.0 - pattern.value);
  }
  return pool;
}

Graph::Graph(const GcpInstance& instance)
    : n_(instance.node_count),
      adjacency_(static_cast<std::size_t>(n_) * n_, 0),
      neighbors_(n_) {
  for (auto [u, v] : instance.edges) {
    if (adjacency_[u * n_ + v]) continue;
    adjacency_[u * n_ + v] = adjacency_[v * n_ + u] = 1;
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
}

bool Graph::IsIndependent(std::span<const int> nodes) const {
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (nodes[a] == nodes[b] || adjacent(nodes[a], nodes[b])) return false;
    }
  }
  return true;
}

bool Graph::IsMaximalIndependent(std::span<const int> nodes) const {
  if (!IsIndependent(nodes)) return false;
  std::vector<char> in_set(n_, 0);
  for (int v : nodes) in_set[v] = 1;
  for (int v = 0; v < n_; ++v) {
    if (in_set[v]) continue;
    const bool addable = std::none_of(nodes.begin(), nodes.end(),
                                      [&](int u) { return adjacent(u, v); });
    if (addable) return false;
  }
  return true;
}

std::vector<int> Graph::ExtendToMaximal(std::vector<int> nodes) const {
  std::vector<char> blocked(n_, 0);
  for (int v : nodes) {
    blocked[v] = 1;
    for (int u : neighbors_[v]) blocked[u] = 1;
  }
  for (int v = 0; v < n_; ++v) {
    if (blocked[v]) continue;
    nodes.push_back(v);
    blocked[v] = 1;
    for (int u : neighbors_[v]) blocked[u] = 1;
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

std::vector<ScoredSet> KBestIndependentSets(const Graph& graph,
                                            std::span<const double> weights, int pool_size) {
  CheckPoolArgs(graph.size(), weights, pool_size);
  return IndependentSetSearch(graph, weights, pool_size).Run();
}

CandidatePool SolveGcpPricing(const Graph& graph, std::span<const double> duals,
                              int pool_size) {
  std::vector<Column> columns;
  std::vector<double> costs;
  std::set<Column> seen;
  for (ScoredSet& set : KBestIndependentSets(graph, duals, pool_size)) {
    Column column = Column::FromSupport(graph.ExtendToMaximal(std::move(set.nodes)));
    if (!seen.insert(column).second) continue;
    costs.push_back(ReducedCost(column, duals));
    columns.push_back(std::move(column));
  }
  std::vector<int> order(columns.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return costs[a] < costs[b]; });
  CandidatePool pool;
  for (int i : order) {
    pool.columns.push_back(std::move(columns[i]));
    pool.reduced_costs.push_back(costs[i]);
  }
  return pool;
}

CandidatePool SolveGcpPricing(const GcpInstance& instance, std::span<const double> duals,
                              int pool_size) {
  return SolveGcpPricing(Graph(instance), duals, pool_size);
}

}  // namespace cglab

#include "cglab/mdp_state.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cglab {

namespace {

using ordered_json = nlohmann::ordered_json;

double Waste(const Instance& instance, const Column& column) {
  const auto* csp = std::get_if<CspInstance>(&instance);
  if (csp == nullptr) return 0.0;
  int used = 0;
  for (const ColumnEntry& e : column.entries()) used += csp->orders[e.row].length * e.coef;
  return double(csp->roll_length - used) / csp->roll_length;
}

std::vector<double> GlobalFeatures(const Instance& instance) {
  if (const auto* csp = std::get_if<CspInstance>(&instance)) {
    int total_demand = 0;
    int min_len = csp->roll_length;
    int max_len = 0;
    for (const Order& o : csp->orders) {
      total_demand += o.demand;
      min_len = std::min(min_len, o.length);
      max_len = std::max(max_len, o.length);
    }
    const double L = csp->roll_length;
    return {L, double(total_demand), min_len / L, max_len / L};
  }
  const auto& gcp = std::get<GcpInstance>(instance);
  const double pairs = 0.5 * gcp.node_count * (gcp.node_count - 1);
  return {double(gcp.node_count), pairs > 0 ? gcp.edges.size() / pairs : 0.0};
}

bool SortedContains(const std::vector<int>& sorted, int value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

template <typename T>
T Get(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("state: missing '") + key + "'");
  return it->get<T>();
}

}  // namespace

std::array<double, 2> StateSnapshot::distance(int a, int b) const {
  if (a == b) return {0.0, 0.0};
  if (a > b) std::swap(a, b);
  const int n = static_cast<int>(candidates.size());
  // Offset of row a in the packed upper triangle.
  const int offset = a * n - a * (a + 1) / 2;
  return candidate_distances[offset + (b - a - 1)];
}

StateSnapshot ExtractState(const RmpModel& master, const CandidatePool& pool,
                           const StateOptions& options) {
  if (!master.solved()) throw std::logic_error("ExtractState: master not solved");
  const LpSolution& solution = master.solution();
  const Instance& instance = master.instance();
  const int m = master.num_rows();
  const int existing = master.num_columns();
  const int total_columns = existing + pool.size();
  const int t = master.solve_count();

  StateSnapshot state;
  state.meta = {options.pool_size, options.select_count, t, solution.objective, options.obj0};

  std::vector<int> row_degree(m, 0);
  auto add_edges = [&](int node, const Column& column) {
    for (const ColumnEntry& e : column.entries()) {
      state.edges.push_back({node, e.row, double(e.coef)});
      ++row_degree[e.row];
    }
  };
  for (int j = 0; j < existing; ++j) add_edges(j, master.column(j));
  for (int c = 0; c < pool.size(); ++c) add_edges(existing + c, pool.columns[c]);

  std::vector<double> lhs(m, 0.0);
  for (int j = 0; j < existing; ++j) {
    for (const ColumnEntry& e : master.column(j).entries()) {
      lhs[e.row] += e.coef * solution.primal[j];
    }
  }
  double max_rhs = 0.0;
  for (double b : master.rhs()) max_rhs = std::max(max_rhs, b);
  for (int i = 0; i < m; ++i) {
    ConstraintFeatures f{};
    f[kDualValue] = solution.duals[i];
    f[kConstraintConnectivity] = total_columns > 0 ? double(row_degree[i]) / total_columns : 0.0;
    f[kRightHandSide] = max_rhs > 0 ? master.rhs()[i] / max_rhs : 0.0;
    f[kSlack] = lhs[i] - master.rhs()[i];
    state.constraints.push_back(f);
  }

  const BasisEvents& events = master.last_events();
  for (int j = 0; j < existing; ++j) {
    const Column& column = master.column(j);
    ColumnFeatures f{};
    f[kReducedCost] = ReducedCost(column, solution.duals);
    f[kColumnConnectivity] = double(column.support_size()) / m;
    f[kSolutionValue] = solution.primal[j];
    f[kWaste] = Waste(instance, column);
    f[kLeftBasis] = SortedContains(events.left, j) ? 1.0 : 0.0;
    f[kEnteredBasis] = SortedContains(events.entered, j) ? 1.0 : 0.0;
    f[kItersInBasis] = double(master.iterations_in_basis(j)) / t;
    f[kItersOutOfBasis] = double(master.iterations_out_of_basis(j)) / t;
    f[kIsCandidate] = 0.0;
    state.columns.push_back(f);
  }
  for (int c = 0; c < pool.size(); ++c) {
    ColumnFeatures f{};
    f[kReducedCost] = pool.reduced_costs[c];
    f[kColumnConnectivity] = double(pool.columns[c].support_size()) / m;
    f[kWaste] = Waste(instance, pool.columns[c]);
    f[kIsCandidate] = 1.0;
    state.columns.push_back(f);
    state.candidates.push_back(existing + c);
  }
  for (int a = 0; a < pool.size(); ++a) {
    for (int b = a + 1; b < pool.size(); ++b) {
      state.candidate_distances.push_back({CosineDistance(pool.columns[a], pool.columns[b]),
                                           JaccardDistance(pool.columns[a], pool.columns[b])});
    }
  }
  state.global = GlobalFeatures(instance);
  if (options.zero_global) std::fill(state.global.begin(), state.global.end(), 0.0);
  return state;
}

std::string SerializeState(const StateSnapshot& state) {
  ordered_json out;
  out["constraints"] = state.constraints;
  out["columns"] = state.columns;
  ordered_json edges = ordered_json::array();
  for (const StateEdge& e : state.edges) edges.push_back({e.column, e.row, e.coef});
  out["edges"] = std::move(edges);
  out["candidates"] = state.candidates;
  out["cand_dist"] = state.candidate_distances;
  out["global"] = state.global;
  out["meta"] = {{"n", state.meta.n},
                 {"k", state.meta.k},
                 {"t", state.meta.t},
                 {"obj", state.meta.obj},
                 {"obj0", state.meta.obj0}};
  return out.dump();
}

StateSnapshot ParseState(std::string_view text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  StateSnapshot state;
  state.constraints = Get<std::vector<ConstraintFeatures>>(doc, "constraints");
  state.columns = Get<std::vector<ColumnFeatures>>(doc, "columns");
  for (const auto& e : Get<nlohmann::json>(doc, "edges")) {
    state.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  }
  state.candidates = Get<std::vector<int>>(doc, "candidates");
  state.candidate_distances = Get<std::vector<std::array<double, 2>>>(doc, "cand_dist");
  state.global = Get<std::vector<double>>(doc, "global");
  const auto meta = Get<nlohmann::json>(doc, "meta");
  state.meta = {Get<int>(meta, "n"), Get<int>(meta, "k"), Get<int>(meta, "t"),
                Get<double>(meta, "obj"), Get<double>(meta, "obj0")};
  return state;
}

double CosineDistance(const Column& a, const Column& b) {
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const ColumnEntry& e : a.entries()) {
    norm_a += double(e.coef) * e.coef;
    dot += double(e.coef) * b.coef(e.row);
  }
  for (const ColumnEntry& e : b.entries()) norm_b += double(e.coef) * e.coef;
  if (norm_a == 0.0 || norm_b == 0.0) return 1.0;
  const double cosine = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return std::clamp(1.0 - cosine, 0.0, 1.0);
}

double JaccardDistance(const Column& a, const Column& b) {
  int common = 0;
  for (const ColumnEntry& e : a.entries()) common += b.coef(e.row) > 0 ? 1 : 0;
  const int united = a.support_size() + b.support_size() - common;
  if (united == 0) return 0.0;
  return 1.0 - double(common) / united;
}

void RewardParams::Validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw std::invalid_argument("reward: alpha and beta must be >= 0");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("reward: gamma in (0, 1]");
}

double DiversityBonus(std::span<const Column> selected) {
  double bonus = 0.0;
  for (std::size_t a = 0; a < selected.size(); ++a) {
    for (std::size_t b = a + 1; b < selected.size(); ++b) {
      bonus += CosineDistance(selected[a], selected[b]);
    }
  }
  return bonus;
}

double ComputeReward(double prev_obj, double new_obj, double obj0,
                     std::span<const Column> selected, const RewardParams& params) {
  if (!(obj0 > 0.0)) throw std::invalid_argument("reward: obj0 must be positive");
  double reward = -1.0;
  if (params.alpha != 0.0) reward += params.alpha * (prev_obj - new_obj) / obj0;
  if (params.beta != 0.0) reward += params.beta * DiversityBonus(selected);
  return reward;
}

ActionTable::ActionTable(int n, int k, bool force_optimum) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("ActionTable: need 1 <= k <= n");
  std::vector<int> combo(k);
  for (int i = 0; i < k; ++i) combo[i] = i;
  while (true) {
    actions_.push_back(combo);
    valid_.push_back(!force_optimum || combo[0] == 0);
    int i = k - 1;
    while (i >= 0 && combo[i] == n - k + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
}

int ActionTable::valid_count() const {
  return static_cast<int>(std::count(valid_.begin(), valid_.end(), true));
}

int ActionTable::Find(std::span<const int> combination) const {
  const std::vector<int> key(combination.begin(), combination.end());
  auto it = std::lower_bound(actions_.begin(), actions_.end(), key);
  if (it == actions_.end() || *it != key) return -1;
  return static_cast<int>(it - actions_.begin());
}

}  // namespace cglab

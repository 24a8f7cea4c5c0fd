// Reference implementations used only by tests. None of them share code with
// the library: LPs are solved in exact rational arithmetic, pricing problems
// by exhaustive enumeration.

#ifndef CGLAB_TESTS_ORACLES_H_
#define CGLAB_TESTS_ORACLES_H_

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

struct CoveringLp {
  // min sum_j c_j x_j  s.t.  sum_j a_ij x_j >= b_i,  x >= 0.  b_i >= 0.
  std::vector<std::vector<Rational>> a;  // rows x columns
  std::vector<Rational> b;
  std::vector<Rational> c;
};

struct TableauResult {
  bool feasible = false;
  bool bounded = true;
  Rational objective;
  std::vector<Rational> x;
  std::vector<Rational> duals;
};

// Two-phase full-tableau simplex with Bland's rule throughout.
TableauResult SolveTableau(const CoveringLp& lp);

// Minimum over every basic feasible solution, found by trying every choice
// of m basic variables among the structural and surplus columns. Only for
// tiny LPs.
std::optional<Rational> SolveByBasisEnumeration(const CoveringLp& lp);

struct Csp {
  int roll_length = 0;
  std::vector<int> lengths;
  std::vector<int> demands;
};

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  bool adjacent(int u, int v) const;
};

// Every pattern a with sum l_i a_i <= L, including the zero pattern.
std::vector<std::vector<int>> AllPatterns(const Csp& csp);

// Every independent set as a sorted node list, including the empty set.
std::vector<std::vector<int>> AllIndependentSets(const Graph& graph);
std::vector<std::vector<int>> AllMaximalIndependentSets(const Graph& graph);

int IndependenceNumber(const Graph& graph);

// Value sum_i w_i a_i of every column, sorted descending.
std::vector<double> ValuesDescending(const std::vector<std::vector<int>>& dense_columns,
                                     const std::vector<double>& weights);
std::vector<std::vector<int>> SupportsToDense(const std::vector<std::vector<int>>& supports,
                                              int n);

// Full master LP over every nonzero pattern / maximal independent set.
Rational FullMasterOptimum(const Csp& csp);
Rational FullMasterOptimum(const Graph& graph);

Csp RandomTinyCsp(std::mt19937_64& rng, int max_length = 20, int max_orders = 6);
Graph RandomTinyGraph(std::mt19937_64& rng, int max_nodes = 12);

double ToDouble(const Rational& value);

}  // namespace oracle

#endif  // CGLAB_TESTS_ORACLES_H_

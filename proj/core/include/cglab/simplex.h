// Revised primal simplex for small dense LPs of the form
//
//   min  c^T x   s.t.  A x (>= | =) b,  x >= 0,
//
// with a column-major sparse A. The basis inverse is kept dense and updated in
// product form, with periodic refactorization. Solutions carry duals and the
// final basis, which can be fed back as a warm start after columns have been
// appended.

#ifndef CGLAB_SIMPLEX_H_
#define CGLAB_SIMPLEX_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cglab {

inline constexpr double kFeasibilityTolerance = 1e-9;

enum class RowSense { kGreaterEqual, kEqual };

struct SparseEntry {
  int row = 0;
  double value = 0.0;
};

class DenseLp {
 public:
  DenseLp() = default;
  DenseLp(std::vector<double> rhs, std::vector<RowSense> senses);

  // Entries must reference existing rows; at least one entry must be nonzero.
  // Returns the new column index.
  int AddColumn(double cost, std::vector<SparseEntry> entries);

  int num_rows() const { return static_cast<int>(rhs_.size()); }
  int num_columns() const { return static_cast<int>(costs_.size()); }
  double cost(int col) const { return costs_[col]; }
  std::span<const SparseEntry> column(int col) const { return columns_[col]; }
  double rhs(int row) const { return rhs_[row]; }
  RowSense sense(int row) const { return senses_[row]; }
  std::span<const double> rhs() const { return rhs_; }

 private:
  std::vector<double> rhs_;
  std::vector<RowSense> senses_;
  std::vector<double> costs_;
  std::vector<std::vector<SparseEntry>> columns_;
};

// A basic variable: a structural column, the surplus of a >= row, or the
// artificial of a row that could not be covered otherwise.
struct BasicVariable {
  enum class Kind { kColumn, kSurplus, kArtificial };
  Kind kind = Kind::kColumn;
  int index = 0;
  friend bool operator==(const BasicVariable&, const BasicVariable&) = default;
};

// One basic variable per row, in basis-row order.
using Basis = std::vector<BasicVariable>;

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  std::vector<double> primal;  // per structural column
  std::vector<double> duals;   // per row
  std::vector<int> basic_columns;  // sorted structural indices in the basis
  Basis basis;
  int iterations = 0;
  bool warm_started = false;
};

struct SimplexOptions {
  double optimality_tolerance = kFeasibilityTolerance;
  double feasibility_tolerance = kFeasibilityTolerance;
  double pivot_tolerance = 1e-9;
  int refactorization_period = 64;
  // 0 selects 100 * (rows + cols) + 1000.
  int iteration_limit = 0;
};

LpSolution Solve(const DenseLp& lp, const std::optional<Basis>& warm_basis = std::nullopt,
                 const SimplexOptions& options = {});

struct BasisEvents {
  std::vector<int> entered;
  std::vector<int> left;
};

// Columns absent from `prev` (appended later) count as nonbasic there.
BasisEvents ComputeBasisEvents(const LpSolution& prev, const LpSolution& cur);

}  // namespace cglab

#endif  // CGLAB_SIMPLEX_H_

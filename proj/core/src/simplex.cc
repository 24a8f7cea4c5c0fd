#include "cglab/simplex.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace cglab {

DenseLp::DenseLp(std::vector<double> rhs, std::vector<RowSense> senses)
    : rhs_(std::move(rhs)), senses_(std::move(senses)) {
  if (rhs_.size() != senses_.size()) {
    throw std::invalid_argument("DenseLp: rhs and senses differ in length");
  }
  for (double b : rhs_) {
    if (!std::isfinite(b)) throw std::invalid_argument("DenseLp: non-finite rhs");
  }
}

int DenseLp::AddColumn(double cost, std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.row < b.row; });
  bool any_nonzero = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].row < 0 || entries[i].row >= num_rows()) {
      throw std::invalid_argument("DenseLp: entry row out of range");
    }
    if (i > 0 && entries[i].row == entries[i - 1].row) {
      throw std::invalid_argument("DenseLp: duplicate row in column");
    }
    any_nonzero |= entries[i].value != 0.0;
  }
  if (!any_nonzero) throw std::invalid_argument("DenseLp: empty column");
  costs_.push_back(cost);
  columns_.push_back(std::move(entries));
  return num_columns() - 1;
}

std::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

namespace {

// Variables are numbered: [0, n) structural, [n, n + m) surplus of row i,
// [n + m, n + 2m) artificial of row i. Bland's rule uses this order.
class RevisedSimplex {
 public:
  RevisedSimplex(const DenseLp& lp, const SimplexOptions& options)
      : lp_(lp),
        options_(options),
        m_(lp.num_rows()),
        n_(lp.num_columns()),
        is_basic_(n_ + 2 * m_, false),
        artificial_sign_(m_, 1.0) {
    iteration_limit_ = options.iteration_limit > 0 ? options.iteration_limit
                                                   : 100 * (m_ + n_) + 1000;
    bland_threshold_ = 5 * (m_ + n_);
    for (int i = 0; i < m_; ++i) {
      if (lp_.rhs(i) < 0.0) artificial_sign_[i] = -1.0;
    }
  }

  LpSolution Run(const std::optional<Basis>& warm) {
    LpSolution solution;
    bool started = false;
    if (warm && TryWarmStart(*warm)) {
      started = true;
      solution.warm_started = true;
    }
    if (!started) {
      ColdStart();
      if (NeedsPhaseOne()) {
        const LpStatus status = Optimize(/*phase_one=*/true);
        if (status == LpStatus::kIterationLimit) return Finish(status, std::move(solution));
        if (ArtificialInfeasibility() > options_.feasibility_tolerance * (1.0 + MaxAbsRhs())) {
          return Finish(LpStatus::kInfeasible, std::move(solution));
        }
        DriveOutArtificials();
      }
    }
    const LpStatus status = Optimize(/*phase_one=*/false);
    return Finish(status, std::move(solution));
  }

 private:
  bool IsStructural(int var) const { return var < n_; }
  bool IsSurplus(int var) const { return var >= n_ && var < n_ + m_; }
  bool IsArtificial(int var) const { return var >= n_ + m_; }

  bool Eligible(int var) const {
    if (IsArtificial(var)) return false;
    if (IsSurplus(var)) return lp_.sense(var - n_) == RowSense::kGreaterEqual;
    return true;
  }

  double Cost(int var, bool phase_one) const {
    if (phase_one) return IsArtificial(var) ? 1.0 : 0.0;
    return IsStructural(var) ? lp_.cost(var) : 0.0;
  }

  template <typename Fn>
  void ForEachEntry(int var, Fn&& fn) const {
    if (IsStructural(var)) {
      for (const SparseEntry& e : lp_.column(var)) fn(e.row, e.value);
    } else if (IsSurplus(var)) {
      fn(var - n_, -1.0);
    } else {
      const int row = var - n_ - m_;
      fn(row, artificial_sign_[row]);
    }
  }

  double Dot(const Eigen::RowVectorXd& y, int var) const {
    double sum = 0.0;
    ForEachEntry(var, [&](int row, double value) { sum += y[row] * value; });
    return sum;
  }

  Eigen::VectorXd FTran(int var) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
    ForEachEntry(var, [&](int row, double value) { w.noalias() += value * binv_.col(row); });
    return w;
  }

  void SetBasis(std::vector<int> basis) {
    std::fill(is_basic_.begin(), is_basic_.end(), false);
    basis_ = std::move(basis);
    for (int var : basis_) is_basic_[var] = true;
  }

  // Returns false when the basis matrix is singular.
  bool Refactor() {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
      ForEachEntry(basis_[r], [&](int row, double value) { b(row, r) = value; });
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    const Eigen::Map<const Eigen::VectorXd> rhs(lp_.rhs().data(), m_);
    x_basic_ = binv_ * rhs;
    pivots_since_refactor_ = 0;
    return true;
  }

  bool TryWarmStart(const Basis& warm) {
    if (static_cast<int>(warm.size()) != m_) return false;
    std::vector<int> basis;
    basis.reserve(m_);
    std::vector<bool> seen(n_ + 2 * m_, false);
    for (const BasicVariable& bv : warm) {
      int var = -1;
      switch (bv.kind) {
        case BasicVariable::Kind::kColumn:
          if (bv.index < 0 || bv.index >= n_) return false;
          var = bv.index;
          break;
        case BasicVariable::Kind::kSurplus:
          if (bv.index < 0 || bv.index >= m_) return false;
          if (lp_.sense(bv.index) != RowSense::kGreaterEqual) return false;
          var = n_ + bv.index;
          break;
        case BasicVariable::Kind::kArtificial:
          if (bv.index < 0 || bv.index >= m_) return false;
          var = n_ + m_ + bv.index;
          break;
      }
      if (seen[var]) return false;
      seen[var] = true;
      basis.push_back(var);
    }
    SetBasis(std::move(basis));
    if (!Refactor()) return false;
    for (int r = 0; r < m_; ++r) {
      if (x_basic_[r] < -options_.feasibility_tolerance) return false;
      if (IsArtificial(basis_[r]) && x_basic_[r] > options_.feasibility_tolerance) {
        return false;
      }
    }
    return true;
  }

  void ColdStart() {
    std::vector<int> basis(m_);
    for (int i = 0; i < m_; ++i) {
      const bool surplus_feasible =
          lp_.sense(i) == RowSense::kGreaterEqual && lp_.rhs(i) <= 0.0;
      basis[i] = surplus_feasible ? n_ + i : n_ + m_ + i;
    }
    SetBasis(std::move(basis));
    // Diagonal basis of +-1 entries.
    binv_ = Eigen::MatrixXd::Zero(m_, m_);
    x_basic_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      double diag = 0.0;
      ForEachEntry(basis_[i], [&](int, double value) { diag = value; });
      binv_(i, i) = 1.0 / diag;
      x_basic_[i] = lp_.rhs(i) / diag;
    }
  }

  bool NeedsPhaseOne() const {
    return std::any_of(basis_.begin(), basis_.end(),
                       [this](int var) { return IsArtificial(var); });
  }

  double ArtificialInfeasibility() const {
    double total = 0.0;
    for (int r = 0; r < m_; ++r) {
      if (IsArtificial(basis_[r])) total += std::max(0.0, x_basic_[r]);
    }
    return total;
  }

  double MaxAbsRhs() const {
    double best = 0.0;
    for (double b : lp_.rhs()) best = std::max(best, std::abs(b));
    return best;
  }

  void Pivot(int row, int entering, const Eigen::VectorXd& w) {
    const double theta = x_basic_[row] / w[row];
    x_basic_.noalias() -= theta * w;
    x_basic_[row] = theta;
    const Eigen::RowVectorXd pivot_row = binv_.row(row) / w[row];
    binv_.noalias() -= w * pivot_row;
    binv_.row(row) = pivot_row;
    is_basic_[basis_[row]] = false;
    basis_[row] = entering;
    is_basic_[entering] = true;
    ++iterations_;
    if (++pivots_since_refactor_ >= options_.refactorization_period) {
      // A singular refactorization here would mean the updates drifted; the
      // product-form inverse is kept in that case.
      const Eigen::MatrixXd saved_binv = binv_;
      const Eigen::VectorXd saved_x = x_basic_;
      if (!Refactor()) {
        binv_ = saved_binv;
        x_basic_ = saved_x;
      }
    }
  }

  // Primal simplex on the current basis. In phase two basic artificials are
  // fixed at zero: any pivot column with a nonzero entry on their row forces
  // them out at ratio zero.
  LpStatus Optimize(bool phase_one) {
    bool bland = false;
    int degenerate_pivots = 0;
    const int total_vars = n_ + 2 * m_;
    while (true) {
      if (iterations_ >= iteration_limit_) return LpStatus::kIterationLimit;
      Eigen::RowVectorXd cb(m_);
      for (int r = 0; r < m_; ++r) cb[r] = Cost(basis_[r], phase_one);
      const Eigen::RowVectorXd y = cb * binv_;

      int entering = -1;
      double best_d = -options_.optimality_tolerance;
      for (int var = 0; var < total_vars; ++var) {
        if (is_basic_[var] || !Eligible(var)) continue;
        const double d = Cost(var, phase_one) - Dot(y, var);
        if (d < best_d) {
          entering = var;
          best_d = d;
          if (bland) break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;

      const Eigen::VectorXd w = FTran(entering);
      int leaving_row = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        double ratio;
        if (!phase_one && IsArtificial(basis_[r])) {
          if (std::abs(w[r]) <= options_.pivot_tolerance) continue;
          ratio = 0.0;
        } else {
          if (w[r] <= options_.pivot_tolerance) continue;
          ratio = std::max(0.0, x_basic_[r]) / w[r];
        }
        if (ratio < best_ratio) {
          best_ratio = ratio;
          leaving_row = r;
        } else if (bland && ratio == best_ratio && basis_[r] < basis_[leaving_row]) {
          leaving_row = r;
        }
      }
      if (leaving_row < 0) return LpStatus::kUnbounded;
      if (best_ratio <= options_.feasibility_tolerance) {
        if (++degenerate_pivots > bland_threshold_) bland = true;
      }
      // Keeps x >= 0 exactly on the leaving row when the ratio was clamped.
      if (x_basic_[leaving_row] < 0.0) x_basic_[leaving_row] = 0.0;
      if (!phase_one && IsArtificial(basis_[leaving_row])) x_basic_[leaving_row] = 0.0;
      Pivot(leaving_row, entering, w);
    }
  }

  void DriveOutArtificials() {
    for (int r = 0; r < m_; ++r) {
      if (!IsArtificial(basis_[r])) continue;
      const Eigen::RowVectorXd rho = binv_.row(r);
      for (int var = 0; var < n_ + m_; ++var) {
        if (is_basic_[var] || !Eligible(var)) continue;
        if (std::abs(Dot(rho, var)) > 1e-7) {
          x_basic_[r] = 0.0;
          Pivot(r, var, FTran(var));
          break;
        }
      }
      // Otherwise the row is redundant and its artificial stays basic at zero.
    }
  }

  LpSolution Finish(LpStatus status, LpSolution solution) {
    solution.status = status;
    solution.iterations = iterations_;
    solution.primal.assign(n_, 0.0);
    solution.duals.assign(m_, 0.0);
    solution.basis.clear();
    solution.basic_columns.clear();
    for (int r = 0; r < m_; ++r) {
      const int var = basis_[r];
      if (IsStructural(var)) {
        double value = x_basic_[r];
        if (value < 0.0 && value > -options_.feasibility_tolerance) value = 0.0;
        solution.primal[var] = value;
        solution.basic_columns.push_back(var);
        solution.basis.push_back({BasicVariable::Kind::kColumn, var});
      } else if (IsSurplus(var)) {
        solution.basis.push_back({BasicVariable::Kind::kSurplus, var - n_});
      } else {
        solution.basis.push_back({BasicVariable::Kind::kArtificial, var - n_ - m_});
      }
    }
    std::sort(solution.basic_columns.begin(), solution.basic_columns.end());
    Eigen::RowVectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = Cost(basis_[r], /*phase_one=*/false);
    const Eigen::RowVectorXd y = cb * binv_;
    for (int i = 0; i < m_; ++i) solution.duals[i] = y[i];
    double objective = 0.0;
    for (int j = 0; j < n_; ++j) objective += lp_.cost(j) * solution.primal[j];
    solution.objective = objective;
    return solution;
  }

  const DenseLp& lp_;
  SimplexOptions options_;
  int m_;
  int n_;
  std::vector<int> basis_;
  std::vector<bool> is_basic_;
  std::vector<double> artificial_sign_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd x_basic_;
  int iterations_ = 0;
  int iteration_limit_ = 0;
  int bland_threshold_ = 0;
  int pivots_since_refactor_ = 0;
};

std::vector<int> SortedDifference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

LpSolution Solve(const DenseLp& lp, const std::optional<Basis>& warm_basis,
                 const SimplexOptions& options) {
  RevisedSimplex simplex(lp, options);
  return simplex.Run(warm_basis);
}

BasisEvents ComputeBasisEvents(const LpSolution& prev, const LpSolution& cur) {
  return {SortedDifference(cur.basic_columns, prev.basic_columns),
          SortedDifference(prev.basic_columns, cur.basic_columns)};
}

}  // namespace cglab

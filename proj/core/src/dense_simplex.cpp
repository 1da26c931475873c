#include "rot/dense_simplex.hpp"

#include <algorithm>
#include <limits>

namespace rot {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

template <Scalar T>
class Tableau {
 public:
  Tableau(const StandardFormLp<T>& lp, const LpOptions& options)
      : m_(lp.rows),
        n_(lp.cols),
        width_(lp.cols + lp.rows + 1),
        cells_(m_ * width_, T(0)),
        objective_(width_, T(0)),
        basis_(m_),
        sign_(m_, 1),
        options_(options) {
    if constexpr (!ScalarTraits<T>::is_exact) tol_ = options.tolerance;
    for (std::size_t r = 0; r < m_; ++r) {
      sign_[r] = lp.b[r] < 0 ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) {
        cell(r, j) = sign_[r] < 0 ? T(-lp.at(r, j)) : lp.at(r, j);
      }
      cell(r, n_ + r) = T(1);
      rhs(r) = sign_[r] < 0 ? T(-lp.b[r]) : lp.b[r];
      basis_[r] = n_ + r;
    }
  }

  LpSolution<T> solve(const std::vector<T>& c) {
    LpSolution<T> out;

    // Phase 1: minimize the sum of artificials.
    T b_norm(0);
    for (std::size_t r = 0; r < m_; ++r) {
      b_norm += rhs(r);
      for (std::size_t j = 0; j < n_; ++j) objective_[j] -= cell(r, j);
      objective_[width_ - 1] -= rhs(r);
    }
    LpStatus status = iterate(/*allow_artificial=*/true);
    out.pivots = pivots_;
    if (status != LpStatus::kOptimal) {
      out.status = status;
      return out;
    }
    const T infeasibility = -objective_[width_ - 1];
    if (infeasibility > tol_ * std::max(T(1), b_norm) * T(100)) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    drive_out_artificials();

    // Phase 2.
    std::fill(objective_.begin(), objective_.end(), T(0));
    for (std::size_t j = 0; j < n_; ++j) objective_[j] = c[j];
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) continue;
      const T cb = c[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) objective_[j] -= cb * cell(r, j);
    }
    status = iterate(/*allow_artificial=*/false);
    out.pivots = pivots_;
    out.status = status;
    if (status != LpStatus::kOptimal) return out;

    out.objective = -objective_[width_ - 1];
    out.x.assign(n_, T(0));
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) out.x[basis_[r]] = rhs(r);
    }
    out.duals.assign(m_, T(0));
    for (std::size_t r = 0; r < m_; ++r) {
      const T& reduced = objective_[n_ + r];
      out.duals[r] = sign_[r] < 0 ? reduced : T(-reduced);
    }
    return out;
  }

 private:
  T& cell(std::size_t r, std::size_t j) { return cells_[r * width_ + j]; }
  T& rhs(std::size_t r) { return cells_[r * width_ + width_ - 1]; }

  LpStatus iterate(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? n_ + m_ : n_;
    std::size_t degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= options_.degenerate_run_before_bland;
      std::size_t entering = kNone;
      T best = -tol_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (objective_[j] < best) {
          entering = j;
          if (bland) break;
          best = objective_[j];
        }
      }
      if (entering == kNone) return LpStatus::kOptimal;
      if (pivots_ >= options_.iteration_limit) return LpStatus::kIterationLimit;

      std::size_t leaving = kNone;
      T best_ratio(0);
      for (std::size_t r = 0; r < m_; ++r) {
        const T& a = cell(r, entering);
        if (!(a > tol_)) continue;
        T ratio = rhs(r) / a;
        if (leaving == kNone || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leaving == kNone) return LpStatus::kUnbounded;
      degenerate_run = best_ratio > tol_ ? 0 : degenerate_run + 1;
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (abs_value(cell(r, j)) > tol_) {
          pivot(r, j);
          break;
        }
      }
      // A row with no structural entry is redundant; its artificial stays
      // basic at zero and never leaves.
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    ++pivots_;
    const T inv = T(1) / cell(r, col);
    for (std::size_t j = 0; j < width_; ++j) cell(r, j) *= inv;
    cell(r, col) = T(1);
    auto eliminate = [&](T* row) {
      const T factor = row[col];
      if (factor == 0) return;
      for (std::size_t j = 0; j < width_; ++j) {
        if (cell(r, j) != 0) row[j] -= factor * cell(r, j);
      }
      row[col] = T(0);
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(&cells_[i * width_]);
    }
    eliminate(objective_.data());
    basis_[r] = col;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<T> cells_;
  std::vector<T> objective_;
  std::vector<std::size_t> basis_;
  std::vector<int> sign_;
  LpOptions options_;
  T tol_{0};
  std::size_t pivots_ = 0;
};

}  // namespace

template <Scalar T>
LpSolution<T> solve_lp(const StandardFormLp<T>& lp, const LpOptions& options) {
  if (lp.a.size() != lp.rows * lp.cols || lp.b.size() != lp.rows || lp.c.size() != lp.cols) {
    throw InvalidArgument("linear program dimensions are inconsistent");
  }
  Tableau<T> tableau(lp, options);
  return tableau.solve(lp.c);
}

template LpSolution<double> solve_lp(const StandardFormLp<double>&, const LpOptions&);
template LpSolution<Rational> solve_lp(const StandardFormLp<Rational>&, const LpOptions&);

}  // namespace rot

#pragma once

// Dense two-phase tableau simplex for small linear programs in standard form
//
//     minimize c.x  subject to  A x = b,  x >= 0.
//
// It exists as an independent cross-check for the network code, so it shares
// nothing with it. Pricing is Dantzig's rule with a switch to Bland's rule
// after a run of degenerate pivots.

#include <cstddef>
#include <vector>

#include "rot/scalar.hpp"

namespace rot {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

template <Scalar T>
struct StandardFormLp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> a;  // row-major, rows x cols
  std::vector<T> b;
  std::vector<T> c;

  StandardFormLp() = default;
  StandardFormLp(std::size_t rows_, std::size_t cols_)
      : rows(rows_), cols(cols_), a(rows_ * cols_, T(0)), b(rows_, T(0)), c(cols_, T(0)) {}

  T& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
  const T& at(std::size_t r, std::size_t col) const { return a[r * cols + col]; }
};

template <Scalar T>
struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  T objective{0};
  std::vector<T> x;
  // Simplex multipliers y = c_B B^-1: an optimal solution of the dual
  // max b.y subject to A^T y <= c.
  std::vector<T> duals;
  std::size_t pivots = 0;
};

struct LpOptions {
  double tolerance = 1e-10;  // ignored by the exact scalar
  std::size_t iteration_limit = 200'000;
  std::size_t degenerate_run_before_bland = 50;
};

template <Scalar T>
LpSolution<T> solve_lp(const StandardFormLp<T>& lp, const LpOptions& options = {});

}  // namespace rot

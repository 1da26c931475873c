#pragma once

// Exact relative Wasserstein distances between finitely supported measures.
//
// W_p(mu, nu)^p is the minimum of pi(d_p^p) over couplings that may route
// mass through the reservoir. It is computed as a balanced transportation
// problem on supp(mu) + {R_src} against supp(nu) + {R_sink}:
//
//   x -> y        cost d_p(x,y)^p
//   x -> R_sink   cost d_A(x)^p        (mass sent to A)
//   R_src -> y    cost d_A(y)^p        (mass drawn from A)
//   R_src -> R_sink  cost 0            (A x A, killed by the quotient)
//
// with R_src supplying nu(X) and R_sink absorbing mu(X). A single reservoir
// node suffices because every point of A sits at distance d_A from x in the
// quotient.
//
// The infimum over the truncated coupling families Pi_eps is not
// materialized: every atom of a finitely supported relative measure has
// d_A > 0, so for eps below the smallest atom distance mu_eps = mu and the
// family reduces to Pi(mu, nu). The value returned is therefore the
// unrestricted infimum, which coincides with the truncated one in this
// regime.

#include <cstddef>
#include <vector>

#include "rot/coupling.hpp"
#include "rot/measure.hpp"

namespace rot {

struct SolverStats {
  std::size_t pivots = 0;
  double seconds = 0.0;
};

template <Scalar T>
struct OTResult {
  double value = 0.0;  // W_p = cost^(1/p)
  T cost{0};           // optimal pi(d_p^p), exact in rational mode
  BasicCoupling<T> coupling;
  double p = 1.0;
  SolverStats stats;
};

enum class DirectCost {
  kRelative,  // d_p(x,y)^p on direct arcs
  kAmbient,   // d(x,y)^p; the reservoir arcs realize the min with d_A^p + d_A^p
};

struct SolveOptions {
  DirectCost direct_cost = DirectCost::kRelative;
  std::size_t pivot_limit = 10'000'000;
};

// Costs of a transportation problem with reservoir legs, indexed by the
// position of each atom in its measure's support.
template <Scalar T>
struct TransportCosts {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> direct;          // rows x cols, row-major
  std::vector<T> to_reservoir;    // per row
  std::vector<T> from_reservoir;  // per col
};

template <Scalar T>
struct TransportSolution {
  T cost{0};
  std::vector<T> direct_flow;  // rows x cols
  std::vector<T> to_reservoir_flow;
  std::vector<T> from_reservoir_flow;
  // Feasible dual: f_i + g_j <= direct(i,j), f_i <= to_reservoir(i),
  // g_j <= from_reservoir(j), with sum mass_i f_i + sum mass_j g_j = cost.
  std::vector<T> row_potential;
  std::vector<T> col_potential;
  SolverStats stats;
};

// Min-cost flow over the reservoir-augmented bipartite network.
template <Scalar T>
TransportSolution<T> solve_transport(const std::vector<T>& row_mass,
                                     const std::vector<T>& col_mass,
                                     const TransportCosts<T>& costs,
                                     const SolveOptions& options = {});

template <Scalar T>
TransportCosts<T> metric_costs(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p,
                               DirectCost direct_cost = DirectCost::kRelative);

template <Scalar T>
OTResult<T> solve_wp(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p,
                     const SolveOptions& options = {});

template <Scalar T>
OTResult<T> solve_w1(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu,
                     const SolveOptions& options = {}) {
  return solve_wp(mu, nu, 1.0, options);
}

// ||sigma||_KR = W_1(sigma+, sigma-).
template <Scalar T>
T kr_norm(const BasicSignedMeasure<T>& sigma);

template <Scalar T>
struct OracleResult {
  T cost{0};
  double value = 0.0;
};

// Largest support product accepted by oracle_lp.
inline constexpr std::size_t kOracleLpMaxProduct = 400;
// Largest support accepted by oracle_enumerate on either side.
inline constexpr std::size_t kOracleEnumerateMaxAtoms = 8;

// Dense transportation LP over all direct and reservoir variables, solved by
// the generic tableau simplex.
template <Scalar T>
OracleResult<T> oracle_lp(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p);

// Brute force over partial injective matchings between unit-mass supports;
// unmatched atoms go through the reservoir.
template <Scalar T>
OracleResult<T> oracle_enumerate(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p);

}  // namespace rot

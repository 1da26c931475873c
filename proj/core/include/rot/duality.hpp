#pragma once

// Kantorovich-Rubinstein and Monge-Kantorovich duality as finite LPs.
//
// KR dual: maximize mu(f) - nu(f) over f on S = supp(mu) u supp(nu) with
//   f(x) - f(y) <= dbar(x,y)   for all ordered pairs in S,
//   |f(x)| <= d_A(x)            for all x in S.
// These are exactly the restrictions to S of 1-Lipschitz functions vanishing
// on A: McShane-extending f over the pseudometric dbar (with f = 0 on A)
// gives a global extension.
//
// MK dual: maximize mu(f) + nu(g) subject to f(x) + g(y) <= h(x,y),
//   f(x) <= h_A(x), g(y) <= h_A'(y).
//
// Each certificate pairs a dual value from the dense tableau simplex with the
// primal optimum from the network simplex.

#include <map>
#include <optional>
#include <vector>

#include "rot/measure.hpp"
#include "rot/solver.hpp"

namespace rot {

template <Scalar T>
using Potential = std::map<PointId, T>;

template <Scalar T>
struct DualCertificate {
  T value{0};   // dual objective
  T primal{0};  // primal optimum from the network simplex
  T gap{0};     // primal - value
  Potential<T> potential_f;
  std::optional<Potential<T>> potential_g;  // absent for KR, where g = -f
};

// Ground cost h over all points of a metric pair, with its two reservoir
// columns h_A(x) = inf_a h(x,a) and h_A'(y) = inf_a h(a,y). h is assumed to
// vanish on A x A.
template <Scalar T>
struct PairCost {
  std::size_t point_count = 0;
  std::vector<T> matrix;  // point_count x point_count, row-major
  std::vector<T> to_reservoir;
  std::vector<T> from_reservoir;

  const T& operator()(PointId x, PointId y) const { return matrix[x.index * point_count + y.index]; }

  // h = dbar with h_A = h_A' = d_A.
  static PairCost dbar(const MetricPair& pair);
};

// Largest tolerated infeasibility of a returned potential.
inline constexpr double kFeasibilityTolerance = 1e-9;
// Strong duality: |primal - dual| <= kGapTolerance * max(1, primal).
inline constexpr double kGapTolerance = 1e-7;

template <Scalar T>
DualCertificate<T> kr_dual(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

// Second route: KR potential read off the network-simplex node prices and
// made 1-Lipschitz by one c-transform against dbar.
template <Scalar T>
DualCertificate<T> kr_dual_from_network(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

template <Scalar T>
DualCertificate<T> mk_dual(const PairCost<T>& h, const BasicMeasure<T>& mu,
                           const BasicMeasure<T>& nu);

// kr_dual(sigma+, sigma-).value.
template <Scalar T>
T op_norm(const BasicSignedMeasure<T>& sigma);

// Largest violation of the KR constraints by f over its domain (0 when
// feasible). Evaluated directly from the metric, independent of any solver.
template <Scalar T>
double kr_violation(const MetricPair& pair, const Potential<T>& f);

// Largest violation of the MK constraints by (f, g) on supp(f) x supp(g).
template <Scalar T>
double mk_violation(const PairCost<T>& h, const Potential<T>& f, const Potential<T>& g);

// p'(x) = min( min_{y in dom g} dbar(x,y) - g(y), d_A(x) ) on `points`: the
// first half of the double c-transform. If f + g <= dbar, f <= d_A and
// g <= d_A, then p' is KR-feasible, p' >= f on dom f and -p' >= g on dom g.
template <Scalar T>
Potential<T> kr_conjugate(const MetricPair& pair, const std::vector<PointId>& points,
                          const Potential<T>& g);

}  // namespace rot

#pragma once

// Finitely supported relative measures on (X, A).
//
// A measure is stored modulo measures on A: atoms at points with d_A = 0 are
// quotiented away. Atoms are kept sorted by PointId with strictly positive
// (resp. nonzero, for signed measures) weights, so equality of two measures
// is equality of their atom lists. Under the atomwise order these measures
// form a Riesz cone: sup/inf are atomwise max/min and the residual mu \ nu
// is the atomwise positive part of mu - nu.

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "rot/metric_pair.hpp"
#include "rot/scalar.hpp"

namespace rot {

template <Scalar T>
struct WeightedPoint {
  PointId point;
  T weight;

  friend bool operator==(const WeightedPoint&, const WeightedPoint&) = default;
};

template <Scalar T>
class BasicMeasure {
 public:
  using scalar_type = T;

  // The zero measure on `pair`.
  explicit BasicMeasure(PairRef pair);

  // Atoms need not be sorted and may repeat; weights must be > 0 and finite,
  // and every point must lie off the reservoir. Use make_measure() for raw
  // input that may touch A.
  BasicMeasure(PairRef pair, std::vector<WeightedPoint<T>> atoms);

  const PairRef& pair() const noexcept { return pair_; }
  std::span<const WeightedPoint<T>> atoms() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  bool is_zero() const noexcept { return atoms_.empty(); }
  std::vector<PointId> support() const;
  // Weight at x; zero when x is not an atom.
  T weight(PointId x) const;

  friend bool operator==(const BasicMeasure& a, const BasicMeasure& b) {
    return a.pair_ == b.pair_ && a.atoms_ == b.atoms_;
  }

  // Trusted constructor for atoms that are already canonical.
  static BasicMeasure from_canonical(PairRef pair, std::vector<WeightedPoint<T>> atoms);

 private:
  BasicMeasure() = default;

  PairRef pair_;
  std::vector<WeightedPoint<T>> atoms_;
};

template <Scalar T>
class BasicSignedMeasure {
 public:
  using scalar_type = T;

  explicit BasicSignedMeasure(PairRef pair);
  // Duplicates are merged first; atoms that cancel to zero disappear.
  BasicSignedMeasure(PairRef pair, std::vector<WeightedPoint<T>> atoms);

  const PairRef& pair() const noexcept { return pair_; }
  std::span<const WeightedPoint<T>> atoms() const noexcept { return atoms_; }
  bool is_zero() const noexcept { return atoms_.empty(); }
  T weight(PointId x) const;

  friend bool operator==(const BasicSignedMeasure& a, const BasicSignedMeasure& b) {
    return a.pair_ == b.pair_ && a.atoms_ == b.atoms_;
  }

  static BasicSignedMeasure from_canonical(PairRef pair, std::vector<WeightedPoint<T>> atoms);

 private:
  BasicSignedMeasure() = default;

  PairRef pair_;
  std::vector<WeightedPoint<T>> atoms_;
};

using DiscreteMeasure = BasicMeasure<double>;
using ExactMeasure = BasicMeasure<Rational>;
using SignedMeasure = BasicSignedMeasure<double>;
using ExactSignedMeasure = BasicSignedMeasure<Rational>;

template <Scalar T>
struct MeasureBuild {
  BasicMeasure<T> measure;
  T dropped_mass;  // total raw weight that sat on A
};

template <Scalar T>
struct SignedMeasureBuild {
  BasicSignedMeasure<T> measure;
  T dropped_mass;  // net signed weight that sat on A
};

template <Scalar T>
struct JordanParts {
  BasicMeasure<T> positive;
  BasicMeasure<T> negative;
};

// Quotient construction: atoms with d_A = 0 are discarded and reported,
// duplicates are summed, zero weights vanish.
template <Scalar T>
MeasureBuild<T> make_measure(const PairRef& pair, std::span<const WeightedPoint<T>> raw);

template <Scalar T>
SignedMeasureBuild<T> make_signed_measure(const PairRef& pair,
                                          std::span<const WeightedPoint<T>> raw);

template <Scalar T>
BasicMeasure<T> dirac(const PairRef& pair, PointId x, const T& weight = T(1));

template <Scalar T>
T total_mass(const BasicMeasure<T>& mu);

// mu(d_A^p) = sum of w_x d_A(x)^p. moment(mu, 0) is the total mass.
template <Scalar T>
T moment(const BasicMeasure<T>& mu, double p);

// Throws InvalidArgument if f misses a support point.
template <Scalar T>
T integrate(const BasicMeasure<T>& mu, const std::map<PointId, T>& f);

template <Scalar T, class F>
  requires std::invocable<F, PointId>
T integrate(const BasicMeasure<T>& mu, F&& f) {
  T sum(0);
  for (const auto& atom : mu.atoms()) sum += atom.weight * T(f(atom.point));
  return sum;
}

template <Scalar T>
BasicMeasure<T> add(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

template <Scalar T>
BasicMeasure<T> scale(const T& alpha, const BasicMeasure<T>& mu);

template <Scalar T>
BasicMeasure<T> operator+(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  return add(mu, nu);
}

// mu_eps: atoms with d_A > eps.
template <Scalar T>
BasicMeasure<T> truncate_lower(const BasicMeasure<T>& mu, double eps);

// mu^eps: atoms with 0 < d_A <= eps.
template <Scalar T>
BasicMeasure<T> truncate_upper(const BasicMeasure<T>& mu, double eps);

// mu_eps^delta: atoms with eps < d_A <= delta. delta may be +infinity.
template <Scalar T>
BasicMeasure<T> band(const BasicMeasure<T>& mu, double eps, double delta);

// Pushforward under the retraction collapsing {d_A <= eps} onto A; equal to
// truncate_lower(mu, eps) in the quotient.
template <Scalar T>
BasicMeasure<T> retract_measure(const BasicMeasure<T>& mu, double eps);

template <Scalar T>
BasicMeasure<T> sup_measure(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

template <Scalar T>
BasicMeasure<T> inf_measure(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

// mu \ nu: the unique measure with nu + (mu \ nu) = mu v nu.
template <Scalar T>
BasicMeasure<T> residual(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

template <Scalar T>
bool le(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

template <Scalar T>
bool approx_equal(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double tolerance);

template <Scalar T>
BasicSignedMeasure<T> difference(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

template <Scalar T>
JordanParts<T> jordan(const BasicSignedMeasure<T>& sigma);

// |sigma| = sigma+ + sigma-.
template <Scalar T>
BasicMeasure<T> abs_measure(const BasicSignedMeasure<T>& sigma);

template <Scalar To, Scalar From>
BasicMeasure<To> measure_cast(const BasicMeasure<From>& mu);

template <Scalar To, Scalar From>
BasicSignedMeasure<To> measure_cast(const BasicSignedMeasure<From>& sigma);

void check_same_pair(const PairRef& a, const PairRef& b);

}  // namespace rot

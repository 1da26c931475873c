#pragma once

// Transport plans between relative measures.
//
// Besides direct flows x -> y a coupling may send mass into the reservoir
// (x -> A) or draw it out (A -> y). Since every point of A is at distance
// d_A(x) from x in the quotient, reservoir flows are keyed by their single
// off-reservoir endpoint.

#include <map>
#include <utility>

#include "rot/measure.hpp"

namespace rot {

template <Scalar T>
class BasicCoupling {
 public:
  using scalar_type = T;
  using DirectMap = std::map<std::pair<PointId, PointId>, T>;
  using ReservoirMap = std::map<PointId, T>;

  explicit BasicCoupling(PairRef pair);

  const PairRef& pair() const noexcept { return pair_; }
  const DirectMap& direct() const noexcept { return direct_; }
  const ReservoirMap& to_reservoir() const noexcept { return to_reservoir_; }
  const ReservoirMap& from_reservoir() const noexcept { return from_reservoir_; }
  bool empty() const noexcept {
    return direct_.empty() && to_reservoir_.empty() && from_reservoir_.empty();
  }

  // Accumulating setters. Weights must be >= 0; zero is a no-op. A direct
  // flow with an endpoint on A is recorded as the equivalent reservoir flow,
  // and one with both endpoints on A vanishes in the quotient.
  void add_direct(PointId from, PointId to, const T& weight);
  void add_to_reservoir(PointId from, const T& weight);
  void add_from_reservoir(PointId to, const T& weight);

  friend bool operator==(const BasicCoupling& a, const BasicCoupling& b) {
    return a.pair_ == b.pair_ && a.direct_ == b.direct_ && a.to_reservoir_ == b.to_reservoir_ &&
           a.from_reservoir_ == b.from_reservoir_;
  }

 private:
  PairRef pair_;
  DirectMap direct_;
  ReservoirMap to_reservoir_;
  ReservoirMap from_reservoir_;
};

using Coupling = BasicCoupling<double>;
using ExactCoupling = BasicCoupling<Rational>;

template <Scalar T>
struct Marginals {
  BasicMeasure<T> first;
  BasicMeasure<T> second;
};

// Pushforwards under the two projections, as quotient measures.
template <Scalar T>
Marginals<T> marginals(const BasicCoupling<T>& pi);

// All of mu goes to A and all of nu comes from A.
template <Scalar T>
BasicCoupling<T> trivial_coupling(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu);

template <Scalar T>
BasicCoupling<T> diagonal_coupling(const BasicMeasure<T>& mu);

// pi + trivial_coupling(mu2, nu2).
template <Scalar T>
BasicCoupling<T> trivial_extension(const BasicCoupling<T>& pi, const BasicMeasure<T>& mu2,
                                   const BasicMeasure<T>& nu2);

// pi(d_p^p): direct legs cost d_p(x,y)^p, reservoir legs d_A^p.
template <Scalar T>
T cost(const BasicCoupling<T>& pi, double p);

// r_* pi for the retraction collapsing {0 < d_A <= eps} onto A.
template <Scalar T>
BasicCoupling<T> retract_coupling(const BasicCoupling<T>& pi, double eps);

// Swap the roles of the two factors.
template <Scalar T>
BasicCoupling<T> transpose(const BasicCoupling<T>& pi);

template <Scalar T>
BasicCoupling<T> operator+(const BasicCoupling<T>& a, const BasicCoupling<T>& b);

template <Scalar T>
bool approx_equal(const BasicCoupling<T>& a, const BasicCoupling<T>& b, double tolerance);

}  // namespace rot

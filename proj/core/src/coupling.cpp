#include "rot/coupling.hpp"

#include <cmath>
#include <vector>

namespace rot {
namespace {

template <Scalar T>
void check_flow(const T& w) {
  if (!ScalarTraits<T>::is_finite(w) || w < 0) {
    throw InvalidArgument("coupling weights must be finite and nonnegative");
  }
}

template <class Key, Scalar T>
void accumulate(std::map<Key, T>& m, const Key& key, const T& w) {
  auto [it, inserted] = m.try_emplace(key, w);
  if (!inserted) it->second += w;
}

template <class Key, Scalar T>
void accumulate_all(std::map<Key, T>& into, const std::map<Key, T>& from) {
  for (const auto& [key, w] : from) accumulate(into, key, w);
}

template <Scalar T>
BasicMeasure<T> to_measure(const PairRef& pair, const std::map<PointId, T>& weights) {
  std::vector<WeightedPoint<T>> atoms;
  atoms.reserve(weights.size());
  for (const auto& [x, w] : weights) {
    if (w != 0) atoms.push_back({x, w});
  }
  return BasicMeasure<T>::from_canonical(pair, std::move(atoms));
}

template <class Map>
bool maps_close(const Map& a, const Map& b, double tolerance) {
  for (const auto& [key, w] : a) {
    auto it = b.find(key);
    const double other = it == b.end() ? 0.0 : to_double(it->second);
    if (std::abs(to_double(w) - other) > tolerance) return false;
  }
  for (const auto& [key, w] : b) {
    if (!a.contains(key) && std::abs(to_double(w)) > tolerance) return false;
  }
  return true;
}

}  // namespace

template <Scalar T>
BasicCoupling<T>::BasicCoupling(PairRef pair) : pair_(std::move(pair)) {
  if (!pair_) throw InvalidArgument("coupling needs a metric pair");
}

template <Scalar T>
void BasicCoupling<T>::add_direct(PointId from, PointId to, const T& raw) {
  const T weight = canonical(raw);
  check_flow(weight);
  if (weight == 0) return;
  const bool from_on_a = pair_->dist_to_reservoir(from) == 0.0;
  const bool to_on_a = pair_->dist_to_reservoir(to) == 0.0;
  if (from_on_a && to_on_a) return;
  if (to_on_a) {
    accumulate(to_reservoir_, from, weight);
  } else if (from_on_a) {
    accumulate(from_reservoir_, to, weight);
  } else {
    accumulate(direct_, std::pair{from, to}, weight);
  }
}

template <Scalar T>
void BasicCoupling<T>::add_to_reservoir(PointId from, const T& raw) {
  const T weight = canonical(raw);
  check_flow(weight);
  if (weight == 0 || pair_->dist_to_reservoir(from) == 0.0) return;
  accumulate(to_reservoir_, from, weight);
}

template <Scalar T>
void BasicCoupling<T>::add_from_reservoir(PointId to, const T& raw) {
  const T weight = canonical(raw);
  check_flow(weight);
  if (weight == 0 || pair_->dist_to_reservoir(to) == 0.0) return;
  accumulate(from_reservoir_, to, weight);
}

template <Scalar T>
Marginals<T> marginals(const BasicCoupling<T>& pi) {
  std::map<PointId, T> first;
  std::map<PointId, T> second;
  for (const auto& [edge, w] : pi.direct()) {
    accumulate(first, edge.first, w);
    accumulate(second, edge.second, w);
  }
  accumulate_all(first, pi.to_reservoir());
  accumulate_all(second, pi.from_reservoir());
  return {to_measure(pi.pair(), first), to_measure(pi.pair(), second)};
}

template <Scalar T>
BasicCoupling<T> trivial_coupling(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  BasicCoupling<T> pi(mu.pair());
  for (const auto& atom : mu.atoms()) pi.add_to_reservoir(atom.point, atom.weight);
  for (const auto& atom : nu.atoms()) pi.add_from_reservoir(atom.point, atom.weight);
  return pi;
}

template <Scalar T>
BasicCoupling<T> diagonal_coupling(const BasicMeasure<T>& mu) {
  BasicCoupling<T> pi(mu.pair());
  for (const auto& atom : mu.atoms()) pi.add_direct(atom.point, atom.point, atom.weight);
  return pi;
}

template <Scalar T>
BasicCoupling<T> trivial_extension(const BasicCoupling<T>& pi, const BasicMeasure<T>& mu2,
                                   const BasicMeasure<T>& nu2) {
  check_same_pair(pi.pair(), mu2.pair());
  return pi + trivial_coupling(mu2, nu2);
}

template <Scalar T>
T cost(const BasicCoupling<T>& pi, double p) {
  MetricPair::check_exponent(p);
  const MetricPair& pair = *pi.pair();
  T sum(0);
  for (const auto& [edge, w] : pi.direct()) {
    sum += w * pair.template dp_cost_pow<T>(p, edge.first, edge.second);
  }
  for (const auto& [x, w] : pi.to_reservoir()) {
    sum += w * power(pair.template reservoir_dist_as<T>(x), p);
  }
  for (const auto& [y, w] : pi.from_reservoir()) {
    sum += w * power(pair.template reservoir_dist_as<T>(y), p);
  }
  return sum;
}

template <Scalar T>
BasicCoupling<T> retract_coupling(const BasicCoupling<T>& pi, double eps) {
  if (std::isnan(eps) || eps < 0) throw InvalidArgument("retraction radius must be >= 0");
  const MetricPair& pair = *pi.pair();
  auto survives = [&](PointId x) { return pair.dist_to_reservoir(x) > eps; };
  BasicCoupling<T> out(pi.pair());
  for (const auto& [edge, w] : pi.direct()) {
    const bool keep_from = survives(edge.first);
    const bool keep_to = survives(edge.second);
    if (keep_from && keep_to) {
      out.add_direct(edge.first, edge.second, w);
    } else if (keep_from) {
      out.add_to_reservoir(edge.first, w);
    } else if (keep_to) {
      out.add_from_reservoir(edge.second, w);
    }
  }
  for (const auto& [x, w] : pi.to_reservoir()) {
    if (survives(x)) out.add_to_reservoir(x, w);
  }
  for (const auto& [y, w] : pi.from_reservoir()) {
    if (survives(y)) out.add_from_reservoir(y, w);
  }
  return out;
}

template <Scalar T>
BasicCoupling<T> transpose(const BasicCoupling<T>& pi) {
  BasicCoupling<T> out(pi.pair());
  for (const auto& [edge, w] : pi.direct()) out.add_direct(edge.second, edge.first, w);
  for (const auto& [x, w] : pi.to_reservoir()) out.add_from_reservoir(x, w);
  for (const auto& [y, w] : pi.from_reservoir()) out.add_to_reservoir(y, w);
  return out;
}

template <Scalar T>
BasicCoupling<T> operator+(const BasicCoupling<T>& a, const BasicCoupling<T>& b) {
  check_same_pair(a.pair(), b.pair());
  BasicCoupling<T> out = a;
  for (const auto& [edge, w] : b.direct()) out.add_direct(edge.first, edge.second, w);
  for (const auto& [x, w] : b.to_reservoir()) out.add_to_reservoir(x, w);
  for (const auto& [y, w] : b.from_reservoir()) out.add_from_reservoir(y, w);
  return out;
}

template <Scalar T>
bool approx_equal(const BasicCoupling<T>& a, const BasicCoupling<T>& b, double tolerance) {
  check_same_pair(a.pair(), b.pair());
  return maps_close(a.direct(), b.direct(), tolerance) &&
         maps_close(a.to_reservoir(), b.to_reservoir(), tolerance) &&
         maps_close(a.from_reservoir(), b.from_reservoir(), tolerance);
}

#define ROT_INSTANTIATE_COUPLING(T)                                                            \
  template class BasicCoupling<T>;                                                             \
  template Marginals<T> marginals(const BasicCoupling<T>&);                                    \
  template BasicCoupling<T> trivial_coupling(const BasicMeasure<T>&, const BasicMeasure<T>&);  \
  template BasicCoupling<T> diagonal_coupling(const BasicMeasure<T>&);                         \
  template BasicCoupling<T> trivial_extension(const BasicCoupling<T>&, const BasicMeasure<T>&, \
                                              const BasicMeasure<T>&);                         \
  template T cost(const BasicCoupling<T>&, double);                                            \
  template BasicCoupling<T> retract_coupling(const BasicCoupling<T>&, double);                 \
  template BasicCoupling<T> transpose(const BasicCoupling<T>&);                                \
  template BasicCoupling<T> operator+(const BasicCoupling<T>&, const BasicCoupling<T>&);       \
  template bool approx_equal(const BasicCoupling<T>&, const BasicCoupling<T>&, double);

ROT_INSTANTIATE_COUPLING(double)
ROT_INSTANTIATE_COUPLING(Rational)

}  // namespace rot

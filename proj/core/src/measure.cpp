#include "rot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rot {
namespace {

template <Scalar T>
void check_weight(const T& raw, bool allow_negative) {
  const T w = canonical(raw);
  if (!ScalarTraits<T>::is_finite(w)) throw InvalidArgument("weights must be finite");
  if (!allow_negative && w < 0) throw InvalidArgument("weights must be nonnegative");
}

// Sorts by point, merges duplicates, drops zeros.
template <Scalar T>
std::vector<WeightedPoint<T>> canonicalize(std::vector<WeightedPoint<T>> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const auto& a, const auto& b) { return a.point < b.point; });
  std::vector<WeightedPoint<T>> out;
  out.reserve(atoms.size());
  for (auto& atom : atoms) {
    atom.weight = canonical(atom.weight);
    if (!out.empty() && out.back().point == atom.point) {
      out.back().weight += atom.weight;
    } else {
      out.push_back(std::move(atom));
    }
  }
  std::erase_if(out, [](const auto& a) { return a.weight == 0; });
  return out;
}

// Walks two sorted atom lists in lockstep; `op(wa, wb)` receives zero for a
// missing side. Zero results are dropped.
template <Scalar T, class Op>
std::vector<WeightedPoint<T>> merge_atoms(std::span<const WeightedPoint<T>> a,
                                          std::span<const WeightedPoint<T>> b, Op op) {
  std::vector<WeightedPoint<T>> out;
  out.reserve(a.size() + b.size());
  const T zero(0);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    PointId x;
    T w;
    if (j == b.size() || (i < a.size() && a[i].point < b[j].point)) {
      x = a[i].point;
      w = op(a[i].weight, zero);
      ++i;
    } else if (i == a.size() || b[j].point < a[i].point) {
      x = b[j].point;
      w = op(zero, b[j].weight);
      ++j;
    } else {
      x = a[i].point;
      w = op(a[i].weight, b[j].weight);
      ++i;
      ++j;
    }
    if (w != 0) out.push_back({x, std::move(w)});
  }
  return out;
}

template <Scalar T, class Keep>
BasicMeasure<T> restrict_by_reservoir_distance(const BasicMeasure<T>& mu, Keep keep) {
  std::vector<WeightedPoint<T>> out;
  for (const auto& atom : mu.atoms()) {
    if (keep(mu.pair()->dist_to_reservoir(atom.point))) out.push_back(atom);
  }
  return BasicMeasure<T>::from_canonical(mu.pair(), std::move(out));
}

void check_threshold(double eps) {
  if (std::isnan(eps) || eps < 0) throw InvalidArgument("truncation threshold must be >= 0");
}

template <Scalar T>
T lookup(std::span<const WeightedPoint<T>> atoms, PointId x) {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), x,
                             [](const auto& atom, PointId p) { return atom.point < p; });
  if (it != atoms.end() && it->point == x) return it->weight;
  return T(0);
}

}  // namespace

void check_same_pair(const PairRef& a, const PairRef& b) {
  if (a != b) throw PairMismatch();
}

// ---------------------------------------------------------------------------
// BasicMeasure

template <Scalar T>
BasicMeasure<T>::BasicMeasure(PairRef pair) : pair_(std::move(pair)) {
  if (!pair_) throw InvalidArgument("measure needs a metric pair");
}

template <Scalar T>
BasicMeasure<T>::BasicMeasure(PairRef pair, std::vector<WeightedPoint<T>> atoms)
    : pair_(std::move(pair)) {
  if (!pair_) throw InvalidArgument("measure needs a metric pair");
  for (const auto& atom : atoms) {
    check_weight(atom.weight, false);
    if (pair_->dist_to_reservoir(atom.point) == 0.0) {
      throw InvalidArgument("atom at point " + std::to_string(atom.point.index) +
                            " lies on the reservoir");
    }
  }
  atoms_ = canonicalize(std::move(atoms));
}

template <Scalar T>
BasicMeasure<T> BasicMeasure<T>::from_canonical(PairRef pair, std::vector<WeightedPoint<T>> atoms) {
  BasicMeasure mu;
  mu.pair_ = std::move(pair);
  mu.atoms_ = std::move(atoms);
  return mu;
}

template <Scalar T>
std::vector<PointId> BasicMeasure<T>::support() const {
  std::vector<PointId> out;
  out.reserve(atoms_.size());
  for (const auto& atom : atoms_) out.push_back(atom.point);
  return out;
}

template <Scalar T>
T BasicMeasure<T>::weight(PointId x) const {
  return lookup<T>(atoms_, x);
}

// ---------------------------------------------------------------------------
// BasicSignedMeasure

template <Scalar T>
BasicSignedMeasure<T>::BasicSignedMeasure(PairRef pair) : pair_(std::move(pair)) {
  if (!pair_) throw InvalidArgument("measure needs a metric pair");
}

template <Scalar T>
BasicSignedMeasure<T>::BasicSignedMeasure(PairRef pair, std::vector<WeightedPoint<T>> atoms)
    : pair_(std::move(pair)) {
  if (!pair_) throw InvalidArgument("measure needs a metric pair");
  for (const auto& atom : atoms) {
    check_weight(atom.weight, true);
    if (pair_->dist_to_reservoir(atom.point) == 0.0) {
      throw InvalidArgument("atom at point " + std::to_string(atom.point.index) +
                            " lies on the reservoir");
    }
  }
  atoms_ = canonicalize(std::move(atoms));
}

template <Scalar T>
BasicSignedMeasure<T> BasicSignedMeasure<T>::from_canonical(PairRef pair,
                                                            std::vector<WeightedPoint<T>> atoms) {
  BasicSignedMeasure sigma;
  sigma.pair_ = std::move(pair);
  sigma.atoms_ = std::move(atoms);
  return sigma;
}

template <Scalar T>
T BasicSignedMeasure<T>::weight(PointId x) const {
  return lookup<T>(atoms_, x);
}

// ---------------------------------------------------------------------------
// Construction

template <Scalar T>
MeasureBuild<T> make_measure(const PairRef& pair, std::span<const WeightedPoint<T>> raw) {
  if (!pair) throw InvalidArgument("measure needs a metric pair");
  std::vector<WeightedPoint<T>> kept;
  T dropped(0);
  for (const auto& atom : raw) {
    check_weight(atom.weight, false);
    if (pair->dist_to_reservoir(atom.point) == 0.0) {
      dropped += atom.weight;
    } else {
      kept.push_back(atom);
    }
  }
  return {BasicMeasure<T>::from_canonical(pair, canonicalize(std::move(kept))), dropped};
}

template <Scalar T>
SignedMeasureBuild<T> make_signed_measure(const PairRef& pair,
                                          std::span<const WeightedPoint<T>> raw) {
  if (!pair) throw InvalidArgument("measure needs a metric pair");
  std::vector<WeightedPoint<T>> kept;
  T dropped(0);
  for (const auto& atom : raw) {
    check_weight(atom.weight, true);
    if (pair->dist_to_reservoir(atom.point) == 0.0) {
      dropped += atom.weight;
    } else {
      kept.push_back(atom);
    }
  }
  return {BasicSignedMeasure<T>::from_canonical(pair, canonicalize(std::move(kept))), dropped};
}

template <Scalar T>
BasicMeasure<T> dirac(const PairRef& pair, PointId x, const T& weight) {
  return BasicMeasure<T>(pair, {{x, weight}});
}

// ---------------------------------------------------------------------------
// Integration

template <Scalar T>
T total_mass(const BasicMeasure<T>& mu) {
  T sum(0);
  for (const auto& atom : mu.atoms()) sum += atom.weight;
  return sum;
}

template <Scalar T>
T moment(const BasicMeasure<T>& mu, double p) {
  if (std::isnan(p) || p < 0) throw InvalidArgument("moment order must be >= 0");
  if (p == 0) return total_mass(mu);
  T sum(0);
  for (const auto& atom : mu.atoms()) {
    sum += atom.weight * power(mu.pair()->template reservoir_dist_as<T>(atom.point), p);
  }
  return sum;
}

template <Scalar T>
T integrate(const BasicMeasure<T>& mu, const std::map<PointId, T>& f) {
  T sum(0);
  for (const auto& atom : mu.atoms()) {
    auto it = f.find(atom.point);
    if (it == f.end()) {
      throw InvalidArgument("integrand undefined at support point " +
                            std::to_string(atom.point.index));
    }
    sum += atom.weight * it->second;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Cone operations

template <Scalar T>
BasicMeasure<T> add(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  return BasicMeasure<T>::from_canonical(
      mu.pair(), merge_atoms<T>(mu.atoms(), nu.atoms(), [](const T& a, const T& b) { return T(a + b); }));
}

template <Scalar T>
BasicMeasure<T> scale(const T& alpha, const BasicMeasure<T>& mu) {
  check_weight(alpha, false);
  std::vector<WeightedPoint<T>> out;
  for (const auto& atom : mu.atoms()) {
    T w = alpha * atom.weight;
    if (w != 0) out.push_back({atom.point, std::move(w)});
  }
  return BasicMeasure<T>::from_canonical(mu.pair(), std::move(out));
}

template <Scalar T>
BasicMeasure<T> truncate_lower(const BasicMeasure<T>& mu, double eps) {
  check_threshold(eps);
  return restrict_by_reservoir_distance(mu, [eps](double d) { return d > eps; });
}

template <Scalar T>
BasicMeasure<T> truncate_upper(const BasicMeasure<T>& mu, double eps) {
  check_threshold(eps);
  return restrict_by_reservoir_distance(mu, [eps](double d) { return d > 0 && d <= eps; });
}

template <Scalar T>
BasicMeasure<T> band(const BasicMeasure<T>& mu, double eps, double delta) {
  check_threshold(eps);
  if (std::isnan(delta) || eps > delta) throw InvalidArgument("band needs eps <= delta");
  return restrict_by_reservoir_distance(mu, [eps, delta](double d) { return d > eps && d <= delta; });
}

template <Scalar T>
BasicMeasure<T> retract_measure(const BasicMeasure<T>& mu, double eps) {
  return truncate_lower(mu, eps);
}

template <Scalar T>
BasicMeasure<T> sup_measure(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  return BasicMeasure<T>::from_canonical(
      mu.pair(), merge_atoms<T>(mu.atoms(), nu.atoms(), [](const T& a, const T& b) { return a < b ? b : a; }));
}

template <Scalar T>
BasicMeasure<T> inf_measure(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  return BasicMeasure<T>::from_canonical(
      mu.pair(), merge_atoms<T>(mu.atoms(), nu.atoms(), [](const T& a, const T& b) { return a < b ? a : b; }));
}

template <Scalar T>
BasicMeasure<T> residual(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  return BasicMeasure<T>::from_canonical(
      mu.pair(), merge_atoms<T>(mu.atoms(), nu.atoms(), [](const T& a, const T& b) {
        return b < a ? T(a - b) : T(0);
      }));
}

template <Scalar T>
bool le(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  for (const auto& atom : mu.atoms()) {
    if (nu.weight(atom.point) < atom.weight) return false;
  }
  return true;
}

template <Scalar T>
bool approx_equal(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double tolerance) {
  check_same_pair(mu.pair(), nu.pair());
  bool equal = true;
  merge_atoms<T>(mu.atoms(), nu.atoms(), [&](const T& a, const T& b) {
    if (to_double(abs_value(T(a - b))) > tolerance) equal = false;
    return T(0);
  });
  return equal;
}

// ---------------------------------------------------------------------------
// Signed measures

template <Scalar T>
BasicSignedMeasure<T> difference(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  return BasicSignedMeasure<T>::from_canonical(
      mu.pair(), merge_atoms<T>(mu.atoms(), nu.atoms(), [](const T& a, const T& b) { return T(a - b); }));
}

template <Scalar T>
JordanParts<T> jordan(const BasicSignedMeasure<T>& sigma) {
  std::vector<WeightedPoint<T>> positive;
  std::vector<WeightedPoint<T>> negative;
  for (const auto& atom : sigma.atoms()) {
    if (atom.weight > 0) {
      positive.push_back(atom);
    } else {
      negative.push_back({atom.point, T(-atom.weight)});
    }
  }
  return {BasicMeasure<T>::from_canonical(sigma.pair(), std::move(positive)),
          BasicMeasure<T>::from_canonical(sigma.pair(), std::move(negative))};
}

template <Scalar T>
BasicMeasure<T> abs_measure(const BasicSignedMeasure<T>& sigma) {
  std::vector<WeightedPoint<T>> out;
  out.reserve(sigma.atoms().size());
  for (const auto& atom : sigma.atoms()) out.push_back({atom.point, abs_value(atom.weight)});
  return BasicMeasure<T>::from_canonical(sigma.pair(), std::move(out));
}

template <Scalar To, Scalar From>
BasicMeasure<To> measure_cast(const BasicMeasure<From>& mu) {
  std::vector<WeightedPoint<To>> out;
  for (const auto& atom : mu.atoms()) {
    To w;
    if constexpr (std::is_same_v<To, From>) {
      w = atom.weight;
    } else if constexpr (ScalarTraits<To>::is_exact) {
      w = from_double<To>(atom.weight);
    } else {
      w = to_double(atom.weight);
    }
    if (w != 0) out.push_back({atom.point, std::move(w)});
  }
  return BasicMeasure<To>::from_canonical(mu.pair(), std::move(out));
}

template <Scalar To, Scalar From>
BasicSignedMeasure<To> measure_cast(const BasicSignedMeasure<From>& sigma) {
  std::vector<WeightedPoint<To>> out;
  for (const auto& atom : sigma.atoms()) {
    To w;
    if constexpr (std::is_same_v<To, From>) {
      w = atom.weight;
    } else if constexpr (ScalarTraits<To>::is_exact) {
      w = from_double<To>(atom.weight);
    } else {
      w = to_double(atom.weight);
    }
    if (w != 0) out.push_back({atom.point, std::move(w)});
  }
  return BasicSignedMeasure<To>::from_canonical(sigma.pair(), std::move(out));
}

#define ROT_INSTANTIATE_MEASURE(T)                                                              \
  template class BasicMeasure<T>;                                                               \
  template class BasicSignedMeasure<T>;                                                         \
  template MeasureBuild<T> make_measure(const PairRef&, std::span<const WeightedPoint<T>>);    \
  template SignedMeasureBuild<T> make_signed_measure(const PairRef&,                            \
                                                     std::span<const WeightedPoint<T>>);        \
  template BasicMeasure<T> dirac(const PairRef&, PointId, const T&);                            \
  template T total_mass(const BasicMeasure<T>&);                                                \
  template T moment(const BasicMeasure<T>&, double);                                            \
  template T integrate(const BasicMeasure<T>&, const std::map<PointId, T>&);                    \
  template BasicMeasure<T> add(const BasicMeasure<T>&, const BasicMeasure<T>&);                 \
  template BasicMeasure<T> scale(const T&, const BasicMeasure<T>&);                             \
  template BasicMeasure<T> truncate_lower(const BasicMeasure<T>&, double);                      \
  template BasicMeasure<T> truncate_upper(const BasicMeasure<T>&, double);                      \
  template BasicMeasure<T> band(const BasicMeasure<T>&, double, double);                        \
  template BasicMeasure<T> retract_measure(const BasicMeasure<T>&, double);                     \
  template BasicMeasure<T> sup_measure(const BasicMeasure<T>&, const BasicMeasure<T>&);         \
  template BasicMeasure<T> inf_measure(const BasicMeasure<T>&, const BasicMeasure<T>&);         \
  template BasicMeasure<T> residual(const BasicMeasure<T>&, const BasicMeasure<T>&);            \
  template bool le(const BasicMeasure<T>&, const BasicMeasure<T>&);                             \
  template bool approx_equal(const BasicMeasure<T>&, const BasicMeasure<T>&, double);           \
  template BasicSignedMeasure<T> difference(const BasicMeasure<T>&, const BasicMeasure<T>&);    \
  template JordanParts<T> jordan(const BasicSignedMeasure<T>&);                                 \
  template BasicMeasure<T> abs_measure(const BasicSignedMeasure<T>&);

ROT_INSTANTIATE_MEASURE(double)
ROT_INSTANTIATE_MEASURE(Rational)

template BasicMeasure<double> measure_cast<double, double>(const BasicMeasure<double>&);
template BasicMeasure<double> measure_cast<double, Rational>(const BasicMeasure<Rational>&);
template BasicMeasure<Rational> measure_cast<Rational, double>(const BasicMeasure<double>&);
template BasicMeasure<Rational> measure_cast<Rational, Rational>(const BasicMeasure<Rational>&);
template BasicSignedMeasure<double> measure_cast<double, double>(const BasicSignedMeasure<double>&);
template BasicSignedMeasure<double> measure_cast<double, Rational>(const BasicSignedMeasure<Rational>&);
template BasicSignedMeasure<Rational> measure_cast<Rational, double>(const BasicSignedMeasure<double>&);
template BasicSignedMeasure<Rational> measure_cast<Rational, Rational>(const BasicSignedMeasure<Rational>&);

}  // namespace rot

#pragma once

// A metric pair (X, d, A) over a finite working set of points. The subset A
// (the reservoir) is never materialized as points: everything the transport
// code needs from it is the distance-to-reservoir function d_A.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "rot/scalar.hpp"

namespace rot {

struct PointId {
  std::size_t index = 0;

  friend auto operator<=>(PointId, PointId) = default;
};

// Reservoir given as a finite set of anchor points.
struct PointReservoir {
  std::vector<std::vector<double>> points;
};

// Reservoir given as the hyperplane {x : normal . x = offset}.
struct HyperplaneReservoir {
  std::vector<double> normal;
  double offset = 0.0;
};

struct EuclideanGeometry {
  std::size_t dimension = 1;
  std::vector<std::vector<double>> points;
  std::variant<PointReservoir, HyperplaneReservoir> reservoir;
};

enum class DiagonalNorm { kLInf, kL2 };

// Persistence-diagram half plane {(b, d) : b <= d} with A the diagonal.
struct HalfplaneGeometry {
  std::vector<std::pair<double, double>> points;  // (birth, death)
  DiagonalNorm norm = DiagonalNorm::kLInf;
};

struct ExplicitGeometry {
  std::vector<std::vector<double>> distances;
  std::vector<double> reservoir_distances;
};

using Geometry = std::variant<EuclideanGeometry, HalfplaneGeometry, ExplicitGeometry>;

struct ValidationOptions {
  std::uint64_t seed = 0;
  // Metric axioms are checked exhaustively up to this many points, then on
  // `sampled_checks` random triples/pairs.
  std::size_t exhaustive_limit = 512;
  std::size_t sampled_checks = 10000;
  // Absolute slack, scaled by max(1, largest distance).
  double relative_slack = 1e-12;
};

class MetricPair;
using PairRef = std::shared_ptr<const MetricPair>;

class MetricPair {
 public:
  // Validates the geometry and returns a shared immutable instance. Throws
  // InvalidArgument when an axiom or a representation invariant fails.
  static PairRef create(Geometry geometry, const ValidationOptions& options = {});

  // Convenience: points on the real line with A a finite set of anchors.
  static PairRef real_line(const std::vector<double>& coordinates,
                           const std::vector<double>& reservoir = {0.0});
  static PairRef halfplane(std::vector<std::pair<double, double>> points,
                           DiagonalNorm norm = DiagonalNorm::kLInf);
  static PairRef explicit_metric(std::vector<std::vector<double>> distances,
                                 std::vector<double> reservoir_distances,
                                 const ValidationOptions& options = {});

  std::size_t point_count() const noexcept { return reservoir_distance_.size(); }
  const Geometry& geometry() const noexcept { return geometry_; }

  double dist(PointId a, PointId b) const;
  double dist_to_reservoir(PointId x) const;
  // min(d(a,b), d_A(a) + d_A(b)): the quotient pseudometric of X/A.
  double dbar(PointId a, PointId b) const;
  // min(d(a,b), (d_A(a)^p + d_A(b)^p)^(1/p)); p >= 1.
  double dp_cost(double p, PointId a, PointId b) const;

  // True when every distance is a rational function of the input
  // coordinates: explicit matrices, the L-infinity half plane, and the line.
  bool has_exact_distances() const noexcept;
  Rational exact_dist(PointId a, PointId b) const;
  Rational exact_dist_to_reservoir(PointId x) const;

  template <Scalar T>
  T dist_as(PointId a, PointId b) const {
    if constexpr (ScalarTraits<T>::is_exact) {
      return exact_dist(a, b);
    } else {
      return dist(a, b);
    }
  }

  template <Scalar T>
  T reservoir_dist_as(PointId x) const {
    if constexpr (ScalarTraits<T>::is_exact) {
      return exact_dist_to_reservoir(x);
    } else {
      return dist_to_reservoir(x);
    }
  }

  // d_p(a,b)^p = min(d(a,b)^p, d_A(a)^p + d_A(b)^p). Exact in the rational
  // scalar for integral p.
  template <Scalar T>
  T dp_cost_pow(double p, PointId a, PointId b) const {
    check_exponent(p);
    T direct = power(dist_as<T>(a, b), p);
    T via_reservoir = power(reservoir_dist_as<T>(a), p) + power(reservoir_dist_as<T>(b), p);
    return via_reservoir < direct ? via_reservoir : direct;
  }

  static void check_exponent(double p);

 private:
  MetricPair(Geometry geometry, std::vector<double> reservoir_distance);

  void check_index(PointId x) const;
  void validate(const ValidationOptions& options) const;

  Geometry geometry_;
  std::vector<double> reservoir_distance_;
};

}  // namespace rot

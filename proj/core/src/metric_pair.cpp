#include "rot/metric_pair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace rot {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw InvalidArgument(what); }

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double euclidean_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() == 1) return std::abs(a[0] - b[0]);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

std::vector<double> reservoir_distances(const EuclideanGeometry& g) {
  if (g.dimension == 0) invalid("euclidean geometry needs dimension >= 1");
  for (const auto& p : g.points) {
    if (p.size() != g.dimension) invalid("point has wrong dimension");
    if (!all_finite(p)) invalid("point coordinates must be finite");
  }
  std::vector<double> out(g.points.size());
  if (const auto* anchors = std::get_if<PointReservoir>(&g.reservoir)) {
    if (anchors->points.empty()) invalid("reservoir must contain at least one point");
    for (const auto& a : anchors->points) {
      if (a.size() != g.dimension) invalid("reservoir point has wrong dimension");
      if (!all_finite(a)) invalid("reservoir coordinates must be finite");
    }
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& a : anchors->points) best = std::min(best, euclidean_distance(g.points[i], a));
      out[i] = best;
    }
  } else {
    const auto& plane = std::get<HyperplaneReservoir>(g.reservoir);
    if (plane.normal.size() != g.dimension) invalid("hyperplane normal has wrong dimension");
    if (!all_finite(plane.normal) || !std::isfinite(plane.offset)) {
      invalid("hyperplane must be finite");
    }
    const double norm = euclidean_norm(plane.normal);
    if (norm == 0.0) invalid("hyperplane normal must be nonzero");
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      double dot = 0.0;
      for (std::size_t k = 0; k < g.dimension; ++k) dot += plane.normal[k] * g.points[i][k];
      out[i] = std::abs(dot - plane.offset) / norm;
    }
  }
  return out;
}

std::vector<double> reservoir_distances(const HalfplaneGeometry& g) {
  std::vector<double> out;
  out.reserve(g.points.size());
  const double scale = g.norm == DiagonalNorm::kLInf ? 0.5 : 1.0 / std::sqrt(2.0);
  for (const auto& [birth, death] : g.points) {
    if (!std::isfinite(birth) || !std::isfinite(death)) invalid("diagram points must be finite");
    if (birth > death) invalid("diagram point has birth > death");
    out.push_back((death - birth) * scale);
  }
  return out;
}

std::vector<double> reservoir_distances(const ExplicitGeometry& g) {
  const std::size_t n = g.distances.size();
  if (g.reservoir_distances.size() != n) invalid("reservoir distance vector has wrong length");
  for (const auto& row : g.distances) {
    if (row.size() != n) invalid("distance matrix must be square");
    for (double v : row) {
      if (!std::isfinite(v) || v < 0) invalid("distances must be finite and nonnegative");
    }
  }
  for (double v : g.reservoir_distances) {
    if (!std::isfinite(v) || v < 0) invalid("reservoir distances must be finite and nonnegative");
  }
  return g.reservoir_distances;
}

}  // namespace

MetricPair::MetricPair(Geometry geometry, std::vector<double> reservoir_distance)
    : geometry_(std::move(geometry)), reservoir_distance_(std::move(reservoir_distance)) {}

PairRef MetricPair::create(Geometry geometry, const ValidationOptions& options) {
  std::vector<double> d_a = std::visit([](const auto& g) { return reservoir_distances(g); }, geometry);
  std::shared_ptr<const MetricPair> pair(new MetricPair(std::move(geometry), std::move(d_a)));
  pair->validate(options);
  return pair;
}

PairRef MetricPair::real_line(const std::vector<double>& coordinates,
                              const std::vector<double>& reservoir) {
  EuclideanGeometry g;
  g.dimension = 1;
  for (double x : coordinates) g.points.push_back({x});
  PointReservoir anchors;
  for (double a : reservoir) anchors.points.push_back({a});
  g.reservoir = std::move(anchors);
  return create(std::move(g));
}

PairRef MetricPair::halfplane(std::vector<std::pair<double, double>> points, DiagonalNorm norm) {
  return create(HalfplaneGeometry{std::move(points), norm});
}

PairRef MetricPair::explicit_metric(std::vector<std::vector<double>> distances,
                                    std::vector<double> reservoir_distances,
                                    const ValidationOptions& options) {
  return create(ExplicitGeometry{std::move(distances), std::move(reservoir_distances)}, options);
}

void MetricPair::check_index(PointId x) const {
  if (x.index >= point_count()) {
    throw OutOfRange("point index " + std::to_string(x.index) + " out of range (" +
                     std::to_string(point_count()) + " points)");
  }
}

void MetricPair::check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("cost exponent p must be a finite real >= 1");
  }
}

double MetricPair::dist(PointId a, PointId b) const {
  check_index(a);
  check_index(b);
  if (a == b) return 0.0;
  return std::visit(
      [&](const auto& g) -> double {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, EuclideanGeometry>) {
          return euclidean_distance(g.points[a.index], g.points[b.index]);
        } else if constexpr (std::is_same_v<G, HalfplaneGeometry>) {
          const double db = std::abs(g.points[a.index].first - g.points[b.index].first);
          const double dd = std::abs(g.points[a.index].second - g.points[b.index].second);
          return g.norm == DiagonalNorm::kLInf ? std::max(db, dd) : std::hypot(db, dd);
        } else {
          return g.distances[a.index][b.index];
        }
      },
      geometry_);
}

double MetricPair::dist_to_reservoir(PointId x) const {
  check_index(x);
  return reservoir_distance_[x.index];
}

double MetricPair::dbar(PointId a, PointId b) const {
  return std::min(dist(a, b), dist_to_reservoir(a) + dist_to_reservoir(b));
}

double MetricPair::dp_cost(double p, PointId a, PointId b) const {
  check_exponent(p);
  const double d = dist(a, b);
  if (p == 1.0) return std::min(d, dist_to_reservoir(a) + dist_to_reservoir(b));
  const double via = std::pow(
      std::pow(dist_to_reservoir(a), p) + std::pow(dist_to_reservoir(b), p), 1.0 / p);
  return std::min(d, via);
}

bool MetricPair::has_exact_distances() const noexcept {
  if (const auto* e = std::get_if<EuclideanGeometry>(&geometry_)) return e->dimension == 1;
  if (const auto* h = std::get_if<HalfplaneGeometry>(&geometry_)) {
    return h->norm == DiagonalNorm::kLInf;
  }
  return true;
}

Rational MetricPair::exact_dist(PointId a, PointId b) const {
  check_index(a);
  check_index(b);
  if (!has_exact_distances()) {
    throw InvalidArgument("geometry has irrational distances; exact mode unavailable");
  }
  if (a == b) return Rational(0);
  return std::visit(
      [&](const auto& g) -> Rational {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, EuclideanGeometry>) {
          Rational diff = Rational(g.points[a.index][0]) - Rational(g.points[b.index][0]);
          return abs_value(diff);
        } else if constexpr (std::is_same_v<G, HalfplaneGeometry>) {
          Rational db = Rational(g.points[a.index].first) - Rational(g.points[b.index].first);
          Rational dd = Rational(g.points[a.index].second) - Rational(g.points[b.index].second);
          db = abs_value(db);
          dd = abs_value(dd);
          return db < dd ? dd : db;
        } else {
          return Rational(g.distances[a.index][b.index]);
        }
      },
      geometry_);
}

Rational MetricPair::exact_dist_to_reservoir(PointId x) const {
  check_index(x);
  if (!has_exact_distances()) {
    throw InvalidArgument("geometry has irrational distances; exact mode unavailable");
  }
  return std::visit(
      [&](const auto& g) -> Rational {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, EuclideanGeometry>) {
          const Rational coord(g.points[x.index][0]);
          if (const auto* anchors = std::get_if<PointReservoir>(&g.reservoir)) {
            Rational best = abs_value(Rational(coord - Rational(anchors->points.front()[0])));
            for (const auto& a : anchors->points) {
              Rational d = abs_value(Rational(coord - Rational(a[0])));
              if (d < best) best = d;
            }
            return best;
          }
          const auto& plane = std::get<HyperplaneReservoir>(g.reservoir);
          const Rational n(plane.normal[0]);
          Rational num = n * coord - Rational(plane.offset);
          return abs_value(num) / abs_value(n);
        } else if constexpr (std::is_same_v<G, HalfplaneGeometry>) {
          Rational span = Rational(g.points[x.index].second) - Rational(g.points[x.index].first);
          return span / 2;
        } else {
          return Rational(g.reservoir_distances[x.index]);
        }
      },
      geometry_);
}

void MetricPair::validate(const ValidationOptions& options) const {
  const std::size_t n = point_count();
  if (n == 0) return;

  double largest = 0.0;
  for (double v : reservoir_distance_) largest = std::max(largest, v);
  const auto* explicit_geometry = std::get_if<ExplicitGeometry>(&geometry_);
  if (explicit_geometry != nullptr) {
    for (const auto& row : explicit_geometry->distances) {
      for (double v : row) largest = std::max(largest, v);
    }
  }
  const double slack = options.relative_slack * std::max(1.0, largest);

  if (explicit_geometry != nullptr) {
    const auto& m = explicit_geometry->distances;
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i][i] != 0.0) invalid("distance matrix must have a zero diagonal");
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::abs(m[i][j] - m[j][i]) > slack) invalid("distance matrix must be symmetric");
      }
    }
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const bool exhaustive = n <= options.exhaustive_limit;

  auto check_lipschitz = [&](std::size_t i, std::size_t j) {
    const double gap = std::abs(reservoir_distance_[i] - reservoir_distance_[j]);
    if (gap > dist(PointId{i}, PointId{j}) + slack) {
      invalid("distance to reservoir is not 1-Lipschitz at points " + std::to_string(i) + ", " +
              std::to_string(j));
    }
  };
  if (exhaustive) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) check_lipschitz(i, j);
    }
  } else {
    for (std::size_t s = 0; s < options.sampled_checks; ++s) check_lipschitz(pick(rng), pick(rng));
  }

  if (explicit_geometry == nullptr) return;
  const auto& m = explicit_geometry->distances;
  auto check_triangle = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (m[i][k] > m[i][j] + m[j][k] + slack) {
      invalid("triangle inequality fails on points " + std::to_string(i) + ", " +
              std::to_string(j) + ", " + std::to_string(k));
    }
  };
  if (exhaustive) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) check_triangle(i, j, k);
      }
    }
  } else {
    for (std::size_t s = 0; s < options.sampled_checks; ++s) {
      check_triangle(pick(rng), pick(rng), pick(rng));
    }
  }
}

}  // namespace rot

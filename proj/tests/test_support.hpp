#pragma once

// Random instances and brute-force reference computations shared by the
// unit tests and the acceptance binary. Nothing here calls the solvers under
// test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "rot/coupling.hpp"
#include "rot/duality.hpp"
#include "rot/measure.hpp"
#include "rot/metric_pair.hpp"

namespace rot::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Distinct nonzero integer coordinates on the line, A = {0}.
inline PairRef random_line(Rng& rng, std::size_t n) {
  std::vector<double> pool;
  for (int c = -30; c <= 30; ++c) {
    if (c != 0) pool.push_back(c);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(n, pool.size()));
  return MetricPair::real_line(pool);
}

// Integer (birth, death) with death > birth; A is the diagonal.
inline PairRef random_halfplane(Rng& rng, std::size_t n, DiagonalNorm norm = DiagonalNorm::kLInf) {
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < n; ++i) {
    const int b = uniform_int(rng, 0, 20);
    points.emplace_back(b, b + uniform_int(rng, 1, 15));
  }
  return MetricPair::halfplane(std::move(points), norm);
}

inline PairRef random_plane(Rng& rng, std::size_t n) {
  EuclideanGeometry g;
  g.dimension = 2;
  PointReservoir anchors;
  for (int k = 0; k < 3; ++k) anchors.points.push_back({uniform_real(rng, -10, 10), uniform_real(rng, -10, 10)});
  for (std::size_t i = 0; i < n; ++i) {
    g.points.push_back({uniform_real(rng, -10, 10), uniform_real(rng, -10, 10)});
  }
  g.reservoir = std::move(anchors);
  return MetricPair::create(std::move(g));
}

// Shortest-path metric of a random complete graph on n + 1 nodes; the last
// node plays the reservoir.
inline PairRef random_explicit(Rng& rng, std::size_t n) {
  const std::size_t N = n + 1;
  std::vector<std::vector<double>> d(N, std::vector<double>(N, 0.0));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) d[i][j] = d[j][i] = uniform_int(rng, 1, 12);
  }
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  std::vector<double> to_a(n);
  for (std::size_t i = 0; i < n; ++i) {
    to_a[i] = d[i][n];
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = d[i][j];
  }
  return MetricPair::explicit_metric(std::move(dist), std::move(to_a));
}

template <Scalar T>
T random_weight(Rng& rng) {
  if constexpr (ScalarTraits<T>::is_exact) {
    Rational q(uniform_int(rng, 1, 12), uniform_int(rng, 1, 4));
    q.canonicalize();
    return q;
  } else {
    return uniform_real(rng, 0.1, 5.0);
  }
}

// Random atoms on points off A. With unit = true every weight is 1.
template <Scalar T>
BasicMeasure<T> random_measure(Rng& rng, const PairRef& pair, std::size_t max_atoms,
                               bool unit = false, std::size_t min_atoms = 0) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < pair->point_count(); ++i) {
    if (pair->dist_to_reservoir(PointId{i}) > 0) candidates.push_back(i);
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const std::size_t hi = std::min(max_atoms, candidates.size());
  const std::size_t lo = std::min(min_atoms, hi);
  const std::size_t k = static_cast<std::size_t>(uniform_int(rng, static_cast<int>(lo), static_cast<int>(hi)));
  std::vector<WeightedPoint<T>> atoms;
  for (std::size_t i = 0; i < k; ++i) {
    atoms.push_back({PointId{candidates[i]}, unit ? T(1) : random_weight<T>(rng)});
  }
  return BasicMeasure<T>(pair, std::move(atoms));
}

template <Scalar T>
BasicSignedMeasure<T> random_signed(Rng& rng, const PairRef& pair, std::size_t max_atoms) {
  std::vector<WeightedPoint<T>> atoms;
  const std::size_t k = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(max_atoms)));
  for (std::size_t i = 0; i < k; ++i) {
    const PointId x{static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pair->point_count()) - 1))};
    if (!(pair->dist_to_reservoir(x) > 0)) continue;
    T w = random_weight<T>(rng);
    if (uniform_int(rng, 0, 1) == 1) w = -w;
    atoms.push_back({x, w});
  }
  return BasicSignedMeasure<T>(pair, std::move(atoms));
}

// d_p(x,y)^p from the definition, independent of the library's cost tables.
template <Scalar T>
T reference_dp_pow(const MetricPair& pair, double p, PointId x, PointId y) {
  auto pw = [p](const T& v) -> T {
    if constexpr (ScalarTraits<T>::is_exact) {
      T out(1);
      for (int k = 0; k < static_cast<int>(p); ++k) out *= v;
      return out;
    } else {
      return std::pow(v, p);
    }
  };
  const T direct = pw(pair.template dist_as<T>(x, y));
  const T detour = pw(pair.template reservoir_dist_as<T>(x)) + pw(pair.template reservoir_dist_as<T>(y));
  return detour < direct ? detour : direct;
}

template <Scalar T>
T reference_dA_pow(const MetricPair& pair, double p, PointId x) {
  if constexpr (ScalarTraits<T>::is_exact) {
    T out(1);
    for (int k = 0; k < static_cast<int>(p); ++k) out *= pair.exact_dist_to_reservoir(x);
    return out;
  } else {
    return std::pow(pair.dist_to_reservoir(x), p);
  }
}

// Successive shortest paths (Bellman-Ford) on the reservoir network. A
// deliberately plain min-cost-flow used only as a reference.
template <Scalar T>
T ssp_cost(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p) {
  const MetricPair& pair = *mu.pair();
  const std::size_t m = mu.support_size();
  const std::size_t n = nu.support_size();
  const std::size_t S = 0, src = m + 1, sink = m + n + 2, Tn = m + n + 3;
  auto row = [](std::size_t i) { return 1 + i; };
  auto col = [m](std::size_t j) { return m + 2 + j; };

  struct Edge {
    std::size_t to;
    T cap;
    T cost;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> out(Tn + 1);
  auto add = [&](std::size_t u, std::size_t v, const T& cap, const T& c) {
    out[u].push_back(edges.size());
    edges.push_back({v, cap, c});
    out[v].push_back(edges.size());
    edges.push_back({u, T(0), T(-c)});
  };
  T mu_total(0), nu_total(0);
  for (const auto& a : mu.atoms()) mu_total += a.weight;
  for (const auto& a : nu.atoms()) nu_total += a.weight;
  const T big = mu_total + nu_total + 1;
  for (std::size_t i = 0; i < m; ++i) {
    const PointId x = mu.atoms()[i].point;
    add(S, row(i), mu.atoms()[i].weight, T(0));
    add(row(i), sink, big, reference_dA_pow<T>(pair, p, x));
    for (std::size_t j = 0; j < n; ++j) add(row(i), col(j), big, reference_dp_pow<T>(pair, p, x, nu.atoms()[j].point));
  }
  add(S, src, nu_total, T(0));
  add(src, sink, big, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    add(src, col(j), big, reference_dA_pow<T>(pair, p, nu.atoms()[j].point));
    add(col(j), Tn, nu.atoms()[j].weight, T(0));
  }
  add(sink, Tn, mu_total, T(0));

  const T eps = ScalarTraits<T>::is_exact ? T(0) : T(1e-13);
  T total(0);
  while (true) {
    std::vector<std::optional<T>> dist(Tn + 1);
    std::vector<std::size_t> via(Tn + 1, SIZE_MAX);
    dist[S] = T(0);
    for (std::size_t round = 0; round <= Tn; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u <= Tn; ++u) {
        if (!dist[u]) continue;
        for (std::size_t e : out[u]) {
          if (!(edges[e].cap > eps)) continue;
          const T cand = *dist[u] + edges[e].cost;
          auto& dv = dist[edges[e].to];
          if (!dv || cand < *dv - eps) {
            dv = cand;
            via[edges[e].to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!dist[Tn]) break;
    T push = big;
    for (std::size_t v = Tn; v != S; v = edges[via[v] ^ 1].to) push = std::min(push, edges[via[v]].cap);
    for (std::size_t v = Tn; v != S; v = edges[via[v] ^ 1].to) {
      edges[via[v]].cap -= push;
      edges[via[v] ^ 1].cap += push;
    }
    total += push * *dist[Tn];
  }
  return total;
}

// (mu v nu)(E) from the partition formula sup_{E1 u E2 = E} mu(E1) + nu(E2),
// evaluated on every subset E of the joint support (at most 12 points).
template <Scalar T>
bool sup_matches_partition_formula(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu,
                                   const BasicMeasure<T>& candidate) {
  std::vector<PointId> pts = mu.support();
  for (const auto& a : nu.atoms()) pts.push_back(a.point);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t k = pts.size();
  for (std::uint32_t E = 0; E < (1u << k); ++E) {
    std::optional<T> best;
    for (std::uint32_t E1 = E;; E1 = (E1 - 1) & E) {
      T v(0);
      for (std::size_t i = 0; i < k; ++i) {
        if (E1 >> i & 1u) v += mu.weight(pts[i]);
        else if (E >> i & 1u) v += nu.weight(pts[i]);
      }
      if (!best || v > *best) best = v;
      if (E1 == 0) break;
    }
    T got(0);
    for (std::size_t i = 0; i < k; ++i) {
      if (E >> i & 1u) got += candidate.weight(pts[i]);
    }
    if (ScalarTraits<T>::is_exact ? got != *best : std::abs(to_double(T(got - *best))) > 1e-12) {
      return false;
    }
  }
  return true;
}

// Random feasible coupling of random marginals: each direct flow takes a
// random share of what both endpoints have left; leftovers go via A.
template <Scalar T>
BasicCoupling<T> random_coupling(Rng& rng, const PairRef& pair, std::size_t max_atoms) {
  const BasicMeasure<T> mu = random_measure<T>(rng, pair, max_atoms);
  const BasicMeasure<T> nu = random_measure<T>(rng, pair, max_atoms);
  std::vector<T> left_mu, left_nu;
  for (const auto& a : mu.atoms()) left_mu.push_back(a.weight);
  for (const auto& a : nu.atoms()) left_nu.push_back(a.weight);
  BasicCoupling<T> pi(pair);
  for (std::size_t i = 0; i < left_mu.size(); ++i) {
    for (std::size_t j = 0; j < left_nu.size(); ++j) {
      if (uniform_int(rng, 0, 2) != 0) continue;
      T w = std::min(left_mu[i], left_nu[j]);
      if constexpr (ScalarTraits<T>::is_exact) {
        w *= canonical(Rational(uniform_int(rng, 0, 4), 4));
      } else {
        w *= uniform_real(rng, 0.0, 1.0);
      }
      pi.add_direct(mu.atoms()[i].point, nu.atoms()[j].point, w);
      left_mu[i] -= w;
      left_nu[j] -= w;
    }
  }
  for (std::size_t i = 0; i < left_mu.size(); ++i) {
    if (left_mu[i] > 0) pi.add_to_reservoir(mu.atoms()[i].point, left_mu[i]);
  }
  for (std::size_t j = 0; j < left_nu.size(); ++j) {
    if (left_nu[j] > 0) pi.add_from_reservoir(nu.atoms()[j].point, left_nu[j]);
  }
  return pi;
}

// h(x,y) = a*dbar(x,y) + b*|d_A(x) - d_A(y)| + c*d_A(x), which vanishes on
// A x A; its reservoir columns are h(x,A) = (a+b+c) d_A(x) and
// h(A,y) = (a+b) d_A(y).
template <Scalar T>
PairCost<T> random_consistent_cost(Rng& rng, const PairRef& pair) {
  const T a = random_weight<T>(rng);
  const T b = uniform_int(rng, 0, 1) ? random_weight<T>(rng) : T(0);
  const T c = uniform_int(rng, 0, 1) ? random_weight<T>(rng) : T(0);
  const std::size_t n = pair->point_count();
  PairCost<T> h;
  h.point_count = n;
  auto dA = [&](std::size_t x) { return pair->template reservoir_dist_as<T>(PointId{x}); };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const T dbar = reference_dp_pow<T>(*pair, 1.0, PointId{x}, PointId{y});
      T spread = dA(x) - dA(y);
      if (spread < 0) spread = -spread;
      h.matrix.push_back(a * dbar + b * spread + c * dA(x));
    }
    h.to_reservoir.push_back((a + b + c) * dA(x));
    h.from_reservoir.push_back((a + b) * dA(x));
  }
  return h;
}

inline bool near(double a, double b, double abs_tol, double rel_tol = 0.0) {
  return std::abs(a - b) <= abs_tol + rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace rot::testing

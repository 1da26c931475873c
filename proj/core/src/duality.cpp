#include "rot/duality.hpp"

#include <algorithm>
#include <string>

#include "rot/dense_simplex.hpp"

namespace rot {
namespace {

template <Scalar T>
T dbar_as(const MetricPair& pair, PointId x, PointId y) {
  return pair.template dp_cost_pow<T>(1.0, x, y);
}

template <Scalar T>
std::vector<PointId> union_support(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  std::vector<PointId> points = mu.support();
  for (const auto& atom : nu.atoms()) points.push_back(atom.point);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

template <Scalar T>
T tolerance_for(const T& primal, double relative) {
  if constexpr (ScalarTraits<T>::is_exact) {
    return T(0);
  } else {
    return relative * std::max(1.0, std::abs(primal));
  }
}

// Fills in gap and enforces weak duality, feasibility and the gap bound.
template <Scalar T>
void certify(DualCertificate<T>& cert, double violation, const char* what) {
  cert.gap = cert.primal - cert.value;
  if (violation > kFeasibilityTolerance) {
    throw SolverError(std::string(what) + ": dual potential infeasible by " +
                      std::to_string(violation));
  }
  if (cert.gap < -tolerance_for(cert.primal, kFeasibilityTolerance)) {
    throw SolverError(std::string(what) + ": weak duality violated, gap " +
                      std::to_string(to_double(cert.gap)));
  }
  if (cert.gap > tolerance_for(cert.primal, kGapTolerance)) {
    throw SolverError(std::string(what) + ": duality gap " + std::to_string(to_double(cert.gap)) +
                      " exceeds tolerance");
  }
}

template <Scalar T>
T potential_objective(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, const Potential<T>& f,
                      const Potential<T>& g) {
  return integrate(mu, f) + integrate(nu, g);
}

}  // namespace

template <Scalar T>
PairCost<T> PairCost<T>::dbar(const MetricPair& pair) {
  PairCost<T> h;
  const std::size_t n = pair.point_count();
  h.point_count = n;
  h.matrix.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) h.matrix.push_back(dbar_as<T>(pair, PointId{x}, PointId{y}));
  }
  for (std::size_t x = 0; x < n; ++x) {
    h.to_reservoir.push_back(pair.template reservoir_dist_as<T>(PointId{x}));
  }
  h.from_reservoir = h.to_reservoir;
  return h;
}

template <Scalar T>
DualCertificate<T> kr_dual(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  const MetricPair& pair = *mu.pair();
  const std::vector<PointId> points = union_support(mu, nu);
  const std::size_t s = points.size();

  // The Lipschitz LP has s^2 rows and s columns; it is solved through its
  // standard-form dual (a transshipment over S with reservoir legs), whose
  // simplex multipliers are the potential f.
  //   columns: (x,y) for x != y, then u_x (f(x) <= d_A), then l_x (-f(x) <= d_A)
  StandardFormLp<T> lp(s, s * (s - (s > 0 ? 1 : 0)) + 2 * s);
  std::size_t col = 0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      if (i == j) continue;
      lp.c[col] = dbar_as<T>(pair, points[i], points[j]);
      lp.at(i, col) = T(1);
      lp.at(j, col) = T(-1);
      ++col;
    }
  }
  for (std::size_t i = 0; i < s; ++i) {
    const T d_a = pair.template reservoir_dist_as<T>(points[i]);
    lp.c[col] = d_a;
    lp.at(i, col++) = T(1);
    lp.c[col] = d_a;
    lp.at(i, col++) = T(-1);
    lp.b[i] = mu.weight(points[i]) - nu.weight(points[i]);
  }
  const LpSolution<T> solution = solve_lp(lp);
  if (solution.status != LpStatus::kOptimal) {
    throw SolverError("dense simplex failed on the Kantorovich-Rubinstein LP");
  }

  DualCertificate<T> cert;
  for (std::size_t i = 0; i < s; ++i) cert.potential_f.emplace(points[i], solution.duals[i]);
  cert.value = integrate(mu, cert.potential_f) - integrate(nu, cert.potential_f);
  cert.primal = solve_w1(mu, nu).cost;
  certify(cert, kr_violation(pair, cert.potential_f), "kr_dual");
  return cert;
}

template <Scalar T>
DualCertificate<T> kr_dual_from_network(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  const MetricPair& pair = *mu.pair();
  std::vector<T> row_mass;
  std::vector<T> col_mass;
  for (const auto& atom : mu.atoms()) row_mass.push_back(atom.weight);
  for (const auto& atom : nu.atoms()) col_mass.push_back(atom.weight);
  const TransportSolution<T> solution =
      solve_transport(row_mass, col_mass, metric_costs(mu, nu, 1.0));

  Potential<T> g;
  for (std::size_t j = 0; j < nu.support_size(); ++j) {
    g.emplace(nu.atoms()[j].point, solution.col_potential[j]);
  }
  DualCertificate<T> cert;
  cert.potential_f = kr_conjugate(pair, union_support(mu, nu), g);
  cert.value = integrate(mu, cert.potential_f) - integrate(nu, cert.potential_f);
  cert.primal = solution.cost;
  certify(cert, kr_violation(pair, cert.potential_f), "kr_dual_from_network");
  return cert;
}

template <Scalar T>
DualCertificate<T> mk_dual(const PairCost<T>& h, const BasicMeasure<T>& mu,
                           const BasicMeasure<T>& nu) {
  check_same_pair(mu.pair(), nu.pair());
  const std::size_t n_points = mu.pair()->point_count();
  if (h.point_count != n_points || h.matrix.size() != n_points * n_points) {
    throw InvalidArgument("cost matrix does not cover the metric pair's points");
  }
  if (h.to_reservoir.size() != n_points || h.from_reservoir.size() != n_points) {
    throw InvalidArgument("cost is missing its reservoir columns");
  }
  for (const auto* values : {&h.matrix, &h.to_reservoir, &h.from_reservoir}) {
    for (const T& v : *values) {
      if (!ScalarTraits<T>::is_finite(v) || v < 0) {
        throw InvalidArgument("cost entries must be finite and nonnegative");
      }
    }
  }

  const std::size_t m = mu.support_size();
  const std::size_t n = nu.support_size();
  TransportCosts<T> costs;
  costs.rows = m;
  costs.cols = n;
  for (const auto& x : mu.atoms()) {
    costs.to_reservoir.push_back(h.to_reservoir[x.point.index]);
    for (const auto& y : nu.atoms()) costs.direct.push_back(h(x.point, y.point));
  }
  for (const auto& y : nu.atoms()) costs.from_reservoir.push_back(h.from_reservoir[y.point.index]);

  // Dual of the MK program: the transportation LP with reservoir slacks.
  StandardFormLp<T> lp(m + n, m * n + m + n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t col = i * n + j;
      lp.c[col] = costs.direct[col];
      lp.at(i, col) = T(1);
      lp.at(m + j, col) = T(1);
    }
    lp.c[m * n + i] = costs.to_reservoir[i];
    lp.at(i, m * n + i) = T(1);
    lp.b[i] = mu.atoms()[i].weight;
  }
  for (std::size_t j = 0; j < n; ++j) {
    lp.c[m * n + m + j] = costs.from_reservoir[j];
    lp.at(m + j, m * n + m + j) = T(1);
    lp.b[m + j] = nu.atoms()[j].weight;
  }
  const LpSolution<T> solution = solve_lp(lp);
  if (solution.status != LpStatus::kOptimal) {
    throw SolverError("dense simplex failed on the Monge-Kantorovich LP");
  }

  DualCertificate<T> cert;
  Potential<T> g;
  for (std::size_t i = 0; i < m; ++i) cert.potential_f.emplace(mu.atoms()[i].point, solution.duals[i]);
  for (std::size_t j = 0; j < n; ++j) g.emplace(nu.atoms()[j].point, solution.duals[m + j]);
  cert.value = potential_objective(mu, nu, cert.potential_f, g);

  std::vector<T> row_mass;
  std::vector<T> col_mass;
  for (const auto& atom : mu.atoms()) row_mass.push_back(atom.weight);
  for (const auto& atom : nu.atoms()) col_mass.push_back(atom.weight);
  cert.primal = solve_transport(row_mass, col_mass, costs).cost;
  const double violation = mk_violation(h, cert.potential_f, g);
  cert.potential_g = std::move(g);
  certify(cert, violation, "mk_dual");
  return cert;
}

template <Scalar T>
T op_norm(const BasicSignedMeasure<T>& sigma) {
  const JordanParts<T> parts = jordan(sigma);
  return kr_dual(parts.positive, parts.negative).value;
}

template <Scalar T>
double kr_violation(const MetricPair& pair, const Potential<T>& f) {
  double worst = 0.0;
  for (const auto& [x, fx] : f) {
    const T d_a = pair.template reservoir_dist_as<T>(x);
    worst = std::max(worst, to_double(T(abs_value(fx) - d_a)));
    for (const auto& [y, fy] : f) {
      if (x == y) continue;
      worst = std::max(worst, to_double(T(fx - fy - dbar_as<T>(pair, x, y))));
    }
  }
  return worst;
}

template <Scalar T>
double mk_violation(const PairCost<T>& h, const Potential<T>& f, const Potential<T>& g) {
  double worst = 0.0;
  for (const auto& [x, fx] : f) {
    worst = std::max(worst, to_double(T(fx - h.to_reservoir[x.index])));
    for (const auto& [y, gy] : g) worst = std::max(worst, to_double(T(fx + gy - h(x, y))));
  }
  for (const auto& [y, gy] : g) worst = std::max(worst, to_double(T(gy - h.from_reservoir[y.index])));
  return worst;
}

template <Scalar T>
Potential<T> kr_conjugate(const MetricPair& pair, const std::vector<PointId>& points,
                          const Potential<T>& g) {
  Potential<T> out;
  for (PointId x : points) {
    T best = pair.template reservoir_dist_as<T>(x);
    for (const auto& [y, gy] : g) {
      T candidate = dbar_as<T>(pair, x, y) - gy;
      if (candidate < best) best = std::move(candidate);
    }
    out.emplace(x, std::move(best));
  }
  return out;
}

#define ROT_INSTANTIATE_DUALITY(T)                                                             \
  template struct PairCost<T>;                                                                 \
  template DualCertificate<T> kr_dual(const BasicMeasure<T>&, const BasicMeasure<T>&);         \
  template DualCertificate<T> kr_dual_from_network(const BasicMeasure<T>&,                     \
                                                   const BasicMeasure<T>&);                    \
  template DualCertificate<T> mk_dual(const PairCost<T>&, const BasicMeasure<T>&,              \
                                      const BasicMeasure<T>&);                                 \
  template T op_norm(const BasicSignedMeasure<T>&);                                            \
  template double kr_violation(const MetricPair&, const Potential<T>&);                        \
  template double mk_violation(const PairCost<T>&, const Potential<T>&, const Potential<T>&);  \
  template Potential<T> kr_conjugate(const MetricPair&, const std::vector<PointId>&,           \
                                     const Potential<T>&);

ROT_INSTANTIATE_DUALITY(double)
ROT_INSTANTIATE_DUALITY(Rational)

}  // namespace rot

#include "rot/solver.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "rot/dense_simplex.hpp"
#include "rot/network_simplex.hpp"

namespace rot {
namespace {

double root(double cost, double p) {
  if (p == 1.0) return cost;
  if (cost <= 0.0) return 0.0;
  return std::pow(cost, 1.0 / p);
}

template <Scalar T>
void check_costs(const TransportCosts<T>& costs) {
  if (costs.direct.size() != costs.rows * costs.cols || costs.to_reservoir.size() != costs.rows ||
      costs.from_reservoir.size() != costs.cols) {
    throw InvalidArgument("transport cost table has inconsistent dimensions");
  }
}

template <Scalar T>
std::vector<T> masses(const BasicMeasure<T>& mu) {
  std::vector<T> out;
  out.reserve(mu.support_size());
  for (const auto& atom : mu.atoms()) out.push_back(atom.weight);
  return out;
}

}  // namespace

template <Scalar T>
TransportSolution<T> solve_transport(const std::vector<T>& row_mass,
                                     const std::vector<T>& col_mass,
                                     const TransportCosts<T>& costs,
                                     const SolveOptions& options) {
  check_costs(costs);
  if (row_mass.size() != costs.rows || col_mass.size() != costs.cols) {
    throw InvalidArgument("mass vectors do not match the cost table");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = costs.rows;
  const std::size_t n = costs.cols;
  const std::size_t source_res = m;
  const std::size_t sink_res = m + n + 1;
  auto col_node = [m](std::size_t j) { return m + 1 + j; };

  NetworkSimplex<T> network(m + n + 2);
  network.set_pivot_limit(options.pivot_limit);
  T row_total(0);
  T col_total(0);
  for (std::size_t i = 0; i < m; ++i) {
    network.set_supply(i, row_mass[i]);
    row_total += row_mass[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    network.set_supply(col_node(j), T(-col_mass[j]));
    col_total += col_mass[j];
  }
  network.set_supply(source_res, col_total);
  network.set_supply(sink_res, T(-row_total));

  // Reservoir arcs first, so equal reduced costs favour the reservoir route.
  for (std::size_t i = 0; i < m; ++i) network.add_arc(i, sink_res, costs.to_reservoir[i]);
  for (std::size_t j = 0; j < n; ++j) network.add_arc(source_res, col_node(j), costs.from_reservoir[j]);
  network.add_arc(source_res, sink_res, T(0));
  const std::size_t first_direct = network.arc_count();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) network.add_arc(i, col_node(j), costs.direct[i * n + j]);
  }

  const FlowStatus status = network.run();
  switch (status) {
    case FlowStatus::kOptimal:
      break;
    case FlowStatus::kInfeasible:
      throw SolverError("transport network is infeasible");
    case FlowStatus::kUnbounded:
      throw SolverError("transport network is unbounded");
    case FlowStatus::kPivotLimit:
      throw SolverError("network simplex hit its pivot limit");
  }

  TransportSolution<T> out;
  out.cost = network.total_cost();
  out.to_reservoir_flow.reserve(m);
  out.from_reservoir_flow.reserve(n);
  for (std::size_t i = 0; i < m; ++i) out.to_reservoir_flow.push_back(network.flow(i));
  for (std::size_t j = 0; j < n; ++j) out.from_reservoir_flow.push_back(network.flow(m + j));
  out.direct_flow.reserve(m * n);
  for (std::size_t a = first_direct; a < first_direct + m * n; ++a) {
    out.direct_flow.push_back(network.flow(a));
  }
  const T& y_source = network.potential(source_res);
  const T& y_sink = network.potential(sink_res);
  for (std::size_t i = 0; i < m; ++i) out.row_potential.push_back(network.potential(i) - y_sink);
  for (std::size_t j = 0; j < n; ++j) {
    out.col_potential.push_back(y_source - network.potential(col_node(j)));
  }
  out.stats.pivots = network.pivots();
  out.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

template <Scalar T>
TransportCosts<T> metric_costs(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p,
                               DirectCost direct_cost) {
  check_same_pair(mu.pair(), nu.pair());
  MetricPair::check_exponent(p);
  const MetricPair& pair = *mu.pair();
  TransportCosts<T> costs;
  costs.rows = mu.support_size();
  costs.cols = nu.support_size();
  for (const auto& x : mu.atoms()) {
    costs.to_reservoir.push_back(power(pair.template reservoir_dist_as<T>(x.point), p));
  }
  for (const auto& y : nu.atoms()) {
    costs.from_reservoir.push_back(power(pair.template reservoir_dist_as<T>(y.point), p));
  }
  costs.direct.reserve(costs.rows * costs.cols);
  for (const auto& x : mu.atoms()) {
    for (const auto& y : nu.atoms()) {
      if (direct_cost == DirectCost::kRelative) {
        costs.direct.push_back(pair.template dp_cost_pow<T>(p, x.point, y.point));
      } else {
        costs.direct.push_back(power(pair.template dist_as<T>(x.point, y.point), p));
      }
    }
  }
  return costs;
}

template <Scalar T>
OTResult<T> solve_wp(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p,
                     const SolveOptions& options) {
  const TransportCosts<T> costs = metric_costs(mu, nu, p, options.direct_cost);
  const TransportSolution<T> solution = solve_transport(masses(mu), masses(nu), costs, options);

  const MetricPair& pair = *mu.pair();
  BasicCoupling<T> coupling(mu.pair());
  const std::size_t n = costs.cols;
  for (std::size_t i = 0; i < costs.rows; ++i) {
    const PointId x = mu.atoms()[i].point;
    if (solution.to_reservoir_flow[i] > 0) coupling.add_to_reservoir(x, solution.to_reservoir_flow[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const T& w = solution.direct_flow[i * n + j];
      if (!(w > 0)) continue;
      const PointId y = nu.atoms()[j].point;
      // A direct leg no cheaper than its detour through A is recorded as
      // the detour; the cost is unchanged.
      const T via_reservoir = costs.to_reservoir[i] + costs.from_reservoir[j];
      if (x != y && !(power(pair.template dist_as<T>(x, y), p) < via_reservoir)) {
        coupling.add_to_reservoir(x, w);
        coupling.add_from_reservoir(y, w);
      } else {
        coupling.add_direct(x, y, w);
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (solution.from_reservoir_flow[j] > 0) {
      coupling.add_from_reservoir(nu.atoms()[j].point, solution.from_reservoir_flow[j]);
    }
  }

  T optimal = solution.cost;
  if (optimal < 0) optimal = T(0);
  return OTResult<T>{root(to_double(optimal), p), optimal, std::move(coupling), p, solution.stats};
}

template <Scalar T>
T kr_norm(const BasicSignedMeasure<T>& sigma) {
  const JordanParts<T> parts = jordan(sigma);
  return solve_w1(parts.positive, parts.negative).cost;
}

template <Scalar T>
OracleResult<T> oracle_lp(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p) {
  check_same_pair(mu.pair(), nu.pair());
  const std::size_t m = mu.support_size();
  const std::size_t n = nu.support_size();
  if (m * n > kOracleLpMaxProduct) {
    throw InvalidArgument("oracle_lp instance too large: support product " +
                          std::to_string(m * n) + " exceeds " +
                          std::to_string(kOracleLpMaxProduct));
  }
  const TransportCosts<T> costs = metric_costs(mu, nu, p);

  // Columns: direct (i,j) row-major, then x_i -> A, then A -> y_j.
  // Rows: one marginal constraint per atom of mu, then per atom of nu.
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
    throw SolverError("dense simplex failed on the transportation LP");
  }
  T optimal = solution.objective;
  if (optimal < 0) optimal = T(0);
  return {optimal, root(to_double(optimal), p)};
}

template <Scalar T>
OracleResult<T> oracle_enumerate(const BasicMeasure<T>& mu, const BasicMeasure<T>& nu, double p) {
  check_same_pair(mu.pair(), nu.pair());
  for (const auto* measure : {&mu, &nu}) {
    for (const auto& atom : measure->atoms()) {
      if (atom.weight != 1) throw InvalidArgument("oracle_enumerate needs unit weights");
    }
    if (measure->support_size() > kOracleEnumerateMaxAtoms) {
      throw InvalidArgument("oracle_enumerate instance too large");
    }
  }
  const TransportCosts<T> costs = metric_costs(mu, nu, p);
  const std::size_t m = costs.rows;
  const std::size_t n = costs.cols;

  // Unmatched columns are charged through `open_cols_cost`, which tracks the
  // reservoir cost of every column not yet matched.
  T open_cols_cost(0);
  for (const T& c : costs.from_reservoir) open_cols_cost += c;
  std::vector<bool> used(n, false);
  bool have_best = false;
  T best(0);

  auto search = [&](auto&& self, std::size_t row, const T& partial) -> void {
    if (row == m) {
      T total = partial + open_cols_cost;
      if (!have_best || total < best) {
        best = std::move(total);
        have_best = true;
      }
      return;
    }
    self(self, row + 1, T(partial + costs.to_reservoir[row]));
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      open_cols_cost -= costs.from_reservoir[j];
      self(self, row + 1, T(partial + costs.direct[row * n + j]));
      open_cols_cost += costs.from_reservoir[j];
      used[j] = false;
    }
  };
  search(search, 0, T(0));
  return {best, root(to_double(best), p)};
}

#define ROT_INSTANTIATE_SOLVER(T)                                                             \
  template TransportSolution<T> solve_transport(const std::vector<T>&, const std::vector<T>&, \
                                                const TransportCosts<T>&, const SolveOptions&); \
  template TransportCosts<T> metric_costs(const BasicMeasure<T>&, const BasicMeasure<T>&,      \
                                          double, DirectCost);                                 \
  template OTResult<T> solve_wp(const BasicMeasure<T>&, const BasicMeasure<T>&, double,        \
                                const SolveOptions&);                                          \
  template T kr_norm(const BasicSignedMeasure<T>&);                                            \
  template OracleResult<T> oracle_lp(const BasicMeasure<T>&, const BasicMeasure<T>&, double);  \
  template OracleResult<T> oracle_enumerate(const BasicMeasure<T>&, const BasicMeasure<T>&, double);

ROT_INSTANTIATE_SOLVER(double)
ROT_INSTANTIATE_SOLVER(Rational)

}  // namespace rot

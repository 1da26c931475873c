#pragma once

// Primal network simplex for uncapacitated min-cost flow with balanced node
// supplies.
//
// The basis is kept as a strongly feasible spanning tree rooted at an
// artificial node (every zero-flow tree arc points away from the root), which
// rules out cycling under degenerate pivots. Pricing is full Dantzig: the
// entering arc has the most negative reduced cost, ties going to the lowest
// arc index. The leaving arc is the last blocking arc met when walking the
// pivot cycle from its apex in the direction of the entering arc.

#include <cstddef>
#include <vector>

#include "rot/scalar.hpp"

namespace rot {

enum class FlowStatus { kOptimal, kInfeasible, kUnbounded, kPivotLimit };

template <Scalar T>
class NetworkSimplex {
 public:
  explicit NetworkSimplex(std::size_t node_count);

  // Returns the arc index (dense, in insertion order).
  std::size_t add_arc(std::size_t from, std::size_t to, const T& cost);
  // Positive for sources, negative for sinks; supplies must sum to zero.
  void set_supply(std::size_t node, const T& supply);

  // Reduced costs above -tolerance are treated as nonnegative. Zero for the
  // exact scalar.
  void set_tolerance(const T& tolerance) { tolerance_ = tolerance; }
  void set_pivot_limit(std::size_t limit) { pivot_limit_ = limit; }

  FlowStatus run();

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t arc_count() const noexcept { return real_arcs_; }
  const T& flow(std::size_t arc) const { return flow_[arc]; }
  // Dual prices y with cost(u,v) - y[u] + y[v] >= 0 on every arc, zero on
  // basic arcs.
  const T& potential(std::size_t node) const { return potential_[node]; }
  T reduced_cost(std::size_t arc) const;
  T total_cost() const;
  std::size_t pivots() const noexcept { return pivots_; }

 private:
  void initialize_tree();
  void refresh_tree();
  std::size_t select_entering() const;
  bool pivot(std::size_t entering);

  std::size_t node_count_;
  std::size_t real_arcs_ = 0;
  std::vector<std::size_t> source_;
  std::vector<std::size_t> target_;
  std::vector<T> cost_;
  std::vector<T> flow_;
  std::vector<T> supply_;

  // Tree over node_count_ + 1 nodes; the root is node_count_.
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> parent_arc_;
  std::vector<std::size_t> depth_;
  std::vector<T> potential_;

  T tolerance_ = ScalarTraits<T>::tolerance();
  std::size_t pivot_limit_ = 10'000'000;
  std::size_t pivots_ = 0;
};

}  // namespace rot

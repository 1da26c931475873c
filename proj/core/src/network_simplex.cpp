#include "rot/network_simplex.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace rot {

template <Scalar T>
NetworkSimplex<T>::NetworkSimplex(std::size_t node_count)
    : node_count_(node_count), supply_(node_count, T(0)) {}

template <Scalar T>
std::size_t NetworkSimplex<T>::add_arc(std::size_t from, std::size_t to, const T& cost) {
  if (from >= node_count_ || to >= node_count_) throw OutOfRange("arc endpoint out of range");
  if (!ScalarTraits<T>::is_finite(cost)) throw InvalidArgument("arc cost must be finite");
  source_.push_back(from);
  target_.push_back(to);
  cost_.push_back(cost);
  flow_.push_back(T(0));
  return real_arcs_++;
}

template <Scalar T>
void NetworkSimplex<T>::set_supply(std::size_t node, const T& supply) {
  if (node >= node_count_) throw OutOfRange("node out of range");
  if (!ScalarTraits<T>::is_finite(supply)) throw InvalidArgument("supply must be finite");
  supply_[node] = supply;
}

template <Scalar T>
T NetworkSimplex<T>::reduced_cost(std::size_t arc) const {
  return cost_[arc] - potential_[source_[arc]] + potential_[target_[arc]];
}

template <Scalar T>
T NetworkSimplex<T>::total_cost() const {
  T sum(0);
  for (std::size_t a = 0; a < real_arcs_; ++a) sum += cost_[a] * flow_[a];
  return sum;
}

template <Scalar T>
void NetworkSimplex<T>::initialize_tree() {
  // Artificial cost exceeding any simple path cost, so artificial arcs carry
  // flow at optimality only if the instance is infeasible.
  T largest(0);
  for (std::size_t a = 0; a < real_arcs_; ++a) largest = std::max(largest, abs_value(cost_[a]));
  const T artificial_cost = (largest + T(1)) * T(static_cast<long>(node_count_ + 1));

  const std::size_t root = node_count_;
  source_.resize(real_arcs_);
  target_.resize(real_arcs_);
  cost_.resize(real_arcs_);
  flow_.assign(real_arcs_, T(0));
  parent_.assign(node_count_ + 1, root);
  parent_arc_.assign(node_count_ + 1, 0);
  for (std::size_t v = 0; v < node_count_; ++v) {
    const std::size_t arc = source_.size();
    if (supply_[v] > 0) {
      source_.push_back(v);
      target_.push_back(root);
      flow_.push_back(supply_[v]);
    } else {
      source_.push_back(root);
      target_.push_back(v);
      flow_.push_back(T(-supply_[v]));
    }
    cost_.push_back(artificial_cost);
    parent_arc_[v] = arc;
  }
  refresh_tree();
}

template <Scalar T>
void NetworkSimplex<T>::refresh_tree() {
  const std::size_t root = node_count_;
  std::vector<std::vector<std::size_t>> children(node_count_ + 1);
  for (std::size_t v = 0; v < node_count_; ++v) children[parent_[v]].push_back(v);
  depth_.assign(node_count_ + 1, 0);
  potential_.assign(node_count_ + 1, T(0));
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : children[u]) {
      const std::size_t arc = parent_arc_[v];
      depth_[v] = depth_[u] + 1;
      if (source_[arc] == v) {
        potential_[v] = cost_[arc] + potential_[u];
      } else {
        potential_[v] = potential_[u] - cost_[arc];
      }
      stack.push_back(v);
    }
  }
}

template <Scalar T>
std::size_t NetworkSimplex<T>::select_entering() const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  T best_rc = -tolerance_;
  for (std::size_t a = 0; a < source_.size(); ++a) {
    const std::size_t u = source_[a];
    const std::size_t v = target_[a];
    if ((parent_[u] == v && parent_arc_[u] == a) || (parent_[v] == u && parent_arc_[v] == a)) {
      continue;
    }
    T rc = cost_[a] - potential_[u] + potential_[v];
    if (rc < best_rc) {
      best_rc = std::move(rc);
      best = a;
    }
  }
  return best;
}

template <Scalar T>
bool NetworkSimplex<T>::pivot(std::size_t entering) {
  const std::size_t k = source_[entering];
  const std::size_t l = target_[entering];

  // Nodes whose parent arc lies on the cycle, from each endpoint up to the
  // apex.
  std::vector<std::size_t> k_side;
  std::vector<std::size_t> l_side;
  std::size_t a = k;
  std::size_t b = l;
  while (a != b) {
    if (depth_[a] >= depth_[b]) {
      k_side.push_back(a);
      a = parent_[a];
    } else {
      l_side.push_back(b);
      b = parent_[b];
    }
  }

  // Walk from the apex down to k, then from l up to the apex. On the way
  // down an arc is backward when it points up (child -> parent); on the way
  // up when it points down.
  bool found = false;
  bool leaving_on_k_side = false;
  std::size_t leaving_node = 0;
  T theta(0);
  auto consider = [&](std::size_t node, bool on_k_side) {
    const std::size_t arc = parent_arc_[node];
    const bool backward = on_k_side ? source_[arc] == node : target_[arc] == node;
    if (!backward) return;
    if (!found || flow_[arc] <= theta) {
      if (!found || flow_[arc] < theta) theta = flow_[arc];
      found = true;
      leaving_node = node;
      leaving_on_k_side = on_k_side;
    }
  };
  for (auto it = k_side.rbegin(); it != k_side.rend(); ++it) consider(*it, true);
  for (std::size_t node : l_side) consider(node, false);
  if (!found) return false;

  if (theta != 0) {
    flow_[entering] += theta;
    for (std::size_t node : k_side) {
      const std::size_t arc = parent_arc_[node];
      if (source_[arc] == node) {
        flow_[arc] -= theta;
      } else {
        flow_[arc] += theta;
      }
    }
    for (std::size_t node : l_side) {
      const std::size_t arc = parent_arc_[node];
      if (target_[arc] == node) {
        flow_[arc] -= theta;
      } else {
        flow_[arc] += theta;
      }
    }
  }
  flow_[parent_arc_[leaving_node]] = T(0);

  // Re-hang the subtree cut off by the leaving arc from the entering arc.
  std::size_t v = leaving_on_k_side ? k : l;
  std::size_t new_parent = leaving_on_k_side ? l : k;
  std::size_t new_arc = entering;
  while (true) {
    const std::size_t old_parent = parent_[v];
    const std::size_t old_arc = parent_arc_[v];
    parent_[v] = new_parent;
    parent_arc_[v] = new_arc;
    if (v == leaving_node) break;
    new_parent = v;
    new_arc = old_arc;
    v = old_parent;
  }
  refresh_tree();
  return true;
}

template <Scalar T>
FlowStatus NetworkSimplex<T>::run() {
  pivots_ = 0;
  initialize_tree();

  T largest_cost(1);
  T total_supply(0);
  for (std::size_t arc = 0; arc < real_arcs_; ++arc) {
    largest_cost = std::max(largest_cost, abs_value(cost_[arc]));
  }
  for (const T& s : supply_) total_supply += abs_value(s);
  const T base_tolerance = tolerance_;
  tolerance_ = base_tolerance * largest_cost;

  FlowStatus status = FlowStatus::kOptimal;
  while (true) {
    const std::size_t entering = select_entering();
    if (entering == std::numeric_limits<std::size_t>::max()) break;
    if (pivots_ >= pivot_limit_) {
      status = FlowStatus::kPivotLimit;
      break;
    }
    if (!pivot(entering)) {
      status = FlowStatus::kUnbounded;
      break;
    }
    ++pivots_;
  }
  tolerance_ = base_tolerance;
  if (status != FlowStatus::kOptimal) return status;

  const T feasibility = base_tolerance * std::max(T(1), total_supply) * T(1000);
  for (std::size_t arc = real_arcs_; arc < source_.size(); ++arc) {
    if (flow_[arc] > feasibility) return FlowStatus::kInfeasible;
  }
  return FlowStatus::kOptimal;
}

template class NetworkSimplex<double>;
template class NetworkSimplex<Rational>;

}  // namespace rot

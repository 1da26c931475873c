#pragma once

// File formats for the rot tool.
//
// Instance file (JSON):
//   {
//     "geometry": <geometry>,
//     "measures": { "<name>": [[point, weight], ...], ... },
//     "cost": { "matrix": [[...]], "to_reservoir": [...], "from_reservoir": [...] }   (optional)
//   }
//
// <geometry> is one of
//   {"kind": "euclidean", "dimension": k, "points": [[x1..xk], ...],
//    "reservoir": {"points": [[...], ...]} | {"normal": [...], "offset": c}}
//   {"kind": "halfplane", "norm": "linf" | "l2", "points": [[birth, death], ...]}
//   {"kind": "explicit", "distances": [[...], ...], "reservoir_distances": [...]}
//
// A weight is a JSON number, a string "p/q", or an integer pair [p, q].
// Measures may also be written as {"atoms": [[point, weight], ...]}, which is
// the form the tool emits.
//
// Couplings serialize as {"edges": [{"kind": "direct" | "to_res" | "from_res",
// "from": i | null, "to": j | null, "w": w}, ...]} sorted by (kind, from, to).
//
// Persistence diagrams may be read from CSV with columns birth,death[,weight]
// (weight defaults to 1).

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rot/coupling.hpp"
#include "rot/duality.hpp"
#include "rot/measure.hpp"
#include "rot/metric_pair.hpp"

namespace rot::io {

using json = nlohmann::json;

// Malformed or schema-invalid input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PairRef metric_pair_from_json(const json& geometry, const ValidationOptions& options = {});

template <Scalar T>
T weight_from_json(const json& value);

template <Scalar T>
json weight_to_json(const T& value);

// Raw (point, weight) list; accepts [[i, w], ...] or {"atoms": [...]}.
// Point indices are range-checked; weights are not sign-checked.
template <Scalar T>
std::vector<WeightedPoint<T>> raw_atoms_from_json(const json& value, std::size_t point_count);

template <Scalar T>
json measure_to_json(const BasicMeasure<T>& mu);

template <Scalar T>
BasicMeasure<T> measure_from_json(const PairRef& pair, const json& value);

template <Scalar T>
json signed_measure_to_json(const BasicSignedMeasure<T>& sigma);

template <Scalar T>
json coupling_to_json(const BasicCoupling<T>& pi);

template <Scalar T>
BasicCoupling<T> coupling_from_json(const PairRef& pair, const json& value);

template <Scalar T>
PairCost<T> pair_cost_from_json(const json& value, std::size_t point_count);

template <Scalar T>
std::string coupling_to_dot(const BasicCoupling<T>& pi);

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  double weight = 1.0;
};

std::vector<DiagramPoint> read_diagram_csv(std::istream& in);

struct Instance {
  PairRef pair;
  json measures = json::object();
  std::optional<json> cost;

  const json& measure(const std::string& name) const;
};

Instance instance_from_json(const json& document, const ValidationOptions& options = {});

// Two diagrams on a shared half plane; the measures are named "a" and "b".
Instance instance_from_diagrams(const std::vector<DiagramPoint>& a,
                                const std::vector<DiagramPoint>& b, DiagonalNorm norm);

json parse_json(std::istream& in);

}  // namespace rot::io

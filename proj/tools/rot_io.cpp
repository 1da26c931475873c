#include "rot_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace rot::io {
namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

const json& member(const json& object, const char* key) {
  if (!object.is_object()) fail(std::string("expected an object holding \"") + key + "\"");
  auto it = object.find(key);
  if (it == object.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& value, const char* what) {
  if (!value.is_number()) fail(std::string(what) + " must be a number");
  return value.get<double>();
}

std::vector<double> number_array(const json& value, const char* what) {
  if (!value.is_array()) fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& v : value) out.push_back(number(v, what));
  return out;
}

std::vector<std::vector<double>> number_matrix(const json& value, const char* what) {
  if (!value.is_array()) fail(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<double>> out;
  out.reserve(value.size());
  for (const auto& row : value) out.push_back(number_array(row, what));
  return out;
}

std::size_t point_index(const json& value, std::size_t point_count) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    fail("point index must be a nonnegative integer");
  }
  const auto index = value.get<unsigned long long>();
  if (index >= point_count) {
    fail("point index " + std::to_string(index) + " out of range (" + std::to_string(point_count) +
         " points)");
  }
  return static_cast<std::size_t>(index);
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto is_integer = [](const std::string& s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(start), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  if (!is_integer(num) || !is_integer(den)) fail("malformed rational \"" + text + "\"");
  const mpz_class n(num[0] == '+' ? num.substr(1) : num);
  const mpz_class d(den[0] == '+' ? den.substr(1) : den);
  if (d == 0) fail("rational with zero denominator \"" + text + "\"");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Rational exact_weight(const json& value) {
  if (value.is_number_integer()) {
    return parse_rational(value.dump());
  }
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (!std::isfinite(v)) fail("weights must be finite");
    return Rational(v);
  }
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_array() && value.size() == 2 && value[0].is_number_integer() &&
      value[1].is_number_integer()) {
    return parse_rational(value[0].dump() + "/" + value[1].dump());
  }
  fail("weight must be a number, a \"p/q\" string or an integer pair");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != s.size()) return std::nullopt;
  return v;
}

enum class EdgeKind { kDirect, kToReservoir, kFromReservoir };

}  // namespace

PairRef metric_pair_from_json(const json& geometry, const ValidationOptions& options) {
  const json& kind_value = member(geometry, "kind");
  if (!kind_value.is_string()) fail("geometry kind must be a string");
  const std::string kind = kind_value.get<std::string>();

  if (kind == "euclidean") {
    EuclideanGeometry g;
    const json& dim = member(geometry, "dimension");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) fail("dimension must be >= 1");
    g.dimension = dim.get<std::size_t>();
    g.points = number_matrix(member(geometry, "points"), "points");
    const json& reservoir = member(geometry, "reservoir");
    if (reservoir.contains("points")) {
      g.reservoir = PointReservoir{number_matrix(reservoir["points"], "reservoir points")};
    } else if (reservoir.contains("normal")) {
      HyperplaneReservoir plane;
      plane.normal = number_array(reservoir["normal"], "reservoir normal");
      plane.offset = reservoir.contains("offset") ? number(reservoir["offset"], "offset") : 0.0;
      g.reservoir = plane;
    } else {
      fail("reservoir must give \"points\" or a hyperplane \"normal\"");
    }
    return MetricPair::create(std::move(g), options);
  }
  if (kind == "halfplane") {
    HalfplaneGeometry g;
    if (geometry.contains("norm")) {
      const json& norm = geometry["norm"];
      if (norm == "linf") {
        g.norm = DiagonalNorm::kLInf;
      } else if (norm == "l2") {
        g.norm = DiagonalNorm::kL2;
      } else {
        fail("halfplane norm must be \"linf\" or \"l2\"");
      }
    }
    for (const auto& p : number_matrix(member(geometry, "points"), "points")) {
      if (p.size() != 2) fail("halfplane points are (birth, death) pairs");
      g.points.emplace_back(p[0], p[1]);
    }
    return MetricPair::create(std::move(g), options);
  }
  if (kind == "explicit") {
    ExplicitGeometry g;
    g.distances = number_matrix(member(geometry, "distances"), "distances");
    g.reservoir_distances = number_array(member(geometry, "reservoir_distances"), "reservoir_distances");
    return MetricPair::create(std::move(g), options);
  }
  fail("unknown geometry kind \"" + kind + "\"");
}

template <Scalar T>
T weight_from_json(const json& value) {
  if constexpr (ScalarTraits<T>::is_exact) {
    return exact_weight(value);
  } else {
    if (value.is_number()) {
      const double v = value.get<double>();
      if (!std::isfinite(v)) fail("weights must be finite");
      return v;
    }
    return exact_weight(value).get_d();
  }
}

template <Scalar T>
json weight_to_json(const T& value) {
  if constexpr (ScalarTraits<T>::is_exact) {
    return canonical(value).get_str();
  } else {
    return value;
  }
}

template <Scalar T>
std::vector<WeightedPoint<T>> raw_atoms_from_json(const json& value, std::size_t point_count) {
  const json& atoms = value.is_object() ? member(value, "atoms") : value;
  if (!atoms.is_array()) fail("measure must be an array of [point, weight] pairs");
  std::vector<WeightedPoint<T>> out;
  out.reserve(atoms.size());
  for (const auto& entry : atoms) {
    if (!entry.is_array() || entry.size() != 2) fail("measure atoms are [point, weight] pairs");
    out.push_back({PointId{point_index(entry[0], point_count)}, weight_from_json<T>(entry[1])});
  }
  return out;
}

template <Scalar T>
json measure_to_json(const BasicMeasure<T>& mu) {
  json atoms = json::array();
  for (const auto& atom : mu.atoms()) atoms.push_back({atom.point.index, weight_to_json(atom.weight)});
  return json{{"atoms", std::move(atoms)}};
}

template <Scalar T>
BasicMeasure<T> measure_from_json(const PairRef& pair, const json& value) {
  const auto raw = raw_atoms_from_json<T>(value, pair->point_count());
  return BasicMeasure<T>(pair, raw);
}

template <Scalar T>
json signed_measure_to_json(const BasicSignedMeasure<T>& sigma) {
  json atoms = json::array();
  for (const auto& atom : sigma.atoms()) {
    atoms.push_back({atom.point.index, weight_to_json(atom.weight)});
  }
  return json{{"atoms", std::move(atoms)}};
}

template <Scalar T>
json coupling_to_json(const BasicCoupling<T>& pi) {
  json edges = json::array();
  for (const auto& [edge, w] : pi.direct()) {
    edges.push_back({{"kind", "direct"},
                     {"from", edge.first.index},
                     {"to", edge.second.index},
                     {"w", weight_to_json(w)}});
  }
  for (const auto& [x, w] : pi.to_reservoir()) {
    edges.push_back({{"kind", "to_res"}, {"from", x.index}, {"to", nullptr}, {"w", weight_to_json(w)}});
  }
  for (const auto& [y, w] : pi.from_reservoir()) {
    edges.push_back({{"kind", "from_res"}, {"from", nullptr}, {"to", y.index}, {"w", weight_to_json(w)}});
  }
  return json{{"edges", std::move(edges)}};
}

template <Scalar T>
BasicCoupling<T> coupling_from_json(const PairRef& pair, const json& value) {
  const json& edges = member(value, "edges");
  if (!edges.is_array()) fail("\"edges\" must be an array");
  BasicCoupling<T> pi(pair);
  const std::size_t n = pair->point_count();
  for (const auto& edge : edges) {
    const json& kind = member(edge, "kind");
    const T w = weight_from_json<T>(member(edge, "w"));
    if (kind == "direct") {
      pi.add_direct(PointId{point_index(member(edge, "from"), n)},
                    PointId{point_index(member(edge, "to"), n)}, w);
    } else if (kind == "to_res") {
      pi.add_to_reservoir(PointId{point_index(member(edge, "from"), n)}, w);
    } else if (kind == "from_res") {
      pi.add_from_reservoir(PointId{point_index(member(edge, "to"), n)}, w);
    } else {
      fail("unknown edge kind " + kind.dump());
    }
  }
  return pi;
}

template <Scalar T>
PairCost<T> pair_cost_from_json(const json& value, std::size_t point_count) {
  PairCost<T> h;
  h.point_count = point_count;
  const json& matrix = member(value, "matrix");
  if (!matrix.is_array() || matrix.size() != point_count) {
    fail("cost matrix must have one row per point");
  }
  for (const auto& row : matrix) {
    if (!row.is_array() || row.size() != point_count) fail("cost matrix must be square");
    for (const auto& v : row) h.matrix.push_back(weight_from_json<T>(v));
  }
  if (!value.contains("to_reservoir") || !value.contains("from_reservoir")) {
    throw InvalidArgument("cost is missing its reservoir columns");
  }
  for (const char* key : {"to_reservoir", "from_reservoir"}) {
    const json& column = value[key];
    if (!column.is_array() || column.size() != point_count) {
      throw InvalidArgument(std::string("cost reservoir column \"") + key +
                            "\" must have one entry per point");
    }
    auto& into = std::string(key) == "to_reservoir" ? h.to_reservoir : h.from_reservoir;
    for (const auto& v : column) into.push_back(weight_from_json<T>(v));
  }
  return h;
}

template <Scalar T>
std::string coupling_to_dot(const BasicCoupling<T>& pi) {
  std::ostringstream out;
  out << "digraph coupling {\n  rankdir=LR;\n  A [shape=box, label=\"A\"];\n";
  for (const auto& [edge, w] : pi.direct()) {
    out << "  s" << edge.first.index << " -> t" << edge.second.index << " [label=\""
        << ScalarTraits<T>::to_string(w) << "\"];\n";
  }
  for (const auto& [x, w] : pi.to_reservoir()) {
    out << "  s" << x.index << " -> A [label=\"" << ScalarTraits<T>::to_string(w) << "\"];\n";
  }
  for (const auto& [y, w] : pi.from_reservoir()) {
    out << "  A -> t" << y.index << " [label=\"" << ScalarTraits<T>::to_string(w) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::vector<DiagramPoint> read_diagram_csv(std::istream& in) {
  std::vector<DiagramPoint> out;
  std::string line;
  std::size_t birth_col = 0;
  std::size_t death_col = 1;
  std::optional<std::size_t> weight_col = 2;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (first) {
      first = false;
      if (!parse_double(fields[0])) {
        std::map<std::string, std::size_t> columns;
        for (std::size_t i = 0; i < fields.size(); ++i) {
          std::string name = fields[i];
          std::transform(name.begin(), name.end(), name.begin(),
                         [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
          columns[name] = i;
        }
        if (!columns.contains("birth") || !columns.contains("death")) {
          fail("diagram CSV header needs birth and death columns");
        }
        birth_col = columns["birth"];
        death_col = columns["death"];
        weight_col = columns.contains("weight") ? std::optional(columns["weight"]) : std::nullopt;
        continue;
      }
    }
    auto field = [&](std::size_t col) -> std::optional<double> {
      if (col >= fields.size()) return std::nullopt;
      return parse_double(fields[col]);
    };
    const auto birth = field(birth_col);
    const auto death = field(death_col);
    if (!birth || !death) fail("diagram CSV line " + std::to_string(line_no) + " is malformed");
    if (!std::isfinite(*birth) || !std::isfinite(*death)) {
      fail("diagram CSV line " + std::to_string(line_no) + ": infinite points are not supported");
    }
    DiagramPoint p{*birth, *death, 1.0};
    if (weight_col && *weight_col < fields.size() && !fields[*weight_col].empty()) {
      const auto w = parse_double(fields[*weight_col]);
      if (!w) fail("diagram CSV line " + std::to_string(line_no) + " has a malformed weight");
      p.weight = *w;
    }
    out.push_back(p);
  }
  return out;
}

const json& Instance::measure(const std::string& name) const {
  auto it = measures.find(name);
  if (it == measures.end()) fail("instance has no measure named \"" + name + "\"");
  return *it;
}

Instance instance_from_json(const json& document, const ValidationOptions& options) {
  Instance instance;
  instance.pair = metric_pair_from_json(member(document, "geometry"), options);
  if (document.contains("measures")) {
    if (!document["measures"].is_object()) fail("\"measures\" must be an object");
    instance.measures = document["measures"];
  }
  if (document.contains("cost")) instance.cost = document["cost"];
  return instance;
}

Instance instance_from_diagrams(const std::vector<DiagramPoint>& a,
                                const std::vector<DiagramPoint>& b, DiagonalNorm norm) {
  HalfplaneGeometry g;
  g.norm = norm;
  json atoms_a = json::array();
  json atoms_b = json::array();
  for (const auto& p : a) {
    atoms_a.push_back({g.points.size(), p.weight});
    g.points.emplace_back(p.birth, p.death);
  }
  for (const auto& p : b) {
    atoms_b.push_back({g.points.size(), p.weight});
    g.points.emplace_back(p.birth, p.death);
  }
  Instance instance;
  instance.pair = MetricPair::create(std::move(g));
  instance.measures = json{{"a", std::move(atoms_a)}, {"b", std::move(atoms_b)}};
  return instance;
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

#define ROT_INSTANTIATE_IO(T)                                                          \
  template T weight_from_json<T>(const json&);                                         \
  template json weight_to_json<T>(const T&);                                           \
  template std::vector<WeightedPoint<T>> raw_atoms_from_json<T>(const json&, std::size_t); \
  template json measure_to_json(const BasicMeasure<T>&);                               \
  template BasicMeasure<T> measure_from_json<T>(const PairRef&, const json&);          \
  template json signed_measure_to_json(const BasicSignedMeasure<T>&);                  \
  template json coupling_to_json(const BasicCoupling<T>&);                             \
  template BasicCoupling<T> coupling_from_json<T>(const PairRef&, const json&);        \
  template PairCost<T> pair_cost_from_json<T>(const json&, std::size_t);               \
  template std::string coupling_to_dot(const BasicCoupling<T>&);

ROT_INSTANTIATE_IO(double)
ROT_INSTANTIATE_IO(Rational)

}  // namespace rot::io

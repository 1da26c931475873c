#include "commands.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rot/duality.hpp"
#include "rot/errors.hpp"
#include "rot/solver.hpp"
#include "rot_io.hpp"

namespace rot::cli {
namespace {

using io::InputError;
using io::json;

struct Flags {
  std::vector<std::string> positional;
  double p = 1.0;
  bool certify = false;
  bool coupling = false;
  bool rational = false;
  bool mk = false;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string emit_dot;
  std::string norm = "linf";
  double eps = 0.0;
  std::optional<double> delta;
};

struct Loaded {
  io::Instance instance;
  std::vector<std::string> names;
};

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

json read_json_file(const std::string& path) {
  if (path == "-") return io::parse_json(std::cin);
  std::ifstream in = open_file(path);
  return io::parse_json(in);
}

// JSON: <instance> <name>...; CSV: <diagram-a> <diagram-b>, named a and b.
Loaded load(const Flags& flags, const std::vector<std::string>& positional) {
  Loaded loaded;
  if (flags.format == "csv") {
    if (positional.size() != 2) throw InputError("--format csv takes exactly two diagram files");
    std::ifstream a = open_file(positional[0]);
    std::ifstream b = open_file(positional[1]);
    const auto norm = flags.norm == "l2" ? DiagonalNorm::kL2 : DiagonalNorm::kLInf;
    loaded.instance =
        io::instance_from_diagrams(io::read_diagram_csv(a), io::read_diagram_csv(b), norm);
    loaded.names = {"a", "b"};
    return loaded;
  }
  if (positional.empty()) throw InputError("missing instance file");
  ValidationOptions options;
  options.seed = flags.seed;
  loaded.instance = io::instance_from_json(read_json_file(positional[0]), options);
  loaded.names.assign(positional.begin() + 1, positional.end());
  return loaded;
}

void expect_names(const Loaded& loaded, std::size_t min, std::size_t max, const char* usage) {
  if (loaded.names.size() < min || loaded.names.size() > max) {
    throw InputError(std::string("expected ") + usage);
  }
}

template <Scalar T>
MeasureBuild<T> build_measure(const io::Instance& instance, const std::string& name) {
  const auto raw = io::raw_atoms_from_json<T>(instance.measure(name), instance.pair->point_count());
  return make_measure<T>(instance.pair, raw);
}

template <Scalar T>
BasicSignedMeasure<T> build_signed(const Loaded& loaded) {
  const io::Instance& instance = loaded.instance;
  if (loaded.names.size() == 2) {
    return difference(build_measure<T>(instance, loaded.names[0]).measure,
                      build_measure<T>(instance, loaded.names[1]).measure);
  }
  const auto raw =
      io::raw_atoms_from_json<T>(instance.measure(loaded.names[0]), instance.pair->point_count());
  return make_signed_measure<T>(instance.pair, raw).measure;
}

template <Scalar T>
json potential_to_json(const Potential<T>& f) {
  json out = json::array();
  for (const auto& [x, v] : f) out.push_back({x.index, io::weight_to_json(v)});
  return out;
}

template <Scalar T>
json cmd_dist(const Flags& flags, const Loaded& loaded) {
  expect_names(loaded, 2, 2, "two measure names");
  if (flags.certify && flags.p != 1.0) throw InputError("--certify requires --p 1");
  const auto a = build_measure<T>(loaded.instance, loaded.names[0]);
  const auto b = build_measure<T>(loaded.instance, loaded.names[1]);
  const OTResult<T> result = solve_wp(a.measure, b.measure, flags.p);

  json out{{"p", flags.p},
           {"value", result.value},
           {"dropped_mass", {io::weight_to_json(a.dropped_mass), io::weight_to_json(b.dropped_mass)}}};
  if constexpr (ScalarTraits<T>::is_exact) {
    out["exact"] = {{"cost", io::weight_to_json(result.cost)}};
  }
  if (flags.coupling) out["coupling"] = io::coupling_to_json(result.coupling);
  if (flags.certify) {
    const DualCertificate<T> cert = kr_dual(a.measure, b.measure);
    out["dual_value"] = to_double(cert.value);
    out["gap"] = std::abs(to_double(cert.gap));
  }
  if (!flags.emit_dot.empty()) {
    std::ofstream dot(flags.emit_dot);
    if (!dot) throw InputError("cannot write " + flags.emit_dot);
    dot << io::coupling_to_dot(result.coupling);
  }
  return out;
}

template <Scalar T>
json cmd_dual(const Flags& flags, const Loaded& loaded) {
  expect_names(loaded, 2, 2, "two measure names");
  const auto a = build_measure<T>(loaded.instance, loaded.names[0]);
  const auto b = build_measure<T>(loaded.instance, loaded.names[1]);
  DualCertificate<T> cert;
  if (flags.mk) {
    const PairCost<T> h =
        loaded.instance.cost
            ? io::pair_cost_from_json<T>(*loaded.instance.cost, loaded.instance.pair->point_count())
            : PairCost<T>::dbar(*loaded.instance.pair);
    cert = mk_dual(h, a.measure, b.measure);
  } else {
    cert = kr_dual(a.measure, b.measure);
  }
  json out{{"kind", flags.mk ? "mk" : "kr"},
           {"value", to_double(cert.value)},
           {"primal", to_double(cert.primal)},
           {"gap", std::abs(to_double(cert.gap))},
           {"f", potential_to_json(cert.potential_f)}};
  if (cert.potential_g) out["g"] = potential_to_json(*cert.potential_g);
  if constexpr (ScalarTraits<T>::is_exact) {
    out["exact"] = {{"value", io::weight_to_json(cert.value)},
                    {"primal", io::weight_to_json(cert.primal)},
                    {"gap", io::weight_to_json(cert.gap)}};
  }
  return out;
}

template <Scalar T>
json cmd_norm(const Flags&, const Loaded& loaded) {
  expect_names(loaded, 1, 2, "a signed measure name, or two measure names");
  const BasicSignedMeasure<T> sigma = build_signed<T>(loaded);
  const T kr = kr_norm(sigma);
  const T op = op_norm(sigma);
  json out{{"kr_norm", to_double(kr)},
           {"op_norm", to_double(op)},
           {"gap", std::abs(to_double(T(kr - op)))}};
  if constexpr (ScalarTraits<T>::is_exact) {
    out["exact"] = {{"kr_norm", io::weight_to_json(kr)}, {"op_norm", io::weight_to_json(op)}};
  }
  return out;
}

template <Scalar T>
json cmd_lattice(const Flags& flags, const std::string& op, const Loaded& loaded) {
  json out{{"op", op}};
  const io::Instance& instance = loaded.instance;
  if (op == "sup" || op == "inf" || op == "residual") {
    expect_names(loaded, 2, 2, "two measure names");
    const auto mu = build_measure<T>(instance, loaded.names[0]).measure;
    const auto nu = build_measure<T>(instance, loaded.names[1]).measure;
    const BasicMeasure<T> result = op == "sup"   ? sup_measure(mu, nu)
                                   : op == "inf" ? inf_measure(mu, nu)
                                                 : residual(mu, nu);
    out["measure"] = io::measure_to_json(result);
  } else if (op == "jordan") {
    expect_names(loaded, 1, 2, "a signed measure name, or two measure names");
    const JordanParts<T> parts = jordan(build_signed<T>(loaded));
    out["positive"] = io::measure_to_json(parts.positive);
    out["negative"] = io::measure_to_json(parts.negative);
  } else {
    expect_names(loaded, 1, 1, "one measure name");
    const auto mu = build_measure<T>(instance, loaded.names[0]).measure;
    if (flags.delta) {
      out["measure"] = io::measure_to_json(band(mu, flags.eps, *flags.delta));
    } else {
      out["measure"] = io::measure_to_json(truncate_lower(mu, flags.eps));
      out["remainder"] = io::measure_to_json(truncate_upper(mu, flags.eps));
    }
  }
  return out;
}

template <Scalar T>
json dispatch(const std::string& command, const Flags& flags) {
  if (command == "lattice") {
    if (flags.positional.empty()) throw InputError("missing lattice operation");
    const std::string& op = flags.positional.front();
    if (op != "sup" && op != "inf" && op != "residual" && op != "jordan" && op != "truncate") {
      throw InputError("unknown lattice operation \"" + op + "\"");
    }
    const std::vector<std::string> rest(flags.positional.begin() + 1, flags.positional.end());
    return cmd_lattice<T>(flags, op, load(flags, rest));
  }
  const Loaded loaded = load(flags, flags.positional);
  if (command == "dist" || command == "coupling") return cmd_dist<T>(flags, loaded);
  if (command == "dual") return cmd_dual<T>(flags, loaded);
  return cmd_norm<T>(flags, loaded);
}

void add_common(CLI::App* sub, Flags& flags) {
  sub->add_option("args", flags.positional, "instance file (or two CSV diagrams) and names");
  sub->add_flag("--rational", flags.rational, "exact rational arithmetic");
  sub->add_option("--format", flags.format, "input format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", flags.seed, "seed for sampled metric validation");
  sub->add_option("--norm", flags.norm, "half-plane norm for CSV diagrams")
      ->check(CLI::IsMember({"linf", "l2"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags flags;
  CLI::App app{"Relative optimal transport on metric pairs", "rot"};
  app.require_subcommand(1);

  CLI::App* dist = app.add_subcommand("dist", "relative Wasserstein distance W_p(a, b)");
  CLI::App* coupling = app.add_subcommand("coupling", "dist --coupling");
  for (CLI::App* sub : {dist, coupling}) {
    add_common(sub, flags);
    sub->add_option("--p", flags.p, "cost exponent, p >= 1");
    sub->add_flag("--certify", flags.certify, "attach a Kantorovich-Rubinstein certificate (p = 1)");
    sub->add_option("--emit-dot", flags.emit_dot, "write the optimal coupling as a dot graph");
  }
  dist->add_flag("--coupling", flags.coupling, "emit the optimal coupling");

  CLI::App* dual = app.add_subcommand("dual", "dual potentials and duality gap");
  add_common(dual, flags);
  dual->add_flag("--mk", flags.mk, "Monge-Kantorovich dual with the instance cost (default dbar)");

  CLI::App* norm = app.add_subcommand("norm", "KR norm and operator norm of a signed measure");
  add_common(norm, flags);

  CLI::App* lattice = app.add_subcommand("lattice", "sup | inf | residual | jordan | truncate");
  add_common(lattice, flags);
  lattice->add_option("--eps", flags.eps, "truncation radius");
  lattice->add_option("--delta", flags.delta, "upper radius; truncate keeps eps < d_A <= delta");

  std::vector<const char*> argv{"rot"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (coupling->parsed()) flags.coupling = true;
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const json result = flags.rational ? dispatch<Rational>(command, flags)
                                       : dispatch<double>(command, flags);
    out << result.dump() << '\n';
    return kExitOk;
  } catch (const SolverError& e) {
    err << "rot: solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const InputError& e) {
    err << "rot: " << e.what() << '\n';
  } catch (const InvalidArgument& e) {
    err << "rot: " << e.what() << '\n';
  } catch (const OutOfRange& e) {
    err << "rot: " << e.what() << '\n';
  } catch (const PairMismatch& e) {
    err << "rot: " << e.what() << '\n';
  } catch (const json::exception& e) {
    err << "rot: malformed input: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "rot: solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInput;
}

}  // namespace rot::cli

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"
#include "rot_io.hpp"

namespace rot {
namespace {

using io::json;
namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  fs::path dir = fs::temp_directory_path() / ("rot_cli_" + std::to_string(::getpid()));

  void SetUp() override { fs::create_directories(dir); }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& content) {
    const fs::path path = dir / name;
    std::ofstream(path) << content;
    return path.string();
  }

  // Points 2, 3, 8, 9 and 0 (on A) on the line.
  std::string example() {
    return write("example.json", R"({
      "geometry": {"kind": "euclidean", "dimension": 1,
                   "points": [[2], [3], [8], [9], [0]], "reservoir": {"points": [[0]]}},
      "measures": {"pos": [[0, 1], [2, 1]], "neg": [[1, 1], [3, 1]],
                   "nu": [[0, 1], [1, -1], [2, 1], [3, -1]], "zero": [],
                   "extra": [[0, 1], [4, 5]],
                   "mu": [[0, 2], [1, 1]], "other": [[0, 1], [3, 4]]}})");
  }
};

TEST_F(Cli, DistWorkedExample) {
  const CliRun r = run({"dist", example(), "pos", "neg"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["value"], 2.0);
  EXPECT_EQ(r.doc()["p"], 1.0);
  EXPECT_EQ(r.doc()["dropped_mass"], json::parse("[0.0, 0.0]"));
  EXPECT_FALSE(r.doc().contains("coupling"));
}

TEST_F(Cli, DistIdenticalMeasuresAndDroppedMass) {
  EXPECT_EQ(run({"dist", example(), "pos", "pos"}).doc()["value"], 0.0);
  const CliRun r = run({"dist", example(), "extra", "zero", "--rational"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["dropped_mass"], json::parse(R"(["5", "0"])"));
  EXPECT_EQ(r.doc()["exact"]["cost"], "2");
}

TEST_F(Cli, CertifyAndCoupling) {
  const CliRun r = run({"dist", example(), "pos", "neg", "--certify", "--coupling"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(r.doc()["gap"].get<double>(), 1e-7);
  EXPECT_EQ(r.doc()["coupling"]["edges"].size(), 2u);
  const CliRun alias = run({"coupling", example(), "pos", "neg"});
  EXPECT_EQ(alias.doc()["coupling"], r.doc()["coupling"]);
  EXPECT_EQ(run({"dist", example(), "pos", "neg", "--certify", "--p", "2"}).code, 2);
}

TEST_F(Cli, EmitDot) {
  const std::string dot = (dir / "plan.dot").string();
  ASSERT_EQ(run({"dist", example(), "pos", "neg", "--emit-dot", dot}).code, 0);
  std::ifstream in(dot);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("digraph"), std::string::npos);
}

TEST_F(Cli, Norm) {
  const CliRun r = run({"norm", example(), "pos"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["kr_norm"], 10.0);
  EXPECT_EQ(r.doc()["op_norm"], 10.0);
  EXPECT_EQ(run({"norm", example(), "nu", "--rational"}).doc()["exact"]["kr_norm"], "2");
  EXPECT_EQ(run({"norm", example(), "zero"}).doc()["kr_norm"], 0.0);
  EXPECT_LE(run({"norm", example(), "mu", "other"}).doc()["gap"].get<double>(), 1e-7);
}

TEST_F(Cli, Lattice) {
  CliRun r = run({"lattice", "jordan", example(), "nu", "--rational"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["positive"]["atoms"], json::parse(R"([[0, "1"], [2, "1"]])"));
  EXPECT_EQ(r.doc()["negative"]["atoms"], json::parse(R"([[1, "1"], [3, "1"]])"));

  r = run({"lattice", "sup", example(), "mu", "other", "--rational"});
  EXPECT_EQ(r.doc()["measure"]["atoms"], json::parse(R"([[0, "2"], [1, "1"], [3, "4"]])"));
  r = run({"lattice", "residual", example(), "mu", "other", "--rational"});
  EXPECT_EQ(r.doc()["measure"]["atoms"], json::parse(R"([[0, "1"], [1, "1"]])"));

  r = run({"lattice", "truncate", example(), "pos", "--eps", "0"});
  EXPECT_EQ(r.doc()["measure"]["atoms"], json::parse("[[0, 1.0], [2, 1.0]]"));
  r = run({"lattice", "truncate", example(), "pos", "--eps", "1", "--delta", "3"});
  EXPECT_EQ(r.doc()["measure"]["atoms"], json::parse("[[0, 1.0]]"));
  EXPECT_EQ(run({"lattice", "meet", example(), "pos"}).code, 2);
}

TEST_F(Cli, Dual) {
  CliRun r = run({"dual", example(), "pos", "neg", "--rational"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["exact"]["value"], "2");
  EXPECT_FALSE(r.doc().contains("g"));
  r = run({"dual", example(), "pos", "neg", "--mk"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["value"], 2.0);
  EXPECT_TRUE(r.doc().contains("g"));

  const std::string missing = write("missing.json", R"({
    "geometry": {"kind": "explicit", "distances": [[0, 1], [1, 0]], "reservoir_distances": [1, 1]},
    "measures": {"a": [[0, 1]], "b": [[1, 1]]},
    "cost": {"matrix": [[0, 1], [1, 0]]}})");
  EXPECT_EQ(run({"dual", missing, "a", "b", "--mk"}).code, 2);
}

TEST_F(Cli, CsvDiagrams) {
  const std::string a = write("a.csv", "birth,death\n0,4\n1,3\n");
  const std::string b = write("b.csv", "birth,death,weight\n0,4,1\n2,2,3\n");
  const CliRun r = run({"dist", a, b, "--format", "csv", "--rational"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["exact"]["cost"], "1");
  EXPECT_EQ(r.doc()["dropped_mass"], json::parse(R"(["0", "3"])"));
  EXPECT_EQ(run({"dist", a, b, "--format", "csv", "--norm", "l2"}).code, 0);
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run({"dist", (dir / "nope.json").string(), "a", "b"}).code, 2);
  EXPECT_EQ(run({"dist", write("bad.json", "{"), "a", "b"}).code, 2);
  EXPECT_EQ(run({"dist", example(), "pos", "missing"}).code, 2);
  EXPECT_EQ(run({"dist", example(), "pos"}).code, 2);
  EXPECT_EQ(run({"dist", example(), "pos", "neg", "--p", "0.5"}).code, 2);
  EXPECT_EQ(run({"dist", example(), "pos", "neg", "--p", "1.5", "--rational"}).code, 2);
  EXPECT_EQ(run({"dist", example(), "nu", "pos"}).code, 2);  // negative weights
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"dist", example(), "pos", "neg", "--format", "xml"}).code, 2);
  const std::string out_of_range = write("oor.json", R"({
    "geometry": {"kind": "halfplane", "points": [[0, 2]]}, "measures": {"a": [[1, 1]]}})");
  EXPECT_EQ(run({"norm", out_of_range, "a"}).code, 2);
  const std::string irrational = write("l2.json", R"({
    "geometry": {"kind": "halfplane", "norm": "l2", "points": [[0, 2]]}, "measures": {"a": [[0, 1]]}})");
  EXPECT_EQ(run({"norm", irrational, "a", "--rational"}).code, 2);
  EXPECT_EQ(run({"norm", irrational, "a"}).code, 0);
}

TEST_F(Cli, Help) { EXPECT_EQ(run({"--help"}).code, 0); }

}  // namespace
}  // namespace rot

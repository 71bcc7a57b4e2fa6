#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commons/cli.hpp"
#include "commons/document.hpp"

using namespace commons;

namespace {

const std::string kProblems = COMMONS_PROBLEMS_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) { return kProblems + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("format_csv writes a header and full-precision values") {
  const auto csv = cli::format_csv({0.0, 0.1}, {"a", "b"}, {{1.0, 2.0}, {1.0 / 3.0, -0.5}});
  const auto ls = lines(csv);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "x,a,b");
  CHECK(ls[1] == "0,1,0.33333333333333331");
  CHECK(ls[2] == "0.10000000000000001,2,-0.5");
}

TEST_CASE("documents parse presets, guarantees and rules") {
  const auto doc = load_document(problem("max3.yaml"));
  CHECK(doc.spec.n() == 3);
  CHECK(doc.modularity.tag == ModularityTag::Submodular);
  CHECK(doc.guarantees.size() == 5);
  CHECK(doc.guarantee("g03")(0.0) == doctest::Approx(0.1));
  CHECK(doc.guarantee("half")(0.0) == doctest::Approx(1.0 / 6.0));
  CHECK(doc.rules.size() == 3);
  CHECK_THROWS(doc.guarantee("missing"));
  // anchors from guarantee parameters join the grid
  const auto& pts = doc.grid.points();
  CHECK(std::find(pts.begin(), pts.end(), 0.3) != pts.end());
}

TEST_CASE("documents with explicit terms") {
  const auto doc = load_document(problem("convex_terms.yaml"));
  CHECK(doc.spec.name() == "kinked_cost");
  // F(1.5) = 0.75, plus 3 * 0.25
  CHECK(doc.spec.evaluate({0.5, 0.5, 0.5}) == doctest::Approx(0.75 + 0.75));
  CHECK(doc.modularity.tag == ModularityTag::Supermodular);
}

TEST_CASE("parse_function forms") {
  const TypeInterval iv(0.0, 2.0);
  CHECK(parse_function("identity", iv)(1.5) == doctest::Approx(1.5));
  CHECK(parse_function("exp", iv)(1.0) == doctest::Approx(std::exp(1.0)));
  const auto f = parse_function("[0, 1, 2] / [[0], [-1, 1]]", iv);
  CHECK(f(1.5) == doctest::Approx(0.5));
  CHECK_THROWS(parse_function("[0, 1] / [[0], [1]]", iv));
  CHECK_THROWS(parse_function("cosh", iv));
}

TEST_CASE("document errors name the line and field") {
  try {
    parse_document("interval: [0, 1]\nn: 3\nwelfare: {preset: max}\nbogus: 1\n");
    FAIL("expected a DocumentError");
  } catch (const DocumentError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 4") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_document("interval: [1, 0]\nn: 3\nwelfare: {preset: max}\n"), DocumentError);
  CHECK_THROWS_AS(parse_document("interval: [0, 1]\nn: 3\nwelfare: {preset: nope}\n"), DocumentError);
  CHECK_THROWS_AS(parse_document("interval: [0, 1]\nn: 3\nwelfare: {preset: max}\n"
                                 "guarantees:\n  - {name: m, family: mixture, of: [x], weights: [1]}\n"),
                  DocumentError);
  CHECK_THROWS_AS(parse_document("interval: [0, 1]\nn: 4\nwelfare: {preset: quota, params: {q: 2}}\n"
                                 "guarantees:\n  - {name: u, family: una}\n"),
                  DocumentError);
}

TEST_CASE("eval prints W at a profile") {
  const auto r = run({"eval", problem("max3.yaml"), "--profile", "0.2,0.9,0.5"});
  CHECK(r.code == cli::kExitOk);
  CHECK(std::stod(r.out) == doctest::Approx(0.9));
  CHECK(run({"eval", problem("max3.yaml"), "--profile", "0.2,0.9"}).code == cli::kExitInputError);
  CHECK(run({"eval", problem("max3.yaml"), "--profile", "0.2,0.9,7"}).code == cli::kExitInputError);
}

TEST_CASE("rule prints shares that add up to W") {
  const auto r = run({"rule", problem("max3.yaml"), "--rule", "up", "--profile", "0.2,0.9,0.5"});
  REQUIRE(r.code == cli::kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  std::istringstream shares(ls[0]);
  double total = 0.0;
  for (std::string cell; std::getline(shares, cell, ',');) total += std::stod(cell);
  CHECK(total == doctest::Approx(0.9));
  CHECK(ls[1].rfind("sum ", 0) == 0);
}

TEST_CASE("verify exit codes follow the check result") {
  CHECK(run({"verify", problem("max3.yaml"), "feasibility", "--guarantee", "g03"}).code == cli::kExitOk);
  CHECK(run({"verify", problem("max3.yaml"), "tightness", "--guarantee", "g03"}).code == cli::kExitOk);
  const auto loose = run({"verify", problem("max3.yaml"), "tightness", "--guarantee", "half"});
  CHECK(loose.code == cli::kExitCheckFailed);
  CHECK(loose.out.find("FAIL") != std::string::npos);
  CHECK(run({"verify", problem("max3.yaml"), "sandwich", "--lower", "una", "--upper", "g03"}).code == cli::kExitOk);
  CHECK(run({"verify", problem("max3.yaml"), "budget", "--rule", "blend"}).code == cli::kExitOk);
  CHECK(run({"verify", problem("quota.yaml"), "tightness", "--guarantee", "lower"}).code == cli::kExitOk);
  CHECK(run({"verify", problem("pairwise_product.yaml"), "tightness", "--guarantee", "staircase"}).code ==
        cli::kExitOk);
  CHECK(run({"verify", problem("max3.yaml"), "nonsense"}).code == cli::kExitInputError);
  CHECK(run({"verify", problem("max3.yaml"), "tightness", "--guarantee", "nobody"}).code == cli::kExitInputError);
}

TEST_CASE("modularity report") {
  const auto r = run({"verify", problem("quota.yaml"), "modularity"});
  CHECK(r.out.find("neither") != std::string::npos);
  const auto pb = run({"verify", problem("public_bad.yaml"), "modularity"});
  CHECK(pb.code == cli::kExitOk);
  CHECK(pb.out.find("supermodular") != std::string::npos);
}

TEST_CASE("guarantee and curve commands write CSV") {
  const auto g = run({"guarantee", problem("public_bad.yaml"), "--name", "g11"});
  REQUIRE(g.code == cli::kExitOk);
  const auto ls = lines(g.out);
  CHECK(ls.front() == "x,g11");
  CHECK(ls.size() == 42);

  const auto dir = std::filesystem::temp_directory_path() / "commons_cli_test";
  std::filesystem::remove_all(dir);
  const auto c = run({"curve", problem("public_bad.yaml"), "--out", dir.string()});
  REQUIRE(c.code == cli::kExitOk);
  CHECK(std::filesystem::exists(dir / "curves.csv"));
  CHECK(std::filesystem::exists(dir / "rule_up.csv"));
  std::ifstream in(dir / "curves.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,una,gL,gH,g11,tangent_half,tangent_low");
  std::filesystem::remove_all(dir);
}

TEST_CASE("figure 1 columns") {
  const auto r = run({"figure", "1", "--p", "0.3", "--m", "11"});
  REQUIRE(r.code == cli::kExitOk);
  const auto ls = lines(r.out);
  CHECK(ls.front() == "x,una,g_0,g_H,g_p=0.3");
  // 0.3 already lies on the uniform grid
  CHECK(ls.size() == 12);
}

TEST_CASE("bad command lines are input errors") {
  CHECK(run({}).code == cli::kExitInputError);
  CHECK(run({"figure", "3"}).code == cli::kExitInputError);
  CHECK(run({"eval", "/no/such/file.yaml", "--profile", "0"}).code == cli::kExitInputError);
}

#include "oracles.hpp"

#include "loometric/cli.hpp"
#include "loometric/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace loometric;

namespace {

const std::filesystem::path fixtures{LOOMETRIC_FIXTURES};

std::string fx(const char* name) { return (fixtures / name).string(); }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json cli_json(std::vector<std::string> args) { return Json::parse(cli(std::move(args)).out); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "loometric-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("parse_space examples") {
  const auto two = parse_space(fx("two_point.json"));
  CHECK(two.size() == 2);
  CHECK(two.label(0) == "a");
  CHECK(two(0, 1) == 1);

  try {
    parse_space(fx("nonsquare.csv"));
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  try {
    parse_space(fx("bad_triangle.json"));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TriangleViolation);
  }

  try {
    parse_space(fx("malformed.json"));
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 2);
  }

  CHECK_THROWS_AS(parse_space(fx("does_not_exist.json")), IoError);
  CHECK(parse_space(fx("line4.json"))(2, 3) == Rational(1, 2));
}

TEST_CASE("decimal and rational inputs") {
  const auto s = parse_space_json(R"({"distances": [["0", "0.125"], [0.125, 0]]})");
  CHECK(s(0, 1) == Rational(1, 8));
  CHECK(s.label(1) == "1");
  CHECK_THROWS_AS(parse_space_json(R"({"distances": [["0", "x"], ["x", "0"]]})"), ParseError);
  CHECK_THROWS_AS(parse_space_json(R"({"labels": ["a"]})"), ParseError);
  CHECK_THROWS_AS(parse_space_csv("a,b\n0,1\n1,zz\n"), ParseError);
  try {
    parse_space_csv("a,b\n0,1\n1,0,3\n");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("round trips are bit-exact in both formats") {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    auto m = oracle::random_space(rng, 1, 9).matrix();
    for (auto& row : m)
      for (auto& v : row) v /= 7;
    const auto s = validate_metric(m);
    CHECK(parse_space_json(write_space_json(s)) == s);
    CHECK(parse_space_csv(write_space_csv(s)) == s);
  }
  const auto empty = validate_metric(std::vector<std::vector<Rational>>{});
  CHECK(parse_space_json(write_space_json(empty)) == empty);
}

TEST_CASE("embedding json shape") {
  const auto s = parse_space(fx("one_two_three.csv"));
  Embedding e;
  e.coords = {{Rational(0)}, {Rational(1, 2)}, {Rational(3, 2)}};
  const auto doc = embedding_json(s, verify_loose(s, e));
  CHECK(doc["dim"] == 1);
  CHECK(doc["coords"]["y"][0] == "1/2");
  CHECK(doc["verified"] == "loose");

  e.coords = {{Rational(0)}, {Rational(1)}, {Rational(2)}};
  const auto bad = embedding_json(s, verify_loose(s, e));
  CHECK(bad["verified"].contains("violated"));
}

TEST_CASE("svg has one marker and one label per point") {
  const auto s = parse_space(fx("square.json"));
  Embedding e;
  e.dim = 2;
  e.coords = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto svg = embedding_svg(s, e);
  CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);
  std::size_t markers = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++markers;
  CHECK(markers == 4);
  for (const char* l : {">n<", ">e<", ">s<", ">w<"}) CHECK(svg.find(l) != std::string::npos);
}

TEST_CASE("cli exit codes on the fixture corpus") {
  struct Golden {
    std::vector<std::string> args;
    int code;
    const char* needle;  // expected in stdout (or stderr for code 2)
  };
  const std::vector<Golden> corpus{
      {{"validate", fx("two_point.json")}, 0, "\"valid\": true"},
      {{"validate", fx("bad_triangle.csv")}, 1, "TriangleViolation"},
      {{"validate", fx("asymmetric.csv")}, 1, "Asymmetric"},
      {{"validate", fx("nonsquare.csv")}, 2, "line 3"},
      {{"validate", fx("malformed.json")}, 2, "parse error"},
      {{"validate", fx("missing.json")}, 2, "cannot read"},
      {{"pattern", fx("square.json")}, 0, "\"injective\": false"},
      {{"simplex", fx("simplex4.json")}, 0, "\"dim_lower_bound\": 3"},
      {{"simplex", fx("point.json")}, 2, "TooSmall"},
      {{"embed-line", fx("triangle.json")}, 1, "NotInjective"},
      {{"embed-line", fx("one_two_three.csv")}, 0, "\"verified\": \"loose\""},
      {{"embed", fx("simplex4.json"), "--dim", "2"}, 1, "\"certificate\""},
      {{"embed", fx("square.json"), "--dim", "2", "--seed", "1"}, 0, "\"verified\": \"loose\""},
      {{"embed", fx("triangle.json"), "--dim", "1", "--escalate"}, 0, "\"dim\": 3"},
      {{"perturb", fx("triangle.json"), "--eps", "1/100"}, 0, "\"distances\""},
      {{"perturb", fx("triangle.json"), "--eps", "1/2"}, 2, "EpsTooLarge"},
      {{"gh", fx("point.json"), fx("two_point.json")}, 0, "\"value\": \"1/2\""},
      {{"gh", fx("square.json"), fx("bad_triangle.csv")}, 2, "TriangleViolation"},
      {{"mnm", fx("clusters.json"), "--N", "10", "--M", "10"}, 0, "\"found\": true"},
      {{"mnm", fx("triangle.json"), "--N", "2", "--M", "1000"}, 1, "\"found\": false"},
      {{"mnm", fx("clusters.json"), "--N", "10", "--M", "10", "--partition", fx("clusters_partition.json")}, 0,
       "\"holds\": true"},
      {{"mnm", fx("triangle.json"), "--N", "1", "--M", "10", "--partition", fx("triangle_singletons.json")}, 1,
       "separation"},
      {{"cover-order", fx("line4.json"), "--cover", fx("line4_cover.json")}, 0, "\"order\": 1"},
      {{"cover-order", fx("triangle.json"), "--cover", fx("partial_cover.json")}, 2, "NotACover"},
      {{"cover-order", fx("clusters.json"), "--cover", fx("clusters_partition.json"), "--check-dim", "0", "--M", "1"},
       0, "\"holds\": true"},
      {{"cover-order", fx("line4.json"), "--cover", fx("line4_cover.json"), "--check-dim", "1", "--M", "1"}, 1,
       "mesh"},
      {{"strip", fx("line4.json"), "--thresholds", "5,1"}, 0, "\"residue\""},
      {{"strip", fx("line4.json"), "--thresholds", "1,5"}, 2, "NonDecreasingThresholds"},
      {{"experiment", "--trials", "3", "--points", "4", "--seed", "2"}, 0, "\"injective_after_perturbation\": 3"},
      {{"embed", fx("square.json")}, 2, "--dim"},
      {{"frobnicate"}, 2, "Usage"},
      {{}, 2, "Usage"},
  };
  for (const auto& g : corpus) {
    CAPTURE(g.args);
    const auto r = cli(g.args);
    CHECK(r.code == g.code);
    const std::string& where = g.code == 2 ? r.err : r.out;
    CHECK(where.find(g.needle) != std::string::npos);
  }
}

TEST_CASE("cli outputs") {
  const auto val = cli_json({"validate", fx("bad_triangle.csv")});
  CHECK(val["witness"] == Json::array({0, 2, 1}));

  const auto strip = cli_json({"strip", fx("line4.json"), "--thresholds", "5,1"});
  CHECK(strip["layers"][0]["points"] == Json::array({"p0"}));
  CHECK(strip["layers"][1]["points"] == Json::array({"p10"}));
  CHECK(strip["residue"] == Json::array({"p11", "p11.5"}));

  const auto gh = cli_json({"gh", fx("point.json"), fx("two_point.json")});
  CHECK(gh["proof"] == "exact");
  CHECK(gh["correspondence"] == Json::parse("[[0,0],[0,1]]"));

  const auto out = scratch("gh.json");
  const auto quiet = cli({"gh", fx("point.json"), fx("two_point.json"), "--out", out.string()});
  CHECK(quiet.code == 0);
  CHECK(quiet.out.empty());
  std::ifstream f(out);
  CHECK(Json::parse(f)["value"] == "1/2");

  const auto svg = scratch("line.svg");
  CHECK(cli({"embed-line", fx("one_two_three.csv"), "--svg", svg.string()}).code == 0);
  CHECK(read_file(svg).find("<svg") == 0);

  const auto a = cli({"experiment", "--trials", "5", "--seed", "9", "--no-runtime"});
  const auto b = cli({"experiment", "--trials", "5", "--seed", "9", "--no-runtime"});
  CHECK(a.out == b.out);
  CHECK(a.out.find("runtime_ms") == std::string::npos);

  const auto help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Subcommands") != std::string::npos);
}

TEST_CASE("perturb output parses back as an injective metric") {
  const auto r = cli({"perturb", fx("square.json"), "--eps", "1/100", "--seed", "4"});
  REQUIRE(r.code == 0);
  const auto p = parse_space_json(r.out);
  CHECK(is_injective(p).injective);
  CHECK(p.labels() == parse_space(fx("square.json")).labels());
}

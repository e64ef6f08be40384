#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "dayflow/errors.hpp"
#include "dayflow/io.hpp"

using namespace dayflow;
using io::json;

TEST_CASE("group specs round-trip") {
  const std::vector<GroupSpec> groups = {
      GroupSpec::integers(3), GroupSpec::cyclic(9),    GroupSpec::symmetric(4),
      GroupSpec::free_group(2), GroupSpec::heisenberg(), GroupSpec::lamplighter(),
      GroupSpec::naturals(),
      GroupSpec::direct_product({GroupSpec::free_group(1), GroupSpec::lamplighter()})};
  for (const auto& g : groups) {
    CHECK(io::group_from_json(io::group_to_json(g)) == g);
    for (const auto& x : ball(g, 2)) CHECK(io::element_from_json(g, io::element_to_json(g, x)) == x);
  }
}

TEST_CASE("element encodings") {
  const auto f2 = GroupSpec::free_group(2);
  CHECK(io::element_from_json(f2, "aBA") == f2.evaluate({"a", "B", "A"}));
  CHECK(io::element_from_json(f2, "aA") == f2.identity());
  CHECK(io::element_from_json(f2, "e") == f2.identity());
  CHECK(io::element_to_json(f2, f2.identity()) == "");
  CHECK_THROWS_AS(io::element_from_json(f2, "a1"), InvalidArgument);
  CHECK_THROWS_AS(io::element_from_json(f2, "ac"), InvalidArgument);
  const auto l = GroupSpec::lamplighter();
  const auto x = io::element_from_json(l, json::parse(R"({"position": -1, "lamps": [3, 0]})"));
  CHECK(x == Element{{-1, 0, 3}});
  CHECK_THROWS_AS(io::element_from_json(GroupSpec::cyclic(3), json::parse("[3]")), InvalidArgument);
  CHECK_THROWS_AS(io::element_from_json(GroupSpec::integers(2), json::parse("[1]")), InvalidArgument);
  CHECK_THROWS_AS(io::element_from_json(GroupSpec::integers(2), json::parse("\"x\"")), InvalidArgument);
}

TEST_CASE("malformed group specs") {
  CHECK_THROWS_AS(io::group_from_json(json::parse(R"({"kind": "torus"})")), InvalidArgument);
  CHECK_THROWS_AS(io::group_from_json(json::parse(R"({"kind": "cyclic"})")), InvalidArgument);
  CHECK_THROWS_AS(io::group_from_json(json::parse(R"({"kind": "cyclic", "order": "x"})")), InvalidArgument);
  CHECK_THROWS_AS(io::group_from_json(json::parse("[1]")), InvalidArgument);
}

TEST_CASE("measures and functions round-trip") {
  const auto h = GroupSpec::heisenberg();
  std::mt19937_64 rng(6);
  std::map<Element, double> c;
  for (const auto& x : ball(h, 2)) c[x] = std::uniform_real_distribution<>(-1, 1)(rng);
  const MolecularMeasure mu(h, c);
  CHECK(io::measure_from_json(h, io::measure_to_json(mu)) == mu);
  CHECK(io::measure_to_json(mu, 0.5).size() < mu.support_size());
  const TestFunction f(h, c, 0.125);
  const auto back = io::function_from_json(h, io::function_to_json(f));
  CHECK(back.values() == f.values());
  CHECK(back.default_value() == 0.125);
}

TEST_CASE("action specs") {
  const auto z = GroupSpec::integers(1);
  const auto j = json::parse(R"({
    "dimension": 2,
    "generators": {"a": {"A": [[0, -1], [1, 0]], "b": [1, 0]}},
    "domain": {"type": "box", "lower": [-3, -3], "upper": [3, 3]}})");
  const auto a = io::action_from_json(z, j);
  CHECK(a.dimension() == 2);
  const auto back = io::action_from_json(z, io::action_to_json(a));
  CHECK(back.map("a").linear == a.map("a").linear);
  CHECK(back.map("A").offset.isApprox(a.map("A").offset));
  CHECK(std::holds_alternative<BoxDomain>(back.domain()));

  const auto ident = io::action_from_json(z, json::parse(R"({"dimension": 1, "generators": {"a": {}}})"));
  CHECK(ident.map("a").linear(0, 0) == 1.0);

  CHECK_THROWS_AS(io::action_from_json(z, json::parse(R"({"dimension": 2, "generators": {"b": {}}})")),
                  InvalidArgument);
  CHECK_THROWS_AS(io::action_from_json(z, json::parse(R"({"dimension": 2, "generators": {"a": {"b": [1]}}})")),
                  InvalidArgument);
  CHECK_THROWS_AS(io::action_from_json(z, json::parse(R"({"dimension": 1, "generators": {"a": {}},
                                                          "domain": {"type": "torus"}})")),
                  InvalidArgument);
  const auto canon = io::action_from_json(GroupSpec::cyclic(4), json::parse(R"({"canonical": true})"));
  CHECK(canon.dimension() == 4);
}

TEST_CASE("report json") {
  SolveConfig cfg;
  cfg.radius = 1;
  const auto g = GroupSpec::integers(1);
  const auto rep = solve_invariant_mean(g, cfg);
  const auto j = io::report_to_json(rep, g, cfg.kind);
  CHECK(j["kind"] == "tv");
  CHECK(j["lp_status"] == "optimal");
  CHECK(j["measure"].size() == 3);
  CHECK(j["defects"].contains("A"));
}

TEST_CASE("reals print with 17 significant digits") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::uniform_real_distribution<>(-1e6, 1e6)(rng) / 3.0;
    CHECK(std::strtod(io::format_real(x).c_str(), nullptr) == x);
  }
  CHECK(io::format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("reading files") {
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/dir/x.json"), InvalidArgument);
  const auto path = std::filesystem::temp_directory_path() / "dayflow_io_bad.json";
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(io::read_json_file(path), InvalidArgument);
  std::filesystem::remove(path);
}

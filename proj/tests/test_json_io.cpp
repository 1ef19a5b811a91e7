#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mais/json_io.hpp"

using namespace mais;
using nlohmann::json;

TEST_CASE("problem round trip is the identity on normalized problems") {
  const ProblemFile p = load_problem(std::string(MAIS_FIXTURE_DIR) + "/running_example.json");
  const json j1 = serialize_problem(p);
  const ProblemFile q = parse_problem(j1);
  const json j2 = serialize_problem(q);
  CHECK(j1 == j2);
  CHECK(q.system.matrices.size() == 2);
  CHECK(q.constraints.polynomials.size() == 3);
  CHECK(q.options.algorithm == 2);
}

TEST_CASE("unknown keys are rejected everywhere") {
  json j = serialize_problem(
      load_problem(std::string(MAIS_FIXTURE_DIR) + "/example1.json"));
  SUBCASE("top level") {
    j["extra"] = 1;
    CHECK_THROWS_AS(parse_problem(j), std::invalid_argument);
  }
  SUBCASE("options") {
    j["options"]["mystery"] = true;
    CHECK_THROWS_AS(parse_problem(j), std::invalid_argument);
  }
  SUBCASE("constraint") {
    j["constraints"][0]["name"] = "c1";
    CHECK_THROWS_AS(parse_problem(j), std::invalid_argument);
  }
  SUBCASE("term") {
    j["constraints"][0]["terms"][0]["note"] = "x";
    CHECK_THROWS_AS(parse_problem(j), std::invalid_argument);
  }
  SUBCASE("state_box") {
    j["state_box"]["pad"] = 0.1;
    CHECK_THROWS_AS(parse_problem(j), std::invalid_argument);
  }
}

TEST_CASE("schema errors carry a message") {
  json j;
  j["n"] = 2;
  CHECK_THROWS_AS(parse_problem(j), std::invalid_argument);
}

TEST_CASE("result serialization reloads") {
  const ProblemFile p = load_problem(std::string(MAIS_FIXTURE_DIR) + "/example1.json");
  RunOptions opt = p.options;
  opt.sos_reduction = false;
  const InvariantSetResult res = solve(p.system, p.constraints, p.x_min, p.x_max, opt);
  const json j = serialize_result(p, res, {}, false);
  const ResultFile r = parse_result(j);
  CHECK(r.iterations == res.iterations);
  CHECK(r.polynomials.size() == res.polynomials.size());
  CHECK(r.fixed_point.rows() == res.fixed_point.rows());
  for (size_t i = 0; i < r.polynomials.size(); ++i)
    CHECK(r.polynomials[i].coefficient_distance(res.polynomials[i]) < 1e-12);

  // byte-stable serialization of the same result
  CHECK(j.dump() == serialize_result(p, res, {}, false).dump());
}

#include <doctest.h>

#include <sstream>

#include "sppa/config.hpp"

using namespace sppa;

namespace {

Json minimal_config() {
  return Json{
      {"schema_version", 1},
      {"problem",
       {{"kind", "family"},
        {"members", Json::array({Json{{"type", "affine"},
                                      {"M", Json::array({Json::array({1.0})})},
                                      {"b", Json::array({0.0})}}})},
        {"weights", Json::array({1.0})}}},
      {"schedule", {{"lambda0", 1.0}, {"gamma", 0.75}, {"n0", 0}}},
      {"x0", Json::array({1.0})},
      {"iterations", 10},
      {"replicas", 1},
      {"master_seed", 42},
      {"trace_stride", 0},
      {"workers", 1}};
}

}  // namespace

TEST_CASE("config round-trip is exact") {
  const ExperimentConfig c = parse_config(minimal_config());
  const Json serialized = to_json(c);
  const ExperimentConfig c2 = parse_config(serialized);
  CHECK(c.schedule.lambda0 == c2.schedule.lambda0);
  CHECK(c.schedule.gamma == c2.schedule.gamma);
  CHECK(c.schedule.n0 == c2.schedule.n0);
  CHECK((c.x0 - c2.x0).norm() == 0.0);
  CHECK(c.iterations == c2.iterations);
  CHECK(c.replicas == c2.replicas);
  CHECK(c.master_seed == c2.master_seed);
  CHECK(c.trace_stride == c2.trace_stride);
  CHECK(c.workers == c2.workers);
  CHECK(c.problem == c2.problem);
  CHECK(to_json(c2) == serialized);
}

TEST_CASE("validation errors name the offending field") {
  Json j = minimal_config();
  j["schedule"]["gamma"] = 0.4;
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("schedule") != std::string::npos);
    CHECK(msg.find("square-summable but not summable") != std::string::npos);
  }

  Json j2 = minimal_config();
  j2.erase("x0");
  try {
    parse_config(j2);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x0") != std::string::npos);
  }

  Json j3 = minimal_config();
  j3["schema_version"] = 2;
  CHECK_THROWS_AS(parse_config(j3), ConfigError);

  Json j4 = minimal_config();
  j4["iterations"] = 0;
  try {
    parse_config(j4);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("iterations") != std::string::npos);
  }
}

TEST_CASE("operator/function/set JSON round-trips through the parsers") {
  const Json op = {{"type", "scaled"},
                   {"alpha", 2.0},
                   {"inner",
                    {{"type", "subdifferential"},
                     {"f",
                      {{"type", "sum"},
                       {"terms",
                        Json::array(
                            {Json{{"type", "quadratic"},
                                  {"Q", Json::array({Json::array({1.0, 0.0}),
                                                     Json::array({0.0, 1.0})})},
                                  {"b", Json::array({0.5, -0.5})}},
                             Json{{"type", "indicator"},
                                  {"set",
                                   {{"type", "ball"},
                                    {"center", Json::array({0.0, 0.0})},
                                    {"radius", 2.0}}}}})}}}}}};
  const OperatorSpec spec = cfg::op_from_json(op, "problem");
  validate(spec);
  CHECK(cfg::op_to_json(spec) == op);
}

TEST_CASE("trace CSV column contract") {
  RunReport rep;
  TraceRow row;
  row.n = 3;
  row.lambda = 0.5;
  row.xi_index = 1;
  row.dist_to_solution = 0.25;
  row.norm_x = 1.0 / 3.0;
  rep.rows.push_back(row);
  std::ostringstream out;
  write_trace_csv(out, rep);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header ==
        "n,lambda,xi_index,dist_to_solution,dist_to_domain,dist_avg_to_feasible,"
        "objective_avg,norm_x");
  std::getline(in, line);
  CHECK(line == "3,0.5,1,0.25,,,,0.33333333333333331");  // 17 significant digits, empty optionals
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>

#include "dunklsb/report.hpp"

using namespace dunklsb;

TEST_CASE("pass decision by mode") {
  CheckRecord r;
  r.abs_err = 1e-3;
  r.rel_err = 1e-9;
  r.tol = 1e-6;
  r.mode = "abs";
  r.decide();
  CHECK_FALSE(r.pass);
  r.mode = "rel";
  r.decide();
  CHECK(r.pass);
  r.mode = "either";
  r.decide();
  CHECK(r.pass);
  r.abs_err = r.rel_err = std::numeric_limits<double>::quiet_NaN();
  r.decide();
  CHECK_FALSE(r.pass);
}

TEST_CASE("summary, ordering and serialization") {
  VerificationReport rep;
  for (const char* id : {"b.x", "a.y", "a.x"}) {
    CheckRecord r;
    r.check_id = id;
    r.params = {{"t", "1"}};
    r.value = {std::numeric_limits<double>::infinity()};
    r.pass = std::string(id) != "b.x";
    r.note = std::string(id) == "a.y" ? "hello, world" : "";
    rep.records.push_back(r);
  }
  rep.sort();
  CHECK(rep.records[0].check_id == "a.x");
  CHECK(rep.records[2].check_id == "b.x");
  auto s = rep.summary();
  CHECK(s.total == 3);
  CHECK(s.failed == 1);
  auto j = rep.to_json(false);
  CHECK(j["schema"] == "dunklsb-report/1");
  CHECK(j["summary"]["passed"] == 2);
  CHECK(j["records"][0]["value"][0].is_null());
  CHECK_FALSE(j["records"][0].contains("runtime_ms"));
  CHECK(j["records"][1]["note"] == "hello, world");
  CHECK(rep.to_json(true)["records"][0].contains("runtime_ms"));
  auto csv = rep.to_csv();
  CHECK(csv.rfind("check_id,params,value,reference,abs_err,rel_err,tol,mode,pass,runtime_ms\n", 0) == 0);
  CHECK(csv.find("a.x,t=1;,inf,") != std::string::npos);
}

TEST_CASE("kernel suite output is deterministic") {
  RunConfig c;
  c.suites = {"kernels"};
  c.k_grid = {{0.0}};
  c.t_grid = {1.0};
  c.kernel_samples = 200;
  auto a = run_suite(c).to_json(false).dump();
  auto b = run_suite(c).to_json(false).dump();
  CHECK(a == b);
  CHECK(a.find("kernel.exp_reduction") != std::string::npos);
  CHECK(run_suite(c).summary().failed == 0);
}

TEST_CASE("configuration parsing") {
  auto c = config_from_json(nlohmann::json::parse(R"({"suite":"kernels","k":[0.5,1.5],"dims":2,"t":2})"));
  CHECK(c.suites == std::vector<std::string>{"kernels"});
  REQUIRE(c.k_grid.size() == 1);
  CHECK(c.k_grid[0] == std::vector<double>{0.5, 1.5});
  CHECK(c.t_grid == std::vector<double>{2.0});
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus":1})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"k":[-1]})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"t":"x"})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"suite":"nope"})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"degree":12,"basis":10})")), std::invalid_argument);
  RunConfig bad;
  bad.nodes = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

#include "doctest.h"

#include "wavesym/report.hpp"

using namespace wavesym;

namespace {
RunConfig config(const std::string& cmd) {
  RunConfig c;
  c.command = cmd;
  validate(c);
  return c;
}
}  // namespace

TEST_CASE("config validation") {
  RunConfig c;
  c.command = "derive";
  c.params["c"] = "0";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.params["c"] = "1/2";
  CHECK_NOTHROW(validate(c));
  CHECK(c.params.at("K") == "1");
  c.params["Q"] = "1";
  CHECK_THROWS_AS(validate(c), ConfigError);
  RunConfig d;
  d.command = "classify";
  d.case_sel = "generic";
  CHECK_THROWS_AS(validate(d), ConfigError);
  d.case_sel = "ii";
  d.generator = "v7";
  CHECK_THROWS_AS(validate(d), ConfigError);
  RunConfig e;
  e.command = "frobnicate";
  CHECK_THROWS_AS(validate(e), ConfigError);
  RunConfig g;
  g.command = "verify";
  g.params["K"] = "abc";
  CHECK_THROWS_AS(validate(g), ConfigError);
}

TEST_CASE("config file merge") {
  RunConfig c;
  apply_config_json(c, Json::parse(R"({"case": "ii", "degree": 1, "params": {"L": "3/2", "e2": 1}})"));
  CHECK(c.case_sel == "ii");
  CHECK(c.degree == 1);
  CHECK(c.params.at("L") == "3/2");
  CHECK(c.params.at("e2") == "1");
  CHECK_THROWS_AS(apply_config_json(c, Json::parse(R"({"degree": "two"})")), ConfigError);
}

TEST_CASE("reports are versioned and deterministic") {
  auto c = config("reduce");
  auto a = run(c);
  auto b = run(c);
  CHECK(a.data.dump() == b.data.dump());
  CHECK(a.data["schema_version"] == kSchemaVersion);
  CHECK(a.data["stages"].contains("reduce_i_v1"));
  CHECK(a.exit_code == 0);
  CHECK(render_text(a.data).find("matches_printed: true") != std::string::npos);
}

TEST_CASE("classify blocks share structure constants") {
  auto c = config("classify");
  auto ri = run(c);
  c.case_sel = "ii";
  auto rii = run(c);
  CHECK(ri.data["stages"]["classify_i"]["structure_constants"] ==
        rii.data["stages"]["classify_ii"]["structure_constants"]);
  CHECK(ri.data["stages"]["classify_i"]["table_matches_reference"] == true);
  // Degree 2 finds more than the five printed fields; the exit code says so.
  CHECK(ri.data["stages"]["classify_i"]["dimension"] == 8);
  CHECK(ri.exit_code == 1);
}

TEST_CASE("small ansatz note") {
  auto c = config("classify");
  c.degree = 0;
  auto r = run(c);
  CHECK(r.data["stages"]["classify_i"]["dimension"] == 3);
  CHECK(r.exit_code == 1);
  CHECK(r.data["discrepancies"][0]["message"].get<std::string>().find("too small") != std::string::npos);
}

TEST_CASE("trivial generator note") {
  auto c = config("reduce");
  c.generator = "v3";
  auto r = run(c);
  CHECK(r.data["stages"]["reduce_i_v3"]["note"] == "invariants: x, t, u arbitrary function (mu)");
  CHECK(r.exit_code == 0);
}

TEST_CASE("explicit solution sign flag") {
  auto c = config("reduce");
  c.generator = "v4";
  auto r = run(c);
  bool flagged = false;
  for (const auto& d : r.data["discrepancies"]) flagged = flagged || d["id"] == "explicit-sign";
  CHECK(flagged);
  CHECK(r.data["stages"]["reduce_i_v4"]["explicit"]["exact"] == true);
}

TEST_CASE("verify suite") {
  auto c = config("verify");
  auto r = run(c);
  CHECK(r.exit_code == 0);
  c.tol = 1e-12;
  CHECK(run(c).exit_code == 1);
}

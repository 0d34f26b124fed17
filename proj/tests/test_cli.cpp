#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "geosched/cli.hpp"
#include "geosched/scenario.hpp"
#include "support.hpp"

using namespace geosched;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path tiny() { return testing::data_dir() / "scenarios/tiny/scenario.json"; }

// Copies the tiny scenario next to a patched scenario document.
fs::path patched_tiny(const testing::TempDir& dir, const json& patch,
                      const std::string& latency_csv = "") {
  auto src = tiny().parent_path();
  for (const char* f : {"environment.csv", "latency.csv", "trace.csv"}) {
    fs::copy_file(src / f, dir.path() / f, fs::copy_options::overwrite_existing);
  }
  if (!latency_csv.empty()) dir.write("latency.csv", latency_csv);
  json doc = json::parse(testing::slurp(tiny()));
  doc.merge_patch(patch);
  return dir.write("scenario.json", doc.dump(2));
}

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(const RunConfig& c) {
  std::ostringstream out, err;
  int status = cmd_run(c, out, err);
  return {status, out.str(), err.str()};
}

Outcome validate(const fs::path& p) {
  std::ostringstream out, err;
  int status = cmd_validate(p, out, err);
  return {status, out.str(), err.str()};
}

Outcome oracle(const fs::path& p) {
  std::ostringstream out, err;
  int status = cmd_oracle(p, {}, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run writes the three artifacts") {
  testing::TempDir dir("run");
  RunConfig c;
  c.scenario = tiny();
  c.out_dir = dir.path() / "out";
  auto r = run(c);
  REQUIRE(r.status == 0);
  CHECK(r.err.empty());
  CHECK(r.out.find("opt-balance: ttft") != std::string::npos);

  auto metrics = testing::slurp(c.out_dir / "metrics.csv");
  CHECK(metrics.rfind("epoch,site_id,mode,e_it_kwh,e_crac_kwh,e_cooling_kwh,e_cond_kwh,"
                      "e_total_kwh,cost,w_evap_l,w_blowdown_l,w_grid_l,c_grid_kg,c_water_kg,"
                      "ttft_mean_s,ttft_p95_s,requests,schema_version\n",
                      0) == 0);
  // 7 runs x 4 epochs x 3 sites plus the header.
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 7 * 4 * 3 + 1);

  auto normalized = testing::slurp(c.out_dir / "normalized.csv");
  CHECK(normalized.rfind("metric,mode,value,schema_version\n", 0) == 0);
  CHECK(normalized.find("ttft,queue-split,1,1\n") != std::string::npos);
  CHECK(std::count(normalized.begin(), normalized.end(), '\n') == 4 * 7 + 1);

  auto summary = json::parse(testing::slurp(c.out_dir / "summary.json"));
  CHECK(summary["schema_version"] == 1);
  CHECK(summary["scenario"] == "tiny");
  CHECK(summary["seed"] == 7);
  CHECK(summary["normalize_against"] == "queue-split");
  const auto& defaults = summary["parameters"]["defaults"];
  CHECK(defaults["heat_capacity_kwh_per_l"] == 0.68);
  CHECK(defaults["blowdown_ratio"] == 0.2);
  CHECK(defaults["potable_ei_kwh_per_l"] == 0.004);
  CHECK(defaults["wastewater_ei_kwh_per_l"] == 0.001);
  CHECK(defaults["cop_curve"][0]["temp_c"] == -3.9);
  CHECK(defaults["cop_curve"][1]["ppue"] == 1.3);
  CHECK(summary["runs"].size() == 7);
}

TEST_CASE("runs are byte-identical") {
  testing::TempDir dir("det");
  RunConfig c;
  c.scenario = tiny();
  c.out_dir = dir.path() / "a";
  REQUIRE(run(c).status == 0);
  c.out_dir = dir.path() / "b";
  REQUIRE(run(c).status == 0);
  for (const char* f : {"metrics.csv", "summary.json", "normalized.csv"}) {
    CHECK(testing::slurp(dir.path() / "a" / f) == testing::slurp(dir.path() / "b" / f));
  }
}

// Regenerate with: geosched run --scenario data/scenarios/tiny/scenario.json
//                   --out data/goldens/tiny
TEST_CASE("tiny scenario matches the committed goldens") {
  testing::TempDir dir("golden");
  RunConfig c;
  c.scenario = tiny();
  c.out_dir = dir.path();
  REQUIRE(run(c).status == 0);
  auto golden = testing::data_dir() / "goldens/tiny";
  for (const char* f : {"metrics.csv", "summary.json", "normalized.csv"}) {
    INFO(f);
    CHECK(testing::slurp(dir.path() / f) == testing::slurp(golden / f));
  }
}

TEST_CASE("scheduler and mode selection") {
  testing::TempDir dir("sel");
  RunConfig c;
  c.scenario = tiny();
  c.out_dir = dir.path();
  c.scheduler = "flow-greedy";
  c.emit_metrics = false;
  c.emit_summary = false;
  auto r = run(c);
  REQUIRE(r.status == 0);
  // The normalization run is added when it was not selected.
  CHECK(r.out.find("flow-greedy:") != std::string::npos);
  CHECK(r.out.find("queue-split:") != std::string::npos);
  CHECK(r.out.find("opt-") == std::string::npos);
  CHECK_FALSE(fs::exists(dir.path() / "metrics.csv"));
  CHECK(fs::exists(dir.path() / "normalized.csv"));

  c.scheduler = "admm";
  c.modes = {"opt-water"};
  r = run(c);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("opt-water:") != std::string::npos);
  CHECK(r.out.find("opt-cost:") == std::string::npos);

  c.modes = {"opt-speed"};
  r = run(c);
  CHECK(r.status != 0);
  CHECK(json::parse(r.err)["error"]["kind"] == "config");
}

TEST_CASE("a missing scenario is a config error naming the path") {
  RunConfig c;
  c.scenario = "/nonexistent/scenario.json";
  auto r = run(c);
  CHECK(r.status != 0);
  auto doc = json::parse(r.err);
  CHECK(doc["error"]["kind"] == "config");
  CHECK(doc["error"]["message"].get<std::string>().find("/nonexistent/scenario.json") !=
        std::string::npos);
  auto v = validate("/nonexistent/scenario.json");
  CHECK(v.status != 0);
  CHECK(json::parse(v.err)["error"]["kind"] == "config");
}

TEST_CASE("bundled scenarios validate") {
  for (const char* name : {"tiny", "au20"}) {
    auto r = validate(testing::data_dir() / "scenarios" / name / "scenario.json");
    CHECK(r.status == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS latency completeness") != std::string::npos);
  }
}

TEST_CASE("validation names a missing latency pair") {
  testing::TempDir dir("lat");
  auto p = patched_tiny(dir, json::object(),
                        "origin_region,site_id,latency_s\n"
                        "island,island,0.002\nisland,north,0.021\nisland,south,0.009\n"
                        "north,island,0.021\nnorth,north,0.002\nnorth,south,0.014\n"
                        "south,island,0.009\nsouth,south,0.002\n");
  auto r = validate(p);
  CHECK(r.status == 2);
  CHECK(r.out.find("FAIL latency completeness") != std::string::npos);
  CHECK(r.out.find("(south, north)") != std::string::npos);
  CHECK(r.out.find("PASS site specs") != std::string::npos);
}

TEST_CASE("validation rejects a blowdown ratio of one") {
  testing::TempDir dir("d1");
  json patch = {{"sites",
                 {{{"site_id", "south"}, {"region", "south"}},
                  {{"site_id", "north"}, {"region", "north"}},
                  {{"site_id", "island"}, {"region", "island"},
                   {"water", {{"blowdown_ratio", 1.0}}}}}}};
  auto r = validate(patched_tiny(dir, patch));
  CHECK(r.status == 2);
  CHECK(r.out.find("FAIL site specs") != std::string::npos);
  CHECK(r.out.find("0 <= D < 1") != std::string::npos);
  // Stages that need the sites are reported as skipped.
  CHECK(r.out.find("skipped") != std::string::npos);
}

TEST_CASE("oracle on the bundled seed-7 instance") {
  auto r = oracle(testing::data_dir() / "instances/seed7.json");
  REQUIRE(r.status == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["relaxed"]["gap"].get<double>() <= 0.01);
  CHECK(doc["integral"]["gap"].get<double>() <= 0.05);
  CHECK(doc["requests"] == 12);
  CHECK(doc["sites"] == 4);
}

TEST_CASE("oracle refuses oversized instances") {
  testing::TempDir dir("big");
  auto p = testing::ProblemBuilder().site("a", 20, 0.2, 0.5, 2.0, 12).site("b").requests(13).build();
  std::ostringstream s;
  write_instance(s, p);
  auto r = oracle(dir.write("big.json", s.str()));
  CHECK(r.status != 0);
  auto doc = json::parse(r.err);
  CHECK(doc["error"]["kind"] == "contract");
  CHECK(doc["error"]["message"].get<std::string>().find("12 requests") != std::string::npos);
}

TEST_CASE("oracle gap is zero with a single site") {
  testing::TempDir dir("one");
  auto p = testing::ProblemBuilder().site("only", 20, 0.2, 0.5, 2.0, 8).requests(5).build();
  std::ostringstream s;
  write_instance(s, p);
  auto r = oracle(dir.write("one.json", s.str()));
  REQUIRE(r.status == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["integral"]["gap"].get<double>() == 0.0);
  CHECK(std::abs(doc["relaxed"]["gap"].get<double>()) <= 1e-9);
}

TEST_CASE("instances round trip") {
  auto p = random_problem(3, 3, 7);
  p.resident.insert({"s1", "small"});
  std::ostringstream a;
  write_instance(a, p);
  testing::TempDir dir("rt");
  auto back = load_instance(dir.write("i.json", a.str()));
  std::ostringstream b;
  write_instance(b, back);
  CHECK(a.str() == b.str());
  CHECK(back.requests == p.requests);
  CHECK(back.is_resident(1, "small"));
}

TEST_CASE("error documents") {
  auto doc = json::parse(error_json("ingest", "bad \"row\""));
  CHECK(doc["error"]["kind"] == "ingest");
  CHECK(doc["error"]["message"] == "bad \"row\"");
}

}  // TEST_SUITE

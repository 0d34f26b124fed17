#include <doctest.h>

#include "geosched/env_model.hpp"
#include "geosched/errors.hpp"
#include "support.hpp"

using namespace geosched;
using testing::rel_close;

TEST_SUITE("env-model") {

TEST_CASE("CoP at the curve anchors and beyond") {
  CopCurve curve = CopCurve::standard();
  CHECK(rel_close(cop_at(curve, 35.0), 10.0, 1e-12));
  CHECK(rel_close(cop_at(curve, -3.9), 60.0, 1e-12));
  CHECK(rel_close(cop_at(curve, 50.0), 10.0, 1e-12));
  CHECK(rel_close(cop_at(curve, -40.0), 60.0, 1e-12));
}

TEST_CASE("CoP at the interpolation midpoint") {
  CopCurve curve = CopCurve::standard();
  CHECK(rel_close(curve.ppue_at(15.55), 1.175, 1e-12));
  CHECK(rel_close(cop_at(curve, 15.55), 3.0 / 0.175, 1e-12));
  CHECK(rel_close(cop_at(curve, 15.55), 17.142857142857142, 1e-9));
}

TEST_CASE("CoP is non-increasing in temperature") {
  CopCurve curve({{-10.0, 1.02}, {5.0, 1.08}, {20.0, 1.08}, {40.0, 1.4}});
  double prev = cop_at(curve, -30.0);
  for (int k = 0; k <= 1000; ++k) {
    double t = -30.0 + 90.0 * k / 1000.0;
    double c = cop_at(curve, t);
    CHECK(c > 0);
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("invalid CoP curves are rejected") {
  CHECK_THROWS_AS(CopCurve({{0.0, 1.1}}), ConfigError);
  CHECK_THROWS_AS(CopCurve({{10.0, 1.1}, {10.0, 1.2}}), ConfigError);
  CHECK_THROWS_AS(CopCurve({{10.0, 1.1}, {5.0, 1.2}}), ConfigError);
  CHECK_THROWS_AS(CopCurve({{0.0, 1.0}, {10.0, 1.2}}), ConfigError);
}

TEST_CASE("water parameters enforce the blowdown range") {
  WaterParams w;
  CHECK_NOTHROW(w.validate());
  w.blowdown_ratio = 1.0;
  CHECK_THROWS_WITH_AS(w.validate(), doctest::Contains("0 <= D < 1"), ConfigError);
  w.blowdown_ratio = -0.1;
  CHECK_THROWS_AS(w.validate(), ConfigError);
  w = WaterParams{};
  w.heat_capacity_kwh_per_l = 0;
  CHECK_THROWS_AS(w.validate(), ConfigError);
}

TEST_CASE("working-state proportions are ordered") {
  CHECK_NOTHROW(WorkingStateProfile(1.0, 0.3, 0.0));
  CHECK_THROWS_AS(WorkingStateProfile(0.2, 0.3, 0.0), ConfigError);
  CHECK_THROWS_AS(WorkingStateProfile(1.2, 0.3, 0.0), ConfigError);
  CHECK_THROWS_AS(WorkingStateProfile(1.0, 0.3, -0.1), ConfigError);
  WorkingStateProfile p;
  CHECK(p.proportion(WorkingState::On) == 1.0);
  CHECK(p.proportion(WorkingState::Idle) == 0.3);
  CHECK(p.proportion(WorkingState::Off) == 0.0);
}

TEST_CASE("site and node validation") {
  SiteSpec s;
  s.site_id = "a";
  CHECK_NOTHROW(s.validate());
  s.node_count = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.node_count = 2;
  s.node.tdp_w = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.node = NodeSpec{};
  s.node.gpu_count = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

const char* kEnvHeader =
    "site_id,epoch,ambient_temp_c,tou_price_per_kwh,carbon_intensity_kg_per_kwh,"
    "water_intensity_l_per_kwh,potable_ei_kwh_per_l,wastewater_ei_kwh_per_l\n";

TEST_CASE("environment table loads a complete grid") {
  testing::TempDir dir("env");
  std::string body = kEnvHeader;
  for (const char* site : {"A", "B"}) {
    for (int e = 0; e < 3; ++e) {
      body += std::string(site) + "," + std::to_string(e) + ",20,0.3,0.7,1.5,0.004,0.001\n";
    }
  }
  auto table = load_environment(dir.write("env.csv", body));
  CHECK(table.size() == 6);
  CHECK(table.epoch_count() == 3);
  CHECK(table.at("B", 2).carbon_intensity_kg_per_kwh == 0.7);
  CHECK_THROWS_AS(table.at("C", 0), ContractError);
}

TEST_CASE("negative intensity is reported with its row") {
  testing::TempDir dir("env");
  std::string body = std::string(kEnvHeader) + "A,0,20,0.3,0.7,1.5,0.004,0.001\n" +
                     "A,1,20,0.3,-0.7,1.5,0.004,0.001\n";
  try {
    load_environment(dir.write("env.csv", body));
    FAIL("expected an ingestion error");
  } catch (const IngestError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("carbon_intensity") != std::string::npos);
  }
}

TEST_CASE("missing epoch is reported as a gap") {
  testing::TempDir dir("env");
  std::string body = kEnvHeader;
  for (int e = 0; e < 3; ++e) body += "A," + std::to_string(e) + ",20,0.3,0.7,1.5,0.004,0.001\n";
  for (int e = 0; e < 2; ++e) body += "B," + std::to_string(e) + ",20,0.3,0.7,1.5,0.004,0.001\n";
  CHECK_THROWS_WITH(load_environment(dir.write("env.csv", body)),
                    doctest::Contains("site B missing epoch 2"));
}

TEST_CASE("unknown sites and malformed rows are rejected") {
  testing::TempDir dir("env");
  std::string body = std::string(kEnvHeader) + "A,0,20,0.3,0.7,1.5,0.004,0.001\n" +
                     "Z,0,20,0.3,0.7,1.5,0.004,0.001\n";
  std::vector<std::string> known = {"A"};
  CHECK_THROWS_AS(load_environment(dir.write("env.csv", body), known), IngestError);

  std::string short_row = std::string(kEnvHeader) + "A,0,20,0.3\n";
  CHECK_THROWS_AS(load_environment(dir.write("short.csv", short_row)), IngestError);
  std::string bad_num = std::string(kEnvHeader) + "A,zero,20,0.3,0.7,1.5,0.004,0.001\n";
  CHECK_THROWS_AS(load_environment(dir.write("bad.csv", bad_num)), IngestError);
  CHECK_THROWS_AS(load_environment(dir.write("hdr.csv", "site,epoch\nA,0\n")), IngestError);

  std::vector<std::string> more = {"A", "B"};
  CHECK_THROWS_AS(
      load_environment(dir.write("one.csv", std::string(kEnvHeader) +
                                                "A,0,20,0.3,0.7,1.5,0.004,0.001\n"),
                       more),
      Error);
}

}  // TEST_SUITE

#include <doctest.h>

#include <sstream>

#include "geosched/errors.hpp"
#include "geosched/workload.hpp"
#include "support.hpp"

using namespace geosched;
using testing::rel_close;

namespace {

ModelProfile model(double bytes = 14e9, double kv = 524288, double prefill = 2000) {
  return ModelProfile{"m", bytes, kv, prefill};
}

InferenceRequest request(std::int64_t input, std::int64_t output) {
  return InferenceRequest{"r", 0, "m", input, output, "north"};
}

SynthTraceParams synth(std::uint64_t seed, int epochs, double rate) {
  SynthTraceParams p;
  p.seed = seed;
  p.epochs = epochs;
  p.mean_rate = {rate};
  p.model_mix = {{"a", 0.7}, {"b", 0.3}};
  p.region_mix = {{"north", 1.0}, {"south", 2.0}};
  return p;
}

}  // namespace

TEST_SUITE("workload") {

TEST_CASE("request memory") {
  CHECK(request_memory_bytes(request(10, 256), model()) == 14e9 + 1.34217728e8);
  CHECK(rel_close(request_memory_bytes(request(10, 256), model()), 1.4134217728e10, 1e-12));
  CHECK(request_memory_bytes(request(10, 0), model()) == 14e9);
  CHECK(request_memory_bytes(request(10, 5000), model(14e9, 0)) == 14e9);
  InferenceRequest other = request(10, 1);
  other.model_id = "x";
  CHECK_THROWS_AS(request_memory_bytes(other, model()), ContractError);
}

TEST_CASE("request memory is affine in output tokens") {
  auto m = model(7e9, 131072);
  double base = request_memory_bytes(request(1, 0), m);
  for (std::int64_t n : {1, 7, 1000, 65536}) {
    CHECK(request_memory_bytes(request(1, n), m) - base == static_cast<double>(n) * 131072.0);
  }
}

TEST_CASE("load overhead") {
  NodeSpec node;
  CHECK(rel_close(load_overhead_s(model(14e9), node), 7.0, 1e-12));
  CHECK(load_overhead_s(model(2e9), node) == 1.0);
  CHECK(rel_close(load_overhead_s(model(1e6), node), 5e-4, 1e-12));
}

TEST_CASE("time to first token") {
  NodeSpec node;
  auto m = model();
  CHECK(rel_close(ttft_estimate(request(1000, 0), m, node, 0.0, true, 0.0).total(), 0.5, 1e-12));
  auto cold = ttft_estimate(request(1000, 0), m, node, 0.0, false, 0.0);
  CHECK(rel_close(cold.load_s, 7.0, 1e-12));
  CHECK(rel_close(cold.total(), 7.5, 1e-12));
  CHECK(rel_close(ttft_estimate(request(1, 0), m, node, 0.0, true, 0.0).total(), 5e-4, 1e-12));
  auto all = ttft_estimate(request(1000, 0), m, node, 0.25, false, 0.01);
  CHECK(all.network_s == 0.01);
  CHECK(all.queue_s == 0.25);
  CHECK(rel_close(all.total(), 0.01 + 0.25 + 7.0 + 0.5, 1e-12));
}

TEST_CASE("time to first token is monotone in each term") {
  NodeSpec node;
  auto m = model();
  double prev = 0.0;
  for (int k = 0; k < 50; ++k) {
    double t = ttft_estimate(request(1 + 100 * k, 0), m, node, 0.01 * k, true, 0.002 * k).total();
    CHECK(t >= prev);
    prev = t;
  }
  CHECK(ttft_estimate(request(10, 0), m, node, 0, false, 0).total() >=
        ttft_estimate(request(10, 0), m, node, 0, true, 0).total());
}

TEST_CASE("queue proxy") {
  double cap = site_service_capacity(640e9, 16e9, 0.5, 3600.0);
  CHECK(rel_close(cap, 40.0 * 7200.0, 1e-12));
  CHECK(rel_close(queue_wait_s(cap, cap, 3600.0), 3600.0, 1e-12));
  CHECK(queue_wait_s(0.0, cap, 3600.0) == 0.0);
  CHECK(rel_close(queue_wait_s(10.0, cap, 3600.0), 10.0 * 0.5 * 16e9 / 640e9, 1e-12));
}

const char* kTraceHeader = "request_id,arrival_epoch,model_id,input_tokens,output_tokens,origin_region\n";

TEST_CASE("trace ingestion sorts by arrival then id") {
  testing::TempDir dir("trace");
  auto path = dir.write("t.csv", std::string(kTraceHeader) +
                                     "c,2,m,10,5,north\n"
                                     "b,0,m,20,0,south\n"
                                     "a,2,m,30,7,north\n");
  auto reqs = ingest_trace(path);
  REQUIRE(reqs.size() == 3);
  CHECK(reqs[0].request_id == "b");
  CHECK(reqs[1].request_id == "a");
  CHECK(reqs[2].request_id == "c");
  CHECK(reqs[1].input_tokens == 30);
  CHECK(reqs[1].output_tokens == 7);
  CHECK(reqs[0].origin_region == "south");
}

TEST_CASE("trace ingestion rejects invalid rows with their row number") {
  testing::TempDir dir("trace");
  auto path = dir.write("t.csv", std::string(kTraceHeader) + "a,0,m,10,5,north\nb,0,m,0,5,north\n");
  try {
    ingest_trace(path);
    FAIL("expected an ingestion error");
  } catch (const IngestError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(ingest_trace(dir.write("neg.csv", std::string(kTraceHeader) + "a,0,m,10,-1,n\n")),
                  IngestError);
  CHECK_THROWS_AS(ingest_trace(dir.write("ep.csv", std::string(kTraceHeader) + "a,-1,m,10,1,n\n")),
                  IngestError);
  CHECK_THROWS_AS(ingest_trace(dir.path() / "missing.csv"), Error);
}

TEST_CASE("trace round trip") {
  testing::TempDir dir("trace");
  auto original = synth_trace(synth(3, 5, 4.0));
  REQUIRE(!original.empty());
  std::ostringstream out;
  write_trace(out, original);
  auto back = ingest_trace(dir.write("rt.csv", out.str()));
  CHECK(back == original);
}

TEST_CASE("latency table") {
  testing::TempDir dir("lat");
  auto lat = load_latency(dir.write("l.csv", "origin_region,site_id,latency_s\nn,a,0.01\nn,b,0.02\n"));
  CHECK(lat.at("n", "b") == 0.02);
  CHECK(lat.contains("n", "a"));
  CHECK_FALSE(lat.contains("s", "a"));
  CHECK_THROWS_AS(lat.at("s", "a"), ContractError);
  CHECK_THROWS_AS(load_latency(dir.write("bad.csv", "origin_region,site_id,latency_s\nn,a,-1\n")),
                  IngestError);
}

TEST_CASE("synthetic trace is deterministic in its seed") {
  auto a = synth_trace(synth(42, 20, 6.0));
  auto b = synth_trace(synth(42, 20, 6.0));
  auto c = synth_trace(synth(43, 20, 6.0));
  CHECK(a == b);
  CHECK_FALSE(a == c);
  std::ostringstream sa, sb;
  write_trace(sa, a);
  write_trace(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("synthetic trace with zero rates is empty") {
  CHECK(synth_trace(synth(1, 50, 0.0)).empty());
}

TEST_CASE("synthetic trace counts concentrate around the Poisson mean") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = synth_trace(synth(seed, 100, 10.0));
    CHECK(t.size() >= 700);
    CHECK(t.size() <= 1300);
    for (const auto& r : t) {
      CHECK(r.input_tokens >= 1);
      CHECK(r.output_tokens >= 0);
      CHECK(r.arrival_epoch < 100);
    }
  }
}

TEST_CASE("synthetic trace follows its per-epoch rates and mixes") {
  auto p = synth(8, 3, 0.0);
  p.mean_rate = {0.0, 500.0, 0.0};
  auto t = synth_trace(p);
  int north = 0;
  for (const auto& r : t) {
    CHECK(r.arrival_epoch == 1);
    north += r.origin_region == "north";
  }
  CHECK(t.size() > 400);
  double share = static_cast<double>(north) / static_cast<double>(t.size());
  CHECK(share > 0.2);
  CHECK(share < 0.45);
  p.mean_rate = {1.0, 2.0};
  CHECK_THROWS_AS(synth_trace(p), ConfigError);
}

TEST_CASE("model profile validation") {
  CHECK_NOTHROW(model().validate());
  CHECK_THROWS_AS(model(0).validate(), ConfigError);
  CHECK_THROWS_AS(model(1e9, -1).validate(), ConfigError);
  CHECK_THROWS_AS(model(1e9, 0, 0).validate(), ConfigError);
}

}  // TEST_SUITE

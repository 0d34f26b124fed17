#include "geosched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "geosched/csv.hpp"
#include "geosched/errors.hpp"

namespace geosched {

void ModelProfile::validate() const {
  if (model_id.empty()) throw ConfigError("model_id must be non-empty");
  if (!(param_bytes > 0)) throw ConfigError("model " + model_id + ": param_bytes must be > 0");
  if (!(kv_bytes_per_token >= 0)) {
    throw ConfigError("model " + model_id + ": kv_bytes_per_token must be >= 0");
  }
  if (!(prefill_tokens_per_s > 0)) {
    throw ConfigError("model " + model_id + ": prefill rate must be > 0");
  }
}

void LatencyMatrix::set(const std::string& region, const std::string& site_id,
                        double seconds) {
  if (!(seconds >= 0)) throw ConfigError("latency must be >= 0");
  entries_[{region, site_id}] = seconds;
}

double LatencyMatrix::at(const std::string& region, const std::string& site_id) const {
  auto it = entries_.find({region, site_id});
  if (it == entries_.end()) {
    throw ContractError("no latency entry for (" + region + ", " + site_id + ")");
  }
  return it->second;
}

bool LatencyMatrix::contains(const std::string& region, const std::string& site_id) const {
  return entries_.count({region, site_id}) > 0;
}

LatencyMatrix load_latency(const std::filesystem::path& path) {
  static const std::vector<std::string> header = {"origin_region", "site_id", "latency_s"};
  LatencyMatrix m;
  for (const auto& row : csv::read(path, header)) {
    double v = csv::parse_double(row.fields[2], row.line, header[2]);
    if (v < 0) throw IngestError("negative latency", row.line);
    if (m.contains(row.fields[0], row.fields[1])) {
      throw IngestError("duplicate latency entry", row.line);
    }
    m.set(row.fields[0], row.fields[1], v);
  }
  return m;
}

double request_memory_bytes(const InferenceRequest& req, const ModelProfile& profile) {
  if (req.model_id != profile.model_id) {
    throw ContractError("request " + req.request_id + " uses model " + req.model_id +
                        ", profile is " + profile.model_id);
  }
  return profile.param_bytes + static_cast<double>(req.output_tokens) * profile.kv_bytes_per_token;
}

double load_overhead_s(const ModelProfile& profile, const NodeSpec& node) {
  if (!(node.bandwidth_bytes_per_s > 0)) throw DomainError("node bandwidth must be > 0");
  return profile.param_bytes / node.bandwidth_bytes_per_s;
}

double prefill_time_s(const InferenceRequest& req, const ModelProfile& profile) {
  return static_cast<double>(req.input_tokens) / profile.prefill_tokens_per_s;
}

TtftTerms ttft_estimate(const InferenceRequest& req, const ModelProfile& profile,
                        const NodeSpec& node, double queue_wait, bool model_resident,
                        double net_latency_s) {
  TtftTerms t;
  t.network_s = net_latency_s;
  t.queue_s = queue_wait;
  t.load_s = model_resident ? 0.0 : load_overhead_s(profile, node);
  t.prefill_s = prefill_time_s(req, profile);
  return t;
}

double site_service_capacity(double site_memory_bytes, double mean_request_memory_bytes,
                             double mean_service_s, double epoch_seconds) {
  if (!(mean_request_memory_bytes > 0) || !(mean_service_s > 0)) {
    throw DomainError("service capacity needs positive request memory and service time");
  }
  double slots = site_memory_bytes / mean_request_memory_bytes;
  return slots * epoch_seconds / mean_service_s;
}

double queue_wait_s(double site_load_requests, double service_capacity_requests,
                    double epoch_seconds) {
  if (!(service_capacity_requests > 0)) throw DomainError("service capacity must be > 0");
  return site_load_requests / service_capacity_requests * epoch_seconds;
}

namespace {

void sort_trace(std::vector<InferenceRequest>& reqs) {
  std::stable_sort(reqs.begin(), reqs.end(), [](const auto& a, const auto& b) {
    if (a.arrival_epoch != b.arrival_epoch) return a.arrival_epoch < b.arrival_epoch;
    return a.request_id < b.request_id;
  });
}

}  // namespace

std::vector<InferenceRequest> ingest_trace(const std::filesystem::path& path) {
  static const std::vector<std::string> header = {"request_id",   "arrival_epoch",
                                                  "model_id",     "input_tokens",
                                                  "output_tokens", "origin_region"};
  std::vector<InferenceRequest> out;
  for (const auto& row : csv::read(path, header)) {
    const auto& f = row.fields;
    InferenceRequest r;
    r.request_id = f[0];
    if (r.request_id.empty()) throw IngestError("empty request_id", row.line);
    auto epoch = csv::parse_int(f[1], row.line, header[1]);
    if (epoch < 0) throw IngestError("arrival_epoch must be >= 0", row.line);
    r.arrival_epoch = static_cast<int>(epoch);
    r.model_id = f[2];
    if (r.model_id.empty()) throw IngestError("empty model_id", row.line);
    r.input_tokens = csv::parse_int(f[3], row.line, header[3]);
    if (r.input_tokens < 1) throw IngestError("input_tokens must be >= 1", row.line);
    r.output_tokens = csv::parse_int(f[4], row.line, header[4]);
    if (r.output_tokens < 0) throw IngestError("output_tokens must be >= 0", row.line);
    r.origin_region = f[5];
    if (r.origin_region.empty()) throw IngestError("empty origin_region", row.line);
    out.push_back(std::move(r));
  }
  sort_trace(out);
  return out;
}

void write_trace(std::ostream& out, std::span<const InferenceRequest> requests) {
  out << "request_id,arrival_epoch,model_id,input_tokens,output_tokens,origin_region\n";
  for (const auto& r : requests) {
    out << r.request_id << ',' << r.arrival_epoch << ',' << r.model_id << ','
        << r.input_tokens << ',' << r.output_tokens << ',' << r.origin_region << '\n';
  }
}

namespace {

std::int64_t draw_tokens(std::mt19937_64& rng, const LogNormalTokens& p, std::int64_t floor) {
  std::lognormal_distribution<double> dist(p.log_mean, p.log_sigma);
  auto v = static_cast<std::int64_t>(std::llround(dist(rng)));
  return std::clamp<std::int64_t>(v, floor, std::max(floor, p.max_tokens));
}

template <typename Mix>
std::discrete_distribution<std::size_t> mix_distribution(const Mix& mix, const char* what) {
  if (mix.empty()) throw ConfigError(std::string("synthetic trace needs a non-empty ") + what);
  std::vector<double> w;
  for (const auto& [_, weight] : mix) {
    if (!(weight >= 0)) throw ConfigError(std::string(what) + " weights must be >= 0");
    w.push_back(weight);
  }
  return std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

}  // namespace

std::vector<InferenceRequest> synth_trace(const SynthTraceParams& params) {
  if (params.epochs < 0) throw ConfigError("synthetic trace epochs must be >= 0");
  if (params.mean_rate.empty()) throw ConfigError("synthetic trace needs a mean rate");
  for (double r : params.mean_rate) {
    if (!(r >= 0)) throw ConfigError("synthetic trace rates must be >= 0");
  }
  if (params.mean_rate.size() != 1 &&
      params.mean_rate.size() != static_cast<std::size_t>(params.epochs)) {
    throw ConfigError("mean_rate must have 1 or `epochs` entries");
  }

  // Substream 1 of the configured seed is reserved for trace generation.
  std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                    static_cast<std::uint32_t>(params.seed >> 32), 1u};
  std::mt19937_64 rng(seq);

  std::vector<InferenceRequest> out;
  bool any_rate = std::any_of(params.mean_rate.begin(), params.mean_rate.end(),
                              [](double r) { return r > 0; });
  if (!any_rate) return out;
  auto model_pick = mix_distribution(params.model_mix, "model mix");
  auto region_pick = mix_distribution(params.region_mix, "region mix");

  for (int e = 0; e < params.epochs; ++e) {
    double rate = params.mean_rate.size() == 1 ? params.mean_rate[0] : params.mean_rate[e];
    if (rate <= 0) continue;
    std::poisson_distribution<long> count_dist(rate);
    long count = count_dist(rng);
    for (long k = 0; k < count; ++k) {
      InferenceRequest r;
      char id[32];
      std::snprintf(id, sizeof id, "e%05d-%06ld", e, k);
      r.request_id = id;
      r.arrival_epoch = e;
      r.model_id = params.model_mix[model_pick(rng)].first;
      r.origin_region = params.region_mix[region_pick(rng)].first;
      r.input_tokens = draw_tokens(rng, params.input_tokens, 1);
      r.output_tokens = draw_tokens(rng, params.output_tokens, 0);
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace geosched

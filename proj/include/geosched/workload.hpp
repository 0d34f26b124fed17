#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geosched/env_model.hpp"

namespace geosched {

struct ModelProfile {
  std::string model_id;
  double param_bytes = 0;
  double kv_bytes_per_token = 0;
  double prefill_tokens_per_s = 1;  // per node

  void validate() const;
};

struct InferenceRequest {
  std::string request_id;
  int arrival_epoch = 0;
  std::string model_id;
  std::int64_t input_tokens = 1;
  std::int64_t output_tokens = 0;
  std::string origin_region;

  friend bool operator==(const InferenceRequest&, const InferenceRequest&) = default;
};

/// One-way network latency from a demand region to a site.
class LatencyMatrix {
 public:
  void set(const std::string& region, const std::string& site_id, double seconds);
  double at(const std::string& region, const std::string& site_id) const;
  bool contains(const std::string& region, const std::string& site_id) const;
  const std::map<std::pair<std::string, std::string>, double>& entries() const {
    return entries_;
  }

 private:
  std::map<std::pair<std::string, std::string>, double> entries_;
};

LatencyMatrix load_latency(const std::filesystem::path& path);

/// Model weights plus the KV cache grown over all output tokens, bytes.
double request_memory_bytes(const InferenceRequest& req, const ModelProfile& profile);

/// Time to stream the model weights onto a node, seconds.
double load_overhead_s(const ModelProfile& profile, const NodeSpec& node);

double prefill_time_s(const InferenceRequest& req, const ModelProfile& profile);

struct TtftTerms {
  double network_s = 0;
  double queue_s = 0;
  double load_s = 0;
  double prefill_s = 0;

  double total() const { return network_s + queue_s + load_s + prefill_s; }
};

/// Time to first token: network + queue + (load unless resident) + prefill.
TtftTerms ttft_estimate(const InferenceRequest& req, const ModelProfile& profile,
                        const NodeSpec& node, double queue_wait_s, bool model_resident,
                        double net_latency_s);

/// Requests a site can serve per epoch: concurrent memory slots times the
/// number of service periods in the epoch.
double site_service_capacity(double site_memory_bytes, double mean_request_memory_bytes,
                             double mean_service_s, double epoch_seconds);

/// Linear congestion proxy: (load / service capacity) * epoch duration.
double queue_wait_s(double site_load_requests, double service_capacity_requests,
                    double epoch_seconds);

/// Parses a trace CSV; output sorted by (arrival_epoch, request_id).
std::vector<InferenceRequest> ingest_trace(const std::filesystem::path& path);

/// Writes requests in the trace CSV schema.
void write_trace(std::ostream& out, std::span<const InferenceRequest> requests);

struct LogNormalTokens {
  double log_mean = 6.0;  // mean of ln(tokens)
  double log_sigma = 0.8;
  std::int64_t max_tokens = 8192;
};

struct SynthTraceParams {
  std::uint64_t seed = 42;
  int epochs = 24;
  std::vector<double> mean_rate{10.0};  // per epoch; one value is broadcast
  LogNormalTokens input_tokens{6.0, 0.8, 8192};
  LogNormalTokens output_tokens{5.5, 0.7, 4096};
  std::vector<std::pair<std::string, double>> model_mix;   // id, weight
  std::vector<std::pair<std::string, double>> region_mix;  // region, weight
};

/// Poisson arrivals per epoch, log-normal token lengths. Deterministic in
/// `params.seed`.
std::vector<InferenceRequest> synth_trace(const SynthTraceParams& params);

}  // namespace geosched

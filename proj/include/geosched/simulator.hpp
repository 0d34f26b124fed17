#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geosched/baselines.hpp"
#include "geosched/scheduler.hpp"

namespace geosched {

enum class RunKind { Admm, Baseline };

/// One scheduler configuration to simulate, identified by its label
/// ("opt-cost", ..., "queue-split", "flow-greedy").
struct RunSpec {
  std::string label;
  RunKind kind = RunKind::Admm;
  Mode mode = Mode::OptBalance;
  BaselineKind baseline = BaselineKind::QueueSplit;

  static RunSpec admm(Mode mode);
  static RunSpec from_baseline(BaselineKind kind);
};

std::optional<RunSpec> parse_run(std::string_view label);
/// The five ADMM modes followed by both baselines.
std::vector<RunSpec> all_runs();

struct Scenario {
  std::string name;
  std::vector<SiteSpec> sites;  // sorted by site_id
  EnvironmentTable environment;
  std::vector<InferenceRequest> trace;  // sorted by (arrival_epoch, request_id)
  std::map<std::string, ModelProfile> profiles;
  LatencyMatrix latency;
  double epoch_hours = 1.0;
  int horizon_epochs = 0;
  int idle_floor_nodes = 0;
  AdmmParams admm;
  std::vector<RunSpec> runs;
  std::string normalize_against = "queue-split";
  std::uint64_t seed = 42;

  void validate() const;
};

/// (site_id, model_id) pairs whose weights are already on the site.
struct ResidencyState {
  std::set<std::pair<std::string, std::string>> resident;
};

struct SiteEpochMetrics {
  SiteEnergyBreakdown energy;
  SiteWaterBreakdown water;
  SiteCarbonBreakdown carbon;
  double cost = 0;
  NodeStateCounts nodes;
  double ttft_mean_s = 0;
  double ttft_p95_s = 0;
  int requests = 0;
};

struct EpochMetrics {
  int epoch = 0;
  std::vector<SiteEpochMetrics> sites;
  double cost_total = 0;    // fleet energy cost
  double water_total = 0;   // fleet water, liters
  double carbon_total = 0;  // fleet carbon, kg
  double ttft_mean_s = 0;
  double ttft_p95_s = 0;
  int requests = 0;
  std::vector<double> ttft_samples;  // per request, in request order
  int solver_iterations = 0;
  bool solver_converged = true;
};

struct EpochOutcome {
  EpochMetrics metrics;
  ResidencyState next;
};

/// Requests of `epoch`, taken from the sorted trace.
std::span<const InferenceRequest> requests_in_epoch(const Scenario& scenario, int epoch);

SchedulingProblem build_problem(const Scenario& scenario, int epoch,
                                const ResidencyState& state,
                                std::span<const InferenceRequest> requests);

/// Energy, water, carbon and TTFT accounting of a fixed integral assignment.
/// Reads the assignment only; the scheduler that produced it is irrelevant.
EpochMetrics account_epoch(const Scenario& scenario, const SchedulingProblem& problem,
                           const Assignment& integral);

/// Every site keeps resident exactly the models it served this epoch.
ResidencyState next_residency(const SchedulingProblem& problem, const Assignment& integral);

EpochOutcome run_epoch(const Scenario& scenario, const RunSpec& run, int epoch,
                       const ResidencyState& state);

struct RunTotals {
  double cost = 0;
  double carbon = 0;
  double water = 0;
  double e_it = 0;
  double e_cooling = 0;
  double e_conditioning = 0;
  double e_total = 0;
  double ttft_mean_s = 0;
  double ttft_p95_s = 0;
  int requests = 0;
  int nonconverged_epochs = 0;
};

struct RunResult {
  RunSpec spec;
  std::vector<EpochMetrics> epochs;
  RunTotals totals;
};

/// Headline metrics divided by the baseline run's.
struct NormalizedMetrics {
  double ttft = 1;
  double carbon = 1;
  double cost = 1;
  double water = 1;
};

struct RunSummary {
  std::vector<RunResult> runs;
  std::string baseline;
  std::map<std::string, NormalizedMetrics> normalized;
};

RunResult run_scenario(const Scenario& scenario, const RunSpec& run);
RunTotals aggregate(std::span<const EpochMetrics> epochs);
RunSummary summarize(std::vector<RunResult> runs, const std::string& baseline);

/// Runs every configured run (adding the normalization run if absent) and
/// normalizes against `scenario.normalize_against`.
RunSummary run_simulation(const Scenario& scenario);

}  // namespace geosched

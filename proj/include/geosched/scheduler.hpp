#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geosched/energy_model.hpp"
#include "geosched/env_model.hpp"
#include "geosched/water_carbon.hpp"
#include "geosched/workload.hpp"

namespace geosched {

enum class Objective : std::size_t { Cost = 0, Carbon = 1, Water = 2, Ttft = 3 };
inline constexpr std::size_t kObjectiveCount = 4;
inline constexpr std::array<Objective, kObjectiveCount> kAllObjectives = {
    Objective::Cost, Objective::Carbon, Objective::Water, Objective::Ttft};

/// Per-objective quantities in native units: currency, kgCO2, liters, seconds.
using ObjectiveVector = std::array<double, kObjectiveCount>;

inline double& at(ObjectiveVector& v, Objective k) { return v[static_cast<std::size_t>(k)]; }
inline double at(const ObjectiveVector& v, Objective k) {
  return v[static_cast<std::size_t>(k)];
}
std::string_view objective_name(Objective k);

/// Non-negative weights, normalized to sum to one.
class ObjectiveWeights {
 public:
  ObjectiveWeights(double cost, double carbon, double water, double ttft);

  double operator[](Objective k) const { return at(w_, k); }
  const ObjectiveVector& values() const { return w_; }

 private:
  ObjectiveVector w_{};
};

enum class Mode { OptCost, OptCarbon, OptWater, OptTtft, OptBalance };
inline constexpr std::array<Mode, 5> kAllModes = {Mode::OptCost, Mode::OptCarbon,
                                                  Mode::OptWater, Mode::OptTtft,
                                                  Mode::OptBalance};

ObjectiveWeights weights_for(Mode mode);
std::string_view mode_label(Mode mode);
std::optional<Mode> parse_mode(std::string_view label);

struct SiteCapacity {
  double memory_bytes = 0;
  int node_budget = 0;
};

/// Every node of the site, with its full memory.
SiteCapacity full_capacity(const SiteSpec& site);

/// One epoch's batch of requests to place across sites.
struct SchedulingProblem {
  int epoch = 0;
  double epoch_hours = 1.0;  // may be 0 for degenerate what-if evaluation
  std::vector<InferenceRequest> requests;
  std::vector<SiteSpec> sites;
  std::vector<EnvironmentSample> env;  // aligned with `sites`
  std::map<std::string, ModelProfile> profiles;
  LatencyMatrix latency;
  ObjectiveWeights weights{0.25, 0.25, 0.25, 0.25};
  std::vector<SiteCapacity> capacity;  // aligned with `sites`
  std::set<std::pair<std::string, std::string>> resident;  // (site_id, model_id)

  /// Throws ContractError on misaligned tables or unresolvable references.
  void validate() const;
  bool is_resident(std::size_t site, const std::string& model_id) const;
};

/// Request-by-site matrix of placement fractions.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::size_t requests, std::size_t sites);
  static Assignment from_sites(std::span<const std::size_t> site_of, std::size_t sites);

  double operator()(std::size_t i, std::size_t s) const { return x_[i * sites_ + s]; }
  double& operator()(std::size_t i, std::size_t s) { return x_[i * sites_ + s]; }
  std::span<const double> row(std::size_t i) const {
    return {x_.data() + i * sites_, sites_};
  }
  std::span<double> row(std::size_t i) { return {x_.data() + i * sites_, sites_}; }

  std::size_t requests() const { return requests_; }
  std::size_t sites() const { return sites_; }
  bool integral() const { return integral_; }
  void set_integral(bool v) { integral_ = v; }

  double row_sum(std::size_t i) const;
  double column_sum(std::size_t s) const;
  /// Argmax site per request (lowest index on ties).
  std::vector<std::size_t> site_of() const;
  const std::vector<double>& data() const { return x_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::size_t requests_ = 0;
  std::size_t sites_ = 0;
  std::vector<double> x_;
  bool integral_ = false;
};

/// A scalarized placement objective:
///   sum_{i,s} linear[i,s] * x[i,s] + sum_s congestion[s] * (sum_i x[i,s])^2
/// subject to rows on the simplex and sum_i memory[i] * x[i,s] <= capacity[s].
struct ScalarProblem {
  std::size_t requests = 0;
  std::size_t sites = 0;
  std::vector<double> linear;
  std::vector<double> congestion;
  std::vector<double> memory;
  std::vector<double> capacity;

  double c(std::size_t i, std::size_t s) const { return linear[i * sites + s]; }
  double value(const Assignment& x) const;
  /// Worst relative capacity overshoot, 0 when every site fits.
  double capacity_violation(const Assignment& x) const;
  void validate() const;
};

/// Native-unit cost tables for one problem: linear per-(request, site) terms
/// and the per-site queue slope of the congestion proxy.
class CostModel {
 public:
  explicit CostModel(const SchedulingProblem& problem);

  std::size_t requests() const { return n_; }
  std::size_t sites() const { return s_; }
  const ObjectiveVector& linear(std::size_t i, std::size_t s) const {
    return linear_[i * s_ + s];
  }
  /// Queue wait, seconds, added per request assigned to the site.
  double queue_slope_s(std::size_t s) const { return queue_slope_[s]; }
  double memory(std::size_t i) const { return memory_[i]; }
  double capacity(std::size_t s) const { return capacity_[s]; }
  double mean_service_s() const { return mean_service_s_; }
  double mean_request_memory() const { return mean_memory_; }

  /// Objective totals of an assignment (TTFT is the sum over requests).
  ObjectiveVector evaluate(const Assignment& x) const;
  /// Per objective: every request at its worst site, all queued at the most
  /// congested site. Zero totals are replaced by 1.
  ObjectiveVector normalizers() const;
  ScalarProblem scalarized(const ObjectiveWeights& weights) const;

 private:
  std::size_t n_ = 0;
  std::size_t s_ = 0;
  std::vector<ObjectiveVector> linear_;
  std::vector<double> queue_slope_;
  std::vector<double> memory_;
  std::vector<double> capacity_;
  double mean_service_s_ = 0;
  double mean_memory_ = 0;
};

/// Marginal (cost, carbon, water, ttft) of placing request `request` at
/// `site`, with `site_load` requests already queued there.
ObjectiveVector per_request_site_cost(const SchedulingProblem& problem, std::size_t request,
                                      std::size_t site, double site_load = 0.0);

double scalarize(const ObjectiveVector& costs, const ObjectiveWeights& weights,
                 const ObjectiveVector& normalizers);

struct AdmmParams {
  double rho = 1.0;
  int max_iters = 500;
  double eps_primal = 1e-4;
  double eps_dual = 1e-4;
  // Rescale rho when one residual dominates the other (first 80% of the
  // iteration budget only, so the tail runs with a fixed penalty).
  bool adaptive_rho = true;

  void validate() const;
};

struct AdmmResult {
  Assignment z;
  int iterations = 0;
  bool converged = false;
  std::vector<double> primal_residuals;
  std::vector<double> dual_residuals;
};

/// Consensus ADMM over per-site blocks. Each site owns its column and its
/// memory capacity; the coordinator projects rows onto the simplex.
AdmmResult admm_consensus(const ScalarProblem& problem, const AdmmParams& params);

/// Euclidean projection onto the probability simplex, in place.
void project_simplex(std::span<double> v);

struct SolveReport {
  Assignment fractional;
  Assignment integral;
  int iterations = 0;
  bool converged = false;
  std::vector<double> primal_residuals;
  std::vector<double> dual_residuals;
  ObjectiveWeights weights{0.25, 0.25, 0.25, 0.25};
  ObjectiveVector normalizers{};
  ObjectiveVector objectives_fractional{};
  ObjectiveVector objectives_integral{};
  double scalarized_fractional = 0;
  double scalarized_integral = 0;
};

/// Argmax rounding with capacity repair by eviction of the smallest
/// fractional masses. Integral input is returned unchanged.
Assignment round_assignment(const Assignment& fractional, const ScalarProblem& problem);
Assignment round_assignment(const Assignment& fractional, const SchedulingProblem& problem);

/// Deterministic local search (single moves, then pairwise swaps) on the
/// scalarized objective. Never increases the objective or breaks capacity.
Assignment improve_assignment(const Assignment& integral, const ScalarProblem& problem);

SolveReport admm_solve(const SchedulingProblem& problem, const AdmmParams& params = {});
SolveReport solve_mode(const SchedulingProblem& problem, Mode mode,
                       const AdmmParams& params = {});

inline constexpr std::size_t kOracleMaxRequests = 12;
inline constexpr std::size_t kOracleMaxSites = 4;

struct OracleResult {
  double relaxed_value = 0;
  Assignment relaxed;
  double integral_value = 0;
  Assignment integral;
};

/// Exhaustive integral optimum plus an interior-point relaxed optimum.
/// Refuses instances beyond kOracleMaxRequests x kOracleMaxSites.
OracleResult oracle_solve(const ScalarProblem& problem);
OracleResult oracle_solve(const SchedulingProblem& problem);

/// Relaxed optimum by a dense primal-dual interior-point method.
Assignment solve_relaxation_interior_point(const ScalarProblem& problem);

/// Random small instance for oracle comparisons (sites <= 4, requests <= 12).
SchedulingProblem random_problem(std::uint64_t seed, std::size_t sites, std::size_t requests);

}  // namespace geosched

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geosched/errors.hpp"
#include "geosched/scheduler.hpp"

namespace geosched {

std::string_view objective_name(Objective k) {
  switch (k) {
    case Objective::Cost: return "cost";
    case Objective::Carbon: return "carbon";
    case Objective::Water: return "water";
    case Objective::Ttft: return "ttft";
  }
  return "?";
}

ObjectiveWeights::ObjectiveWeights(double cost, double carbon, double water, double ttft)
    : w_{cost, carbon, water, ttft} {
  double sum = 0.0;
  for (double w : w_) {
    if (!(w >= 0) || !std::isfinite(w)) throw ConfigError("objective weights must be >= 0");
    sum += w;
  }
  if (!(sum > 0)) throw ConfigError("at least one objective weight must be > 0");
  for (double& w : w_) w /= sum;
}

ObjectiveWeights weights_for(Mode mode) {
  switch (mode) {
    case Mode::OptCost: return {1, 0, 0, 0};
    case Mode::OptCarbon: return {0, 1, 0, 0};
    case Mode::OptWater: return {0, 0, 1, 0};
    case Mode::OptTtft: return {0, 0, 0, 1};
    case Mode::OptBalance: return {0.25, 0.25, 0.25, 0.25};
  }
  return {0.25, 0.25, 0.25, 0.25};
}

std::string_view mode_label(Mode mode) {
  switch (mode) {
    case Mode::OptCost: return "opt-cost";
    case Mode::OptCarbon: return "opt-carbon";
    case Mode::OptWater: return "opt-water";
    case Mode::OptTtft: return "opt-ttft";
    case Mode::OptBalance: return "opt-balance";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view label) {
  for (Mode m : kAllModes) {
    if (mode_label(m) == label) return m;
  }
  return std::nullopt;
}

SiteCapacity full_capacity(const SiteSpec& site) {
  return {site.memory_capacity_bytes(), site.node_count};
}

void SchedulingProblem::validate() const {
  if (!(epoch_hours >= 0) || !std::isfinite(epoch_hours)) {
    throw ContractError("epoch duration must be >= 0 hours");
  }
  if (sites.empty()) throw ContractError("scheduling problem has no sites");
  if (env.size() != sites.size()) {
    throw ContractError("environment samples must align with sites");
  }
  if (capacity.size() != sites.size()) throw ContractError("capacities must align with sites");
  for (std::size_t s = 0; s < sites.size(); ++s) {
    if (env[s].site_id != sites[s].site_id) {
      throw ContractError("environment sample " + env[s].site_id + " misaligned with site " +
                          sites[s].site_id);
    }
    if (!(capacity[s].memory_bytes > 0)) {
      throw ContractError("site " + sites[s].site_id + " has no memory capacity");
    }
  }
  for (const auto& r : requests) {
    auto it = profiles.find(r.model_id);
    if (it == profiles.end()) {
      throw ContractError("request " + r.request_id + ": unknown model " + r.model_id);
    }
    for (const auto& site : sites) {
      if (!latency.contains(r.origin_region, site.site_id)) {
        throw ContractError("no latency entry for (" + r.origin_region + ", " + site.site_id +
                            ")");
      }
    }
  }
}

bool SchedulingProblem::is_resident(std::size_t site, const std::string& model_id) const {
  return resident.count({sites[site].site_id, model_id}) > 0;
}

Assignment::Assignment(std::size_t requests, std::size_t sites)
    : requests_(requests), sites_(sites), x_(requests * sites, 0.0) {}

Assignment Assignment::from_sites(std::span<const std::size_t> site_of, std::size_t sites) {
  Assignment a(site_of.size(), sites);
  for (std::size_t i = 0; i < site_of.size(); ++i) {
    if (site_of[i] >= sites) throw ContractError("site index out of range");
    a(i, site_of[i]) = 1.0;
  }
  a.integral_ = true;
  return a;
}

double Assignment::row_sum(std::size_t i) const {
  auto r = row(i);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

double Assignment::column_sum(std::size_t s) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < requests_; ++i) sum += (*this)(i, s);
  return sum;
}

std::vector<std::size_t> Assignment::site_of() const {
  std::vector<std::size_t> out(requests_);
  for (std::size_t i = 0; i < requests_; ++i) {
    auto r = row(i);
    out[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

double ScalarProblem::value(const Assignment& x) const {
  double v = 0.0;
  for (std::size_t s = 0; s < sites; ++s) {
    double load = 0.0;
    for (std::size_t i = 0; i < requests; ++i) {
      v += c(i, s) * x(i, s);
      load += x(i, s);
    }
    v += congestion[s] * load * load;
  }
  return v;
}

double ScalarProblem::capacity_violation(const Assignment& x) const {
  double worst = 0.0;
  for (std::size_t s = 0; s < sites; ++s) {
    double used = 0.0;
    for (std::size_t i = 0; i < requests; ++i) used += memory[i] * x(i, s);
    worst = std::max(worst, (used - capacity[s]) / capacity[s]);
  }
  return worst;
}

void ScalarProblem::validate() const {
  if (sites == 0) throw ContractError("scalar problem has no sites");
  if (linear.size() != requests * sites || congestion.size() != sites ||
      memory.size() != requests || capacity.size() != sites) {
    throw ContractError("scalar problem tables have inconsistent sizes");
  }
  for (double a : congestion) {
    if (!(a >= 0)) throw ContractError("congestion coefficients must be >= 0");
  }
  for (double c : capacity) {
    if (!(c > 0)) throw ContractError("site capacities must be > 0");
  }
  for (double m : memory) {
    if (!(m > 0)) throw ContractError("request memory must be > 0");
  }
}

namespace {

ObjectiveVector linear_cost(const SchedulingProblem& p, std::size_t i, std::size_t s,
                            double* memory_out) {
  const auto& req = p.requests[i];
  const auto& site = p.sites[s];
  const auto& env = p.env[s];
  const auto& profile = p.profiles.at(req.model_id);

  double memory = request_memory_bytes(req, profile);
  if (memory_out) *memory_out = memory;

  // The request holds memory/node_memory nodes in the ON rather than IDLE
  // state for the whole epoch.
  double occupied_nodes = memory / site.node.memory_bytes;
  double delta_pr = site.states.on() - site.states.idle();
  double e_it = occupied_nodes * delta_pr * (site.node.tdp_w / 1000.0) * p.epoch_hours;

  auto energy = site_energy(site.site_id, p.epoch, e_it, cop_at(site.cop_curve, env.ambient_temp_c));
  auto water = site_water(energy, site.water, env);
  auto carbon = site_carbon(energy, water, env);

  auto ttft = ttft_estimate(req, profile, site.node, 0.0,
                            p.is_resident(s, req.model_id),
                            p.latency.at(req.origin_region, site.site_id));

  ObjectiveVector out{};
  at(out, Objective::Cost) = energy.e_total * env.tou_price_per_kwh;
  at(out, Objective::Carbon) = carbon.total();
  at(out, Objective::Water) = water.total();
  at(out, Objective::Ttft) = ttft.total();
  return out;
}

// Queue wait per queued request: (1 / service capacity) * epoch length, which
// reduces to mean_service * mean_memory / site_memory.
double queue_slope(double site_memory, double mean_memory, double mean_service) {
  if (mean_memory <= 0 || mean_service <= 0) return 0.0;
  return mean_service * mean_memory / site_memory;
}

}  // namespace

CostModel::CostModel(const SchedulingProblem& problem)
    : n_(problem.requests.size()), s_(problem.sites.size()) {
  problem.validate();
  linear_.resize(n_ * s_);
  memory_.resize(n_);
  capacity_.resize(s_);
  queue_slope_.resize(s_);
  double service_sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t s = 0; s < s_; ++s) {
      linear_[i * s_ + s] = linear_cost(problem, i, s, s == 0 ? &memory_[i] : nullptr);
    }
    const auto& req = problem.requests[i];
    service_sum += prefill_time_s(req, problem.profiles.at(req.model_id));
  }
  if (n_ > 0) {
    mean_service_s_ = service_sum / n_;
    mean_memory_ = std::accumulate(memory_.begin(), memory_.end(), 0.0) / n_;
  }
  for (std::size_t s = 0; s < s_; ++s) {
    capacity_[s] = problem.capacity[s].memory_bytes;
    queue_slope_[s] = queue_slope(capacity_[s], mean_memory_, mean_service_s_);
  }
}

ObjectiveVector CostModel::evaluate(const Assignment& x) const {
  if (x.requests() != n_ || x.sites() != s_) throw ContractError("assignment shape mismatch");
  ObjectiveVector total{};
  for (std::size_t s = 0; s < s_; ++s) {
    double load = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double xi = x(i, s);
      if (xi == 0.0) continue;
      const auto& lin = linear(i, s);
      for (std::size_t k = 0; k < kObjectiveCount; ++k) total[k] += xi * lin[k];
      load += xi;
    }
    at(total, Objective::Ttft) += queue_slope_[s] * load * load;
  }
  return total;
}

ObjectiveVector CostModel::normalizers() const {
  ObjectiveVector worst{};
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < kObjectiveCount; ++k) {
      double m = 0.0;
      for (std::size_t s = 0; s < s_; ++s) m = std::max(m, linear(i, s)[k]);
      worst[k] += m;
    }
  }
  double max_slope = s_ ? *std::max_element(queue_slope_.begin(), queue_slope_.end()) : 0.0;
  at(worst, Objective::Ttft) += static_cast<double>(n_) * static_cast<double>(n_) * max_slope;
  for (double& w : worst) {
    if (!(w > 0)) w = 1.0;
  }
  return worst;
}

ScalarProblem CostModel::scalarized(const ObjectiveWeights& weights) const {
  auto norm = normalizers();
  ScalarProblem sp;
  sp.requests = n_;
  sp.sites = s_;
  sp.linear.resize(n_ * s_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t s = 0; s < s_; ++s) {
      sp.linear[i * s_ + s] = scalarize(linear(i, s), weights, norm);
    }
  }
  sp.congestion.resize(s_);
  for (std::size_t s = 0; s < s_; ++s) {
    sp.congestion[s] = weights[Objective::Ttft] * queue_slope_[s] / at(norm, Objective::Ttft);
  }
  sp.memory = memory_;
  sp.capacity = capacity_;
  return sp;
}

ObjectiveVector per_request_site_cost(const SchedulingProblem& problem, std::size_t request,
                                      std::size_t site, double site_load) {
  problem.validate();
  if (request >= problem.requests.size() || site >= problem.sites.size()) {
    throw ContractError("request or site index out of range");
  }
  auto out = linear_cost(problem, request, site, nullptr);
  if (site_load > 0) {
    double service = 0.0, memory = 0.0;
    for (const auto& r : problem.requests) {
      const auto& prof = problem.profiles.at(r.model_id);
      service += prefill_time_s(r, prof);
      memory += request_memory_bytes(r, prof);
    }
    double n = static_cast<double>(problem.requests.size());
    at(out, Objective::Ttft) +=
        site_load * queue_slope(problem.capacity[site].memory_bytes, memory / n, service / n);
  }
  return out;
}

double scalarize(const ObjectiveVector& costs, const ObjectiveWeights& weights,
                 const ObjectiveVector& normalizers) {
  double v = 0.0;
  for (std::size_t k = 0; k < kObjectiveCount; ++k) {
    if (!(normalizers[k] > 0)) throw ContractError("normalizers must be > 0");
    v += weights.values()[k] * costs[k] / normalizers[k];
  }
  return v;
}

namespace {

void check_feasible(const ScalarProblem& sp, int epoch) {
  double demand = std::accumulate(sp.memory.begin(), sp.memory.end(), 0.0);
  double supply = std::accumulate(sp.capacity.begin(), sp.capacity.end(), 0.0);
  double largest_site = *std::max_element(sp.capacity.begin(), sp.capacity.end());
  if (demand > supply) {
    throw InfeasibleError("epoch " + std::to_string(epoch) + ": memory demand " +
                          std::to_string(demand) + " B exceeds fleet capacity " +
                          std::to_string(supply) + " B");
  }
  for (std::size_t i = 0; i < sp.requests; ++i) {
    if (sp.memory[i] > largest_site) {
      throw InfeasibleError("epoch " + std::to_string(epoch) + ": request " +
                            std::to_string(i) + " fits on no site");
    }
  }
}

}  // namespace

SolveReport admm_solve(const SchedulingProblem& problem, const AdmmParams& params) {
  params.validate();
  CostModel model(problem);
  ScalarProblem sp = model.scalarized(problem.weights);
  check_feasible(sp, problem.epoch);

  SolveReport report;
  report.weights = problem.weights;
  report.normalizers = model.normalizers();

  AdmmResult r = admm_consensus(sp, params);
  Assignment rounded;
  try {
    rounded = round_assignment(r.z, sp);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError("epoch " + std::to_string(problem.epoch) + ": " + e.what());
  }
  report.integral = improve_assignment(rounded, sp);
  report.fractional = std::move(r.z);
  report.iterations = r.iterations;
  report.converged = r.converged;
  report.primal_residuals = std::move(r.primal_residuals);
  report.dual_residuals = std::move(r.dual_residuals);
  report.objectives_fractional = model.evaluate(report.fractional);
  report.objectives_integral = model.evaluate(report.integral);
  report.scalarized_fractional = sp.value(report.fractional);
  report.scalarized_integral = sp.value(report.integral);
  return report;
}

SolveReport solve_mode(const SchedulingProblem& problem, Mode mode, const AdmmParams& params) {
  SchedulingProblem p = problem;
  p.weights = weights_for(mode);
  return admm_solve(p, params);
}

Assignment round_assignment(const Assignment& fractional, const SchedulingProblem& problem) {
  return round_assignment(fractional, CostModel(problem).scalarized(problem.weights));
}

OracleResult oracle_solve(const SchedulingProblem& problem) {
  if (problem.requests.size() > kOracleMaxRequests || problem.sites.size() > kOracleMaxSites) {
    throw ContractError("oracle limited to " + std::to_string(kOracleMaxRequests) +
                        " requests and " + std::to_string(kOracleMaxSites) + " sites (got " +
                        std::to_string(problem.requests.size()) + " x " +
                        std::to_string(problem.sites.size()) + ")");
  }
  return oracle_solve(CostModel(problem).scalarized(problem.weights));
}

}  // namespace geosched

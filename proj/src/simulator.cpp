#include "geosched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geosched/energy_model.hpp"
#include "geosched/errors.hpp"
#include "geosched/water_carbon.hpp"

namespace geosched {

RunSpec RunSpec::admm(Mode mode) {
  return RunSpec{std::string(mode_label(mode)), RunKind::Admm, mode, BaselineKind::QueueSplit};
}

RunSpec RunSpec::from_baseline(BaselineKind kind) {
  return RunSpec{std::string(baseline_label(kind)), RunKind::Baseline, Mode::OptBalance, kind};
}

std::optional<RunSpec> parse_run(std::string_view label) {
  if (auto mode = parse_mode(label)) return RunSpec::admm(*mode);
  for (BaselineKind k : {BaselineKind::QueueSplit, BaselineKind::FlowGreedy}) {
    if (label == baseline_label(k)) return RunSpec::from_baseline(k);
  }
  return std::nullopt;
}

std::vector<RunSpec> all_runs() {
  std::vector<RunSpec> runs;
  for (Mode m : kAllModes) runs.push_back(RunSpec::admm(m));
  runs.push_back(RunSpec::from_baseline(BaselineKind::QueueSplit));
  runs.push_back(RunSpec::from_baseline(BaselineKind::FlowGreedy));
  return runs;
}

void Scenario::validate() const {
  if (sites.empty()) throw ConfigError("scenario has no sites");
  for (std::size_t s = 0; s < sites.size(); ++s) {
    sites[s].validate();
    if (s > 0 && !(sites[s - 1].site_id < sites[s].site_id)) {
      throw ConfigError("sites must have unique ids, sorted: " + sites[s].site_id);
    }
  }
  if (!(epoch_hours > 0) || !std::isfinite(epoch_hours)) {
    throw ConfigError("epoch_hours must be positive");
  }
  if (horizon_epochs < 1) throw ConfigError("horizon_epochs must be at least 1");
  if (idle_floor_nodes < 0) throw ConfigError("idle_floor_nodes must be non-negative");
  admm.validate();
  for (const auto& site : sites) {
    for (int e = 0; e < horizon_epochs; ++e) {
      if (!environment.covers(site.site_id, e)) {
        throw ConfigError("environment gap: site " + site.site_id + " missing epoch " +
                          std::to_string(e));
      }
    }
  }
  for (const auto& [id, profile] : profiles) profile.validate();
  for (const auto& r : trace) {
    if (!profiles.count(r.model_id)) {
      throw ConfigError("request " + r.request_id + " names unknown model " + r.model_id);
    }
    if (r.arrival_epoch < 0 || r.arrival_epoch >= horizon_epochs) {
      throw ConfigError("request " + r.request_id + " arrives outside the horizon");
    }
    for (const auto& site : sites) {
      if (!latency.contains(r.origin_region, site.site_id)) {
        throw ConfigError("latency missing for (" + r.origin_region + ", " + site.site_id + ")");
      }
    }
  }
  if (runs.empty()) throw ConfigError("scenario has no runs");
}

std::span<const InferenceRequest> requests_in_epoch(const Scenario& scenario, int epoch) {
  const auto& t = scenario.trace;
  auto lo = std::partition_point(t.begin(), t.end(),
                                 [&](const InferenceRequest& r) { return r.arrival_epoch < epoch; });
  auto hi = std::partition_point(lo, t.end(),
                                 [&](const InferenceRequest& r) { return r.arrival_epoch <= epoch; });
  return {lo, hi};
}

SchedulingProblem build_problem(const Scenario& scenario, int epoch, const ResidencyState& state,
                                std::span<const InferenceRequest> requests) {
  SchedulingProblem p;
  p.epoch = epoch;
  p.epoch_hours = scenario.epoch_hours;
  p.requests.assign(requests.begin(), requests.end());
  p.sites = scenario.sites;
  for (const auto& site : scenario.sites) {
    p.env.push_back(scenario.environment.at(site.site_id, epoch));
    p.capacity.push_back(full_capacity(site));
  }
  p.profiles = scenario.profiles;
  p.latency = scenario.latency;
  p.resident = state.resident;
  return p;
}

namespace {

double percentile_nearest_rank(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

EpochMetrics account_epoch(const Scenario& scenario, const SchedulingProblem& problem,
                           const Assignment& integral) {
  const std::size_t n = problem.requests.size();
  const std::size_t S = problem.sites.size();
  if (integral.requests() != n || integral.sites() != S) {
    throw ContractError("assignment shape does not match the problem");
  }
  std::vector<std::size_t> site_of = integral.site_of();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(integral(i, site_of[i]) - 1.0) > 1e-9) {
      throw ContractError("accounting requires an integral assignment");
    }
  }

  CostModel model(problem);
  EpochDuration duration(problem.epoch_hours);
  std::vector<double> demand(S, 0.0);
  std::vector<int> load(S, 0);
  for (std::size_t i = 0; i < n; ++i) {
    demand[site_of[i]] += model.memory(i);
    ++load[site_of[i]];
  }

  EpochMetrics m;
  m.epoch = problem.epoch;
  m.requests = static_cast<int>(n);
  std::vector<std::vector<double>> site_ttft(S);
  m.ttft_samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = site_of[i];
    double t = at(model.linear(i, s), Objective::Ttft) + model.queue_slope_s(s) * load[s];
    m.ttft_samples[i] = t;
    site_ttft[s].push_back(t);
  }

  std::vector<SiteEnergyBreakdown> energies;
  std::vector<SiteWaterBreakdown> waters;
  std::vector<SiteCarbonBreakdown> carbons;
  for (std::size_t s = 0; s < S; ++s) {
    const SiteSpec& site = problem.sites[s];
    const EnvironmentSample& env = problem.env[s];
    NodeStateCounts nodes;
    double needed = std::ceil(demand[s] / site.node.memory_bytes - 1e-9);
    nodes.on = static_cast<int>(std::min<double>(site.node_count, std::max(0.0, needed)));
    nodes.idle = std::max(0, std::min(scenario.idle_floor_nodes, site.node_count) - nodes.on);
    nodes.off = site.node_count - nodes.on - nodes.idle;

    double e_it = site_it_energy_kwh(nodes, duration, site);
    SiteEpochMetrics sm;
    sm.nodes = nodes;
    sm.energy = site_energy(site.site_id, problem.epoch, e_it,
                            cop_at(site.cop_curve, env.ambient_temp_c));
    sm.water = site_water(sm.energy, site.water, env);
    sm.carbon = site_carbon(sm.energy, sm.water, env);
    sm.cost = sm.energy.e_total * env.tou_price_per_kwh;
    sm.requests = load[s];
    sm.ttft_mean_s = mean(site_ttft[s]);
    sm.ttft_p95_s = percentile_nearest_rank(site_ttft[s], 0.95);
    energies.push_back(sm.energy);
    waters.push_back(sm.water);
    carbons.push_back(sm.carbon);
    m.sites.push_back(std::move(sm));
  }
  m.cost_total = energy_cost(energies, problem.env);
  m.water_total = total_water(waters);
  m.carbon_total = total_carbon(carbons);
  m.ttft_mean_s = mean(m.ttft_samples);
  m.ttft_p95_s = percentile_nearest_rank(m.ttft_samples, 0.95);
  return m;
}

ResidencyState next_residency(const SchedulingProblem& problem, const Assignment& integral) {
  ResidencyState next;
  std::vector<std::size_t> site_of = integral.site_of();
  for (std::size_t i = 0; i < problem.requests.size(); ++i) {
    next.resident.emplace(problem.sites[site_of[i]].site_id, problem.requests[i].model_id);
  }
  return next;
}

EpochOutcome run_epoch(const Scenario& scenario, const RunSpec& run, int epoch,
                       const ResidencyState& state) {
  SchedulingProblem problem =
      build_problem(scenario, epoch, state, requests_in_epoch(scenario, epoch));
  Assignment integral;
  int iterations = 0;
  bool converged = true;
  if (problem.requests.empty()) {
    integral = Assignment(0, problem.sites.size());
    integral.set_integral(true);
  } else if (run.kind == RunKind::Admm) {
    SolveReport report = solve_mode(problem, run.mode, scenario.admm);
    integral = std::move(report.integral);
    iterations = report.iterations;
    converged = report.converged;
  } else {
    integral = baseline_schedule(run.baseline, problem);
  }
  EpochOutcome out;
  out.metrics = account_epoch(scenario, problem, integral);
  out.metrics.solver_iterations = iterations;
  out.metrics.solver_converged = converged;
  out.next = next_residency(problem, integral);
  return out;
}

RunTotals aggregate(std::span<const EpochMetrics> epochs) {
  RunTotals t;
  std::vector<double> samples;
  for (const auto& e : epochs) {
    t.cost += e.cost_total;
    t.carbon += e.carbon_total;
    t.water += e.water_total;
    for (const auto& s : e.sites) {
      t.e_it += s.energy.e_it;
      t.e_cooling += s.energy.e_cooling;
      t.e_conditioning += s.energy.e_conditioning;
      t.e_total += s.energy.e_total;
    }
    t.requests += e.requests;
    if (!e.solver_converged) ++t.nonconverged_epochs;
    samples.insert(samples.end(), e.ttft_samples.begin(), e.ttft_samples.end());
  }
  t.ttft_mean_s = mean(samples);
  t.ttft_p95_s = percentile_nearest_rank(std::move(samples), 0.95);
  return t;
}

RunResult run_scenario(const Scenario& scenario, const RunSpec& run) {
  RunResult result;
  result.spec = run;
  ResidencyState state;
  for (int e = 0; e < scenario.horizon_epochs; ++e) {
    EpochOutcome out = run_epoch(scenario, run, e, state);
    result.epochs.push_back(std::move(out.metrics));
    state = std::move(out.next);
  }
  result.totals = aggregate(result.epochs);
  return result;
}

namespace {

double ratio(double value, double base) {
  if (base == 0.0) return value == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return value / base;
}

}  // namespace

RunSummary summarize(std::vector<RunResult> runs, const std::string& baseline) {
  RunSummary summary;
  summary.baseline = baseline;
  summary.runs = std::move(runs);
  auto base = std::find_if(summary.runs.begin(), summary.runs.end(),
                           [&](const RunResult& r) { return r.spec.label == baseline; });
  if (base == summary.runs.end()) {
    throw ConfigError("normalization run '" + baseline + "' was not simulated");
  }
  const RunTotals b = base->totals;
  for (const auto& r : summary.runs) {
    NormalizedMetrics nm;
    nm.ttft = ratio(r.totals.ttft_mean_s, b.ttft_mean_s);
    nm.carbon = ratio(r.totals.carbon, b.carbon);
    nm.cost = ratio(r.totals.cost, b.cost);
    nm.water = ratio(r.totals.water, b.water);
    summary.normalized[r.spec.label] = nm;
  }
  return summary;
}

RunSummary run_simulation(const Scenario& scenario) {
  scenario.validate();
  std::vector<RunSpec> runs = scenario.runs;
  bool has_base = std::any_of(runs.begin(), runs.end(), [&](const RunSpec& r) {
    return r.label == scenario.normalize_against;
  });
  if (!has_base) {
    auto base = parse_run(scenario.normalize_against);
    if (!base) throw ConfigError("unknown normalization run: " + scenario.normalize_against);
    runs.push_back(*base);
  }
  std::vector<RunResult> results;
  for (const auto& run : runs) results.push_back(run_scenario(scenario, run));
  return summarize(std::move(results), scenario.normalize_against);
}

}  // namespace geosched

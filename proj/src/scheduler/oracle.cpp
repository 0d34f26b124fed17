#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "geosched/errors.hpp"
#include "geosched/scheduler.hpp"

namespace geosched {
namespace {

// Depth-first enumeration over sites^requests. Requests are fixed in index
// order and sites tried in ascending order, so the first optimum found is the
// lexicographically smallest one.
class Enumerator {
 public:
  explicit Enumerator(const ScalarProblem& p)
      : p_(p), load_(p.sites, 0.0), used_(p.sites, 0.0), current_(p.requests) {}

  void run() { visit(0, 0.0); }

  bool found() const { return found_; }
  double best_value() const { return best_value_; }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void visit(std::size_t i, double value) {
    if (i == p_.requests) {
      if (!found_ || value < best_value_ - 1e-12 * std::abs(best_value_)) {
        found_ = true;
        best_value_ = value;
        best_ = current_;
      }
      return;
    }
    for (std::size_t s = 0; s < p_.sites; ++s) {
      double m = p_.memory[i];
      if (used_[s] + m > p_.capacity[s] * (1.0 + 1e-12)) continue;
      double added = p_.c(i, s) + p_.congestion[s] * (2.0 * load_[s] + 1.0);
      used_[s] += m;
      load_[s] += 1.0;
      current_[i] = s;
      visit(i + 1, value + added);
      used_[s] -= m;
      load_[s] -= 1.0;
    }
  }

  const ScalarProblem& p_;
  std::vector<double> load_;
  std::vector<double> used_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  double best_value_ = std::numeric_limits<double>::infinity();
  bool found_ = false;
};

}  // namespace

OracleResult oracle_solve(const ScalarProblem& problem) {
  problem.validate();
  if (problem.requests > kOracleMaxRequests || problem.sites > kOracleMaxSites) {
    throw ContractError("oracle limited to " + std::to_string(kOracleMaxRequests) +
                        " requests and " + std::to_string(kOracleMaxSites) + " sites (got " +
                        std::to_string(problem.requests) + " x " +
                        std::to_string(problem.sites) + ")");
  }
  OracleResult out;
  Enumerator e(problem);
  e.run();
  if (!e.found()) throw InfeasibleError("oracle: no integral assignment satisfies capacity");
  out.integral = Assignment::from_sites(e.best(), problem.sites);
  out.integral_value = problem.value(out.integral);

  out.relaxed = solve_relaxation_interior_point(problem);
  out.relaxed_value = problem.value(out.relaxed);
  return out;
}

SchedulingProblem random_problem(std::uint64_t seed, std::size_t sites, std::size_t requests) {
  if (sites < 1 || sites > kOracleMaxSites || requests > kOracleMaxRequests) {
    throw ContractError("random_problem: at most 4 sites and 12 requests");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  SchedulingProblem p;
  p.epoch = 0;
  p.epoch_hours = 1.0;

  const std::vector<std::string> regions = {"north", "south", "west"};
  ModelProfile small{"small", 14e9, 524288, 4000};
  ModelProfile large{"large", 26e9, 819200, 2500};
  p.profiles[small.model_id] = small;
  p.profiles[large.model_id] = large;

  for (std::size_t i = 0; i < requests; ++i) {
    InferenceRequest r;
    char id[16];
    std::snprintf(id, sizeof id, "q%02zu", i);
    r.request_id = id;
    r.model_id = unit(rng) < 0.6 ? "small" : "large";
    r.origin_region = regions[static_cast<std::size_t>(unit(rng) * regions.size()) % 3];
    r.input_tokens = 100 + static_cast<std::int64_t>(uniform(0, 1900));
    r.output_tokens = static_cast<std::int64_t>(uniform(0, 1024));
    p.requests.push_back(r);
  }

  double demand = 0.0;
  for (const auto& r : p.requests) demand += request_memory_bytes(r, p.profiles.at(r.model_id));

  for (std::size_t s = 0; s < sites; ++s) {
    SiteSpec site;
    site.site_id = "s" + std::to_string(s);
    site.region = regions[s % regions.size()];
    site.node_count = 1 + static_cast<int>(uniform(0, 4));
    site.node.tdp_w = uniform(400, 3200);
    site.node.bandwidth_bytes_per_s = uniform(5e9, 30e9);
    site.node.gpu_count = 8;
    site.node.memory_bytes = 640e9;
    p.sites.push_back(site);

    EnvironmentSample env;
    env.site_id = site.site_id;
    env.epoch = 0;
    env.ambient_temp_c = uniform(-3.9, 35.0);
    env.tou_price_per_kwh = uniform(0.05, 0.45);
    env.carbon_intensity_kg_per_kwh = uniform(0.05, 1.0);
    env.water_intensity_l_per_kwh = uniform(0.2, 67.0) * (unit(rng) < 0.5 ? 0.05 : 1.0);
    env.potable_ei_kwh_per_l = kDefaultPotableEi;
    env.wastewater_ei_kwh_per_l = kDefaultWastewaterEi;
    p.env.push_back(env);

    // Each site holds between half and all of the batch, so the whole batch
    // always packs while concentrating it can hit the limit.
    SiteCapacity cap{demand * uniform(0.5, 1.2), site.node_count};
    if (requests == 0) cap.memory_bytes = site.memory_capacity_bytes();
    p.capacity.push_back(cap);

    for (const auto& model : {"small", "large"}) {
      if (unit(rng) < 0.5) p.resident.insert({site.site_id, model});
    }
  }
  for (const auto& region : regions) {
    for (const auto& site : p.sites) {
      p.latency.set(region, site.site_id, region == site.region ? uniform(0.001, 0.005)
                                                                : uniform(0.01, 0.06));
    }
  }
  p.weights = ObjectiveWeights(uniform(0, 1), uniform(0, 1), uniform(0, 1), uniform(0, 1));
  return p;
}

}  // namespace geosched

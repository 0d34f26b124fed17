#pragma once

#include <string>

#include "geosched/scheduler.hpp"

namespace testing {

/// Small hand-built scheduling problems. Every request uses model "m"
/// unless told otherwise; latency pairs not set explicitly default to 10 ms.
class ProblemBuilder {
 public:
  ProblemBuilder() {
    problem_.profiles["m"] = geosched::ModelProfile{"m", 14e9, 524288, 2000};
  }

  ProblemBuilder& site(const std::string& id, double temp_c = 20.0, double tou = 0.2,
                       double ci = 0.5, double wi = 2.0, int nodes = 4) {
    geosched::SiteSpec s;
    s.site_id = id;
    s.region = id;
    s.node_count = nodes;
    problem_.sites.push_back(s);
    geosched::EnvironmentSample e;
    e.site_id = id;
    e.epoch = problem_.epoch;
    e.ambient_temp_c = temp_c;
    e.tou_price_per_kwh = tou;
    e.carbon_intensity_kg_per_kwh = ci;
    e.water_intensity_l_per_kwh = wi;
    problem_.env.push_back(e);
    return *this;
  }

  ProblemBuilder& request(const std::string& id, const std::string& region = "north",
                          std::int64_t input = 500, std::int64_t output = 200,
                          const std::string& model = "m") {
    problem_.requests.push_back({id, problem_.epoch, model, input, output, region});
    return *this;
  }

  ProblemBuilder& requests(int count, const std::string& region = "north") {
    for (int k = 0; k < count; ++k) request("r" + std::to_string(100 + k), region);
    return *this;
  }

  ProblemBuilder& latency(const std::string& region, const std::string& site, double s) {
    problem_.latency.set(region, site, s);
    return *this;
  }

  ProblemBuilder& resident(const std::string& site, const std::string& model = "m") {
    problem_.resident.insert({site, model});
    return *this;
  }

  ProblemBuilder& hours(double h) {
    problem_.epoch_hours = h;
    return *this;
  }

  ProblemBuilder& weights(const geosched::ObjectiveWeights& w) {
    problem_.weights = w;
    return *this;
  }

  geosched::SchedulingProblem build() const {
    auto p = problem_;
    p.capacity.clear();
    for (const auto& s : p.sites) p.capacity.push_back(geosched::full_capacity(s));
    for (const auto& r : p.requests) {
      for (const auto& s : p.sites) {
        if (!p.latency.contains(r.origin_region, s.site_id)) {
          p.latency.set(r.origin_region, s.site_id, 0.01);
        }
      }
    }
    return p;
  }

 private:
  geosched::SchedulingProblem problem_;
};

/// Hand-written scalar problem with a zero congestion term.
inline geosched::ScalarProblem linear_problem(std::size_t requests, std::size_t sites,
                                              std::vector<double> linear,
                                              std::vector<double> capacity = {}) {
  geosched::ScalarProblem sp;
  sp.requests = requests;
  sp.sites = sites;
  sp.linear = std::move(linear);
  sp.congestion.assign(sites, 0.0);
  sp.memory.assign(requests, 1.0);
  sp.capacity = capacity.empty() ? std::vector<double>(sites, 1e6) : std::move(capacity);
  return sp;
}

}  // namespace testing

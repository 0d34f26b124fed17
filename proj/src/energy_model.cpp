#include "geosched/energy_model.hpp"

#include <map>

#include "geosched/errors.hpp"

namespace geosched {

EpochDuration::EpochDuration(double hours) : hours_(hours) {
  if (!(hours > 0)) throw DomainError("epoch duration must be > 0 hours");
}

double node_energy_kwh(WorkingState state, EpochDuration duration, const NodeSpec& node,
                       const WorkingStateProfile& profile) {
  return duration.hours() * profile.proportion(state) * (node.tdp_w / 1000.0);
}

double site_it_energy_kwh(std::span<const WorkingState> node_states, EpochDuration duration,
                          const SiteSpec& site) {
  if (node_states.size() != static_cast<std::size_t>(site.node_count)) {
    throw ContractError("site " + site.site_id + ": expected " +
                        std::to_string(site.node_count) + " node states, got " +
                        std::to_string(node_states.size()));
  }
  double sum = 0.0;
  for (auto state : node_states) sum += node_energy_kwh(state, duration, site.node, site.states);
  return sum;
}

double site_it_energy_kwh(const NodeStateCounts& counts, EpochDuration duration,
                          const SiteSpec& site) {
  if (counts.on < 0 || counts.idle < 0 || counts.off < 0 ||
      counts.on + counts.idle + counts.off != site.node_count) {
    throw ContractError("site " + site.site_id + ": node state counts do not cover " +
                        std::to_string(site.node_count) + " nodes");
  }
  return counts.on * node_energy_kwh(WorkingState::On, duration, site.node, site.states) +
         counts.idle * node_energy_kwh(WorkingState::Idle, duration, site.node, site.states) +
         counts.off * node_energy_kwh(WorkingState::Off, duration, site.node, site.states);
}

CoolingEnergy cooling_energy(double e_it_kwh, double cop) {
  if (!(cop > 0)) throw DomainError("CoP must be > 0");
  double crac = e_it_kwh / cop;
  return {crac, kCoolingMultiplier * crac};
}

double conditioning_energy(double e_it_kwh) { return kConditioningFraction * e_it_kwh; }

double total_energy(double e_it_kwh, double e_cooling_kwh, double e_conditioning_kwh) {
  return e_it_kwh + e_cooling_kwh + e_conditioning_kwh;
}

SiteEnergyBreakdown site_energy(std::string site_id, int epoch, double e_it_kwh, double cop) {
  SiteEnergyBreakdown b;
  b.site_id = std::move(site_id);
  b.epoch = epoch;
  b.e_it = e_it_kwh;
  auto cooling = cooling_energy(e_it_kwh, cop);
  b.e_crac = cooling.crac_kwh;
  b.e_cooling = cooling.total_kwh;
  b.e_conditioning = conditioning_energy(e_it_kwh);
  b.e_total = total_energy(b.e_it, b.e_cooling, b.e_conditioning);
  return b;
}

double energy_cost(std::span<const SiteEnergyBreakdown> breakdowns,
                   std::span<const EnvironmentSample> env) {
  if (breakdowns.size() != env.size()) {
    throw ContractError("energy_cost: breakdown and environment site sets differ in size");
  }
  std::map<std::string, const EnvironmentSample*> by_site;
  for (const auto& e : env) by_site[e.site_id] = &e;
  double cost = 0.0;
  for (const auto& b : breakdowns) {
    auto it = by_site.find(b.site_id);
    if (it == by_site.end() || it->second->epoch != b.epoch) {
      throw ContractError("energy_cost: no environment sample for site " + b.site_id +
                          " epoch " + std::to_string(b.epoch));
    }
    cost += b.e_total * it->second->tou_price_per_kwh;
  }
  return cost;
}

}  // namespace geosched

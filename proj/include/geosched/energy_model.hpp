#pragma once

#include <span>
#include <string>

#include "geosched/env_model.hpp"

namespace geosched {

/// Power-conditioning overhead as a fraction of IT energy.
inline constexpr double kConditioningFraction = 0.13;
/// Whole mechanical cooling relative to CRAC energy.
inline constexpr double kCoolingMultiplier = 3.0;

class EpochDuration {
 public:
  explicit EpochDuration(double hours);
  double hours() const { return hours_; }
  double seconds() const { return hours_ * 3600.0; }

 private:
  double hours_;
};

/// Energy of one node over the epoch, kWh. The only watts-to-kWh
/// conversion in the library.
double node_energy_kwh(WorkingState state, EpochDuration duration, const NodeSpec& node,
                       const WorkingStateProfile& profile);

/// Sum of node energies; `node_states.size()` must equal `site.node_count`.
double site_it_energy_kwh(std::span<const WorkingState> node_states, EpochDuration duration,
                          const SiteSpec& site);

struct NodeStateCounts {
  int on = 0;
  int idle = 0;
  int off = 0;
};

/// Same as above with states given as counts.
double site_it_energy_kwh(const NodeStateCounts& counts, EpochDuration duration,
                          const SiteSpec& site);

struct CoolingEnergy {
  double crac_kwh;
  double total_kwh;
};

CoolingEnergy cooling_energy(double e_it_kwh, double cop);
double conditioning_energy(double e_it_kwh);
double total_energy(double e_it_kwh, double e_cooling_kwh, double e_conditioning_kwh);

struct SiteEnergyBreakdown {
  std::string site_id;
  int epoch = 0;
  double e_it = 0;
  double e_crac = 0;
  double e_cooling = 0;
  double e_conditioning = 0;
  double e_total = 0;
};

/// Chains cooling, conditioning and total for one site-epoch.
SiteEnergyBreakdown site_energy(std::string site_id, int epoch, double e_it_kwh, double cop);

/// Sum over sites of total energy times the site's time-of-use price.
double energy_cost(std::span<const SiteEnergyBreakdown> breakdowns,
                   std::span<const EnvironmentSample> env);

}  // namespace geosched

#pragma once

#include <span>
#include <string>

#include "geosched/energy_model.hpp"
#include "geosched/env_model.hpp"

namespace geosched {

struct SiteWaterBreakdown {
  std::string site_id;
  int epoch = 0;
  double w_evap = 0;
  double w_blowdown = 0;
  double w_grid = 0;

  double total() const { return w_evap + w_blowdown + w_grid; }
};

struct SiteCarbonBreakdown {
  std::string site_id;
  int epoch = 0;
  double c_grid = 0;
  double c_water = 0;

  double total() const { return c_grid + c_water; }
};

/// Liters evaporated rejecting the IT heat; all IT energy is taken as heat.
double evaporative_water(double e_it_kwh, const WaterParams& params);
double blowdown_water(double w_evap_l, const WaterParams& params);
double grid_water(double e_total_kwh, double water_intensity_l_per_kwh);
double total_water(std::span<const SiteWaterBreakdown> sites);

double grid_carbon(double e_total_kwh, double carbon_intensity_kg_per_kwh);

/// ci * [(W_B + W_E) * EI_p + W_G * EI_w]. The on-site water is paired with
/// the potable intensity and grid water with the wastewater intensity.
double water_carbon(const SiteWaterBreakdown& water, const EnvironmentSample& env);
double total_carbon(std::span<const SiteCarbonBreakdown> sites);

SiteWaterBreakdown site_water(const SiteEnergyBreakdown& energy, const WaterParams& params,
                              const EnvironmentSample& env);
SiteCarbonBreakdown site_carbon(const SiteEnergyBreakdown& energy,
                                const SiteWaterBreakdown& water,
                                const EnvironmentSample& env);

}  // namespace geosched

#include "geosched/water_carbon.hpp"

#include "geosched/errors.hpp"

namespace geosched {

double evaporative_water(double e_it_kwh, const WaterParams& params) {
  if (!(params.heat_capacity_kwh_per_l > 0)) {
    throw ConfigError("water heat capacity must be > 0");
  }
  return e_it_kwh / params.heat_capacity_kwh_per_l;
}

double blowdown_water(double w_evap_l, const WaterParams& params) {
  if (!(params.blowdown_ratio >= 0 && params.blowdown_ratio < 1)) {
    throw ConfigError("blowdown ratio D must satisfy 0 <= D < 1");
  }
  return w_evap_l / (1.0 - params.blowdown_ratio);
}

double grid_water(double e_total_kwh, double water_intensity_l_per_kwh) {
  return e_total_kwh * water_intensity_l_per_kwh;
}

double total_water(std::span<const SiteWaterBreakdown> sites) {
  double sum = 0.0;
  for (const auto& s : sites) sum += s.w_evap + s.w_blowdown + s.w_grid;
  return sum;
}

double grid_carbon(double e_total_kwh, double carbon_intensity_kg_per_kwh) {
  return carbon_intensity_kg_per_kwh * e_total_kwh;
}

double water_carbon(const SiteWaterBreakdown& water, const EnvironmentSample& env) {
  if (water.site_id != env.site_id || water.epoch != env.epoch) {
    throw ContractError("water_carbon: water breakdown is for " + water.site_id + "@" +
                        std::to_string(water.epoch) + " but environment is for " +
                        env.site_id + "@" + std::to_string(env.epoch));
  }
  return env.carbon_intensity_kg_per_kwh *
         ((water.w_blowdown + water.w_evap) * env.potable_ei_kwh_per_l +
          water.w_grid * env.wastewater_ei_kwh_per_l);
}

double total_carbon(std::span<const SiteCarbonBreakdown> sites) {
  double sum = 0.0;
  for (const auto& s : sites) sum += s.c_grid + s.c_water;
  return sum;
}

SiteWaterBreakdown site_water(const SiteEnergyBreakdown& energy, const WaterParams& params,
                              const EnvironmentSample& env) {
  SiteWaterBreakdown w;
  w.site_id = energy.site_id;
  w.epoch = energy.epoch;
  w.w_evap = evaporative_water(energy.e_it, params);
  w.w_blowdown = blowdown_water(w.w_evap, params);
  w.w_grid = grid_water(energy.e_total, env.water_intensity_l_per_kwh);
  return w;
}

SiteCarbonBreakdown site_carbon(const SiteEnergyBreakdown& energy,
                                const SiteWaterBreakdown& water,
                                const EnvironmentSample& env) {
  SiteCarbonBreakdown c;
  c.site_id = energy.site_id;
  c.epoch = energy.epoch;
  c.c_grid = grid_carbon(energy.e_total, env.carbon_intensity_kg_per_kwh);
  c.c_water = water_carbon(water, env);
  return c;
}

}  // namespace geosched

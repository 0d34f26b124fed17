#include "geosched/report.hpp"

#include <ostream>

#include "geosched/csv.hpp"
#include "geosched/energy_model.hpp"
#include "json_codec.hpp"

namespace geosched {

using nlohmann::json;

namespace {

json objectives_to_json(const ObjectiveVector& v) {
  return {{"cost", at(v, Objective::Cost)},
          {"carbon", at(v, Objective::Carbon)},
          {"water", at(v, Objective::Water)},
          {"ttft", at(v, Objective::Ttft)}};
}

json weights_to_json(const ObjectiveWeights& w) { return objectives_to_json(w.values()); }

json totals_to_json(const RunTotals& t) {
  return {{"cost", t.cost},
          {"carbon_kg", t.carbon},
          {"water_l", t.water},
          {"e_it_kwh", t.e_it},
          {"e_cooling_kwh", t.e_cooling},
          {"e_cond_kwh", t.e_conditioning},
          {"e_total_kwh", t.e_total},
          {"ttft_mean_s", t.ttft_mean_s},
          {"ttft_p95_s", t.ttft_p95_s},
          {"requests", t.requests},
          {"nonconverged_epochs", t.nonconverged_epochs}};
}

}  // namespace

void write_metrics_csv(std::ostream& out, const RunSummary& summary) {
  out << "epoch,site_id,mode,e_it_kwh,e_crac_kwh,e_cooling_kwh,e_cond_kwh,e_total_kwh,cost,"
         "w_evap_l,w_blowdown_l,w_grid_l,c_grid_kg,c_water_kg,ttft_mean_s,ttft_p95_s,requests,"
         "schema_version\n";
  const auto f = [](double v) { return csv::format_double(v); };
  for (const auto& run : summary.runs) {
    for (const auto& epoch : run.epochs) {
      for (const auto& s : epoch.sites) {
        out << epoch.epoch << ',' << s.energy.site_id << ',' << run.spec.label << ','
            << f(s.energy.e_it) << ',' << f(s.energy.e_crac) << ',' << f(s.energy.e_cooling)
            << ',' << f(s.energy.e_conditioning) << ',' << f(s.energy.e_total) << ','
            << f(s.cost) << ',' << f(s.water.w_evap) << ',' << f(s.water.w_blowdown) << ','
            << f(s.water.w_grid) << ',' << f(s.carbon.c_grid) << ',' << f(s.carbon.c_water)
            << ',' << f(s.ttft_mean_s) << ',' << f(s.ttft_p95_s) << ',' << s.requests << ','
            << kSchemaVersion << '\n';
      }
    }
  }
}

void write_normalized_csv(std::ostream& out, const RunSummary& summary) {
  out << "metric,mode,value,schema_version\n";
  struct Panel {
    const char* name;
    double NormalizedMetrics::*field;
  };
  static const Panel panels[] = {{"ttft", &NormalizedMetrics::ttft},
                                 {"carbon", &NormalizedMetrics::carbon},
                                 {"cost", &NormalizedMetrics::cost},
                                 {"water", &NormalizedMetrics::water}};
  for (const auto& p : panels) {
    for (const auto& run : summary.runs) {
      const auto& nm = summary.normalized.at(run.spec.label);
      out << p.name << ',' << run.spec.label << ',' << csv::format_double(nm.*p.field) << ','
          << kSchemaVersion << '\n';
    }
  }
}

void write_summary_json(std::ostream& out, const Scenario& scenario, const RunSummary& summary) {
  const WaterParams water_defaults;
  const WorkingStateProfile state_defaults;
  const CopCurve cop_standard = CopCurve::standard();
  json cop_default = json::array();
  for (const auto& a : cop_standard.anchors()) {
    cop_default.push_back({{"temp_c", a.temp_c}, {"ppue", a.ppue}});
  }
  json sites = json::array();
  for (const auto& s : scenario.sites) sites.push_back(detail::site_to_json(s));
  json models = json::array();
  for (const auto& [id, m] : scenario.profiles) models.push_back(detail::model_to_json(m));

  json params = {
      {"defaults",
       {{"heat_capacity_kwh_per_l", water_defaults.heat_capacity_kwh_per_l},
        {"blowdown_ratio", water_defaults.blowdown_ratio},
        {"potable_ei_kwh_per_l", kDefaultPotableEi},
        {"wastewater_ei_kwh_per_l", kDefaultWastewaterEi},
        {"cop_curve", cop_default},
        {"state_profile",
         {{"on", state_defaults.on()}, {"idle", state_defaults.idle()}, {"off", state_defaults.off()}}}}},
      {"energy",
       {{"conditioning_fraction", kConditioningFraction},
        {"cooling_multiplier", kCoolingMultiplier}}},
      {"admm", detail::admm_to_json(scenario.admm)},
      {"epoch_hours", scenario.epoch_hours},
      {"horizon_epochs", scenario.horizon_epochs},
      {"idle_floor_nodes", scenario.idle_floor_nodes},
      {"sites", sites},
      {"models", models}};

  json runs = json::array();
  for (const auto& run : summary.runs) {
    const auto& nm = summary.normalized.at(run.spec.label);
    json r = {{"label", run.spec.label},
              {"totals", totals_to_json(run.totals)},
              {"normalized",
               {{"ttft", nm.ttft}, {"carbon", nm.carbon}, {"cost", nm.cost}, {"water", nm.water}}}};
    if (run.spec.kind == RunKind::Admm) {
      r["scheduler"] = "admm";
      r["weights"] = weights_to_json(weights_for(run.spec.mode));
    } else {
      r["scheduler"] = std::string(baseline_display_name(run.spec.baseline));
    }
    runs.push_back(r);
  }

  json doc = {{"schema_version", kSchemaVersion},
              {"scenario", scenario.name},
              {"seed", scenario.seed},
              {"normalize_against", summary.baseline},
              {"parameters", params},
              {"runs", runs}};
  out << doc.dump(2) << '\n';
}

std::string solve_report_json(const SolveReport& r) {
  json doc = {{"schema_version", kSchemaVersion},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"weights", weights_to_json(r.weights)},
              {"normalizers", objectives_to_json(r.normalizers)},
              {"objectives_fractional", objectives_to_json(r.objectives_fractional)},
              {"objectives_integral", objectives_to_json(r.objectives_integral)},
              {"scalarized_fractional", r.scalarized_fractional},
              {"scalarized_integral", r.scalarized_integral},
              {"primal_residuals", r.primal_residuals},
              {"dual_residuals", r.dual_residuals}};
  return doc.dump(2);
}

}  // namespace geosched

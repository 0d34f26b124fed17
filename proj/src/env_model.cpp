#include "geosched/env_model.hpp"

#include <algorithm>
#include <set>

#include "geosched/csv.hpp"
#include "geosched/errors.hpp"

namespace geosched {

void NodeSpec::validate() const {
  if (!(tdp_w > 0)) throw ConfigError("node tdp must be > 0");
  if (!(bandwidth_bytes_per_s > 0)) throw ConfigError("node bandwidth must be > 0");
  if (gpu_count < 1) throw ConfigError("node gpu_count must be >= 1");
  if (!(memory_bytes > 0)) throw ConfigError("node memory must be > 0");
}

WorkingStateProfile::WorkingStateProfile(double on, double idle, double off)
    : on_(on), idle_(idle), off_(off) {
  if (!(off >= 0 && off <= idle && idle <= on && on <= 1.0)) {
    throw ConfigError("working-state proportions must satisfy 0 <= off <= idle <= on <= 1");
  }
}

double WorkingStateProfile::proportion(WorkingState state) const {
  switch (state) {
    case WorkingState::On: return on_;
    case WorkingState::Idle: return idle_;
    case WorkingState::Off: return off_;
  }
  return 0.0;
}

void WaterParams::validate() const {
  if (!(heat_capacity_kwh_per_l > 0)) {
    throw ConfigError("water heat capacity must be > 0");
  }
  if (!(blowdown_ratio >= 0 && blowdown_ratio < 1)) {
    throw ConfigError("blowdown ratio D must satisfy 0 <= D < 1 (got " +
                      csv::format_double(blowdown_ratio) + ")");
  }
}

CopCurve::CopCurve(std::vector<Anchor> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 2) throw ConfigError("CoP curve needs at least 2 anchors");
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    if (!(anchors_[i].ppue > 1.0)) {
      throw ConfigError("CoP curve anchor pPUE must be > 1");
    }
    if (i > 0 && !(anchors_[i].temp_c > anchors_[i - 1].temp_c)) {
      throw ConfigError("CoP curve anchor temperatures must be strictly increasing");
    }
  }
}

CopCurve CopCurve::standard() { return CopCurve({{-3.9, 1.05}, {35.0, 1.30}}); }

double CopCurve::ppue_at(double temp_c) const {
  if (temp_c <= anchors_.front().temp_c) return anchors_.front().ppue;
  if (temp_c >= anchors_.back().temp_c) return anchors_.back().ppue;
  auto hi = std::upper_bound(anchors_.begin(), anchors_.end(), temp_c,
                             [](double t, const Anchor& a) { return t < a.temp_c; });
  auto lo = hi - 1;
  double frac = (temp_c - lo->temp_c) / (hi->temp_c - lo->temp_c);
  return lo->ppue + frac * (hi->ppue - lo->ppue);
}

double cop_at(const CopCurve& curve, double temp_c) {
  return 3.0 / (curve.ppue_at(temp_c) - 1.0);
}

void SiteSpec::validate() const {
  if (site_id.empty()) throw ConfigError("site_id must be non-empty");
  if (node_count < 1) throw ConfigError("site " + site_id + ": node_count must be >= 1");
  try {
    node.validate();
    water.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("site " + site_id + ": " + e.what());
  }
}

EnvironmentTable::EnvironmentTable(std::vector<EnvironmentSample> samples) {
  std::map<std::string, std::set<int>> epochs_by_site;
  for (auto& s : samples) {
    if (s.epoch < 0) throw IngestError("negative epoch for site " + s.site_id);
    auto key = std::make_pair(s.site_id, s.epoch);
    if (samples_.count(key)) {
      throw IngestError("duplicate sample for site " + s.site_id + " epoch " +
                        std::to_string(s.epoch));
    }
    epochs_by_site[s.site_id].insert(s.epoch);
    epochs_ = std::max(epochs_, s.epoch + 1);
    samples_.emplace(key, std::move(s));
  }
  for (const auto& [site, epochs] : epochs_by_site) {
    for (int e = 0; e < epochs_; ++e) {
      if (!epochs.count(e)) {
        throw IngestError("environment gap: site " + site + " missing epoch " +
                          std::to_string(e));
      }
    }
  }
}

const EnvironmentSample& EnvironmentTable::at(const std::string& site_id, int epoch) const {
  auto it = samples_.find({site_id, epoch});
  if (it == samples_.end()) {
    throw ContractError("no environment sample for site " + site_id + " epoch " +
                        std::to_string(epoch));
  }
  return it->second;
}

bool EnvironmentTable::covers(const std::string& site_id, int epoch) const {
  return samples_.count({site_id, epoch}) > 0;
}

std::vector<std::string> EnvironmentTable::site_ids() const {
  std::vector<std::string> out;
  for (const auto& [key, _] : samples_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

EnvironmentTable load_environment(const std::filesystem::path& path,
                                  std::span<const std::string> known_sites) {
  static const std::vector<std::string> header = {
      "site_id",          "epoch",
      "ambient_temp_c",   "tou_price_per_kwh",
      "carbon_intensity_kg_per_kwh", "water_intensity_l_per_kwh",
      "potable_ei_kwh_per_l",        "wastewater_ei_kwh_per_l"};
  std::set<std::string> known(known_sites.begin(), known_sites.end());

  std::vector<EnvironmentSample> samples;
  for (const auto& row : csv::read(path, header)) {
    const auto& f = row.fields;
    EnvironmentSample s;
    s.site_id = f[0];
    if (s.site_id.empty()) throw IngestError("empty site_id", row.line);
    if (!known.empty() && !known.count(s.site_id)) {
      throw IngestError("unknown site id '" + s.site_id + "'", row.line);
    }
    long long epoch = csv::parse_int(f[1], row.line, header[1]);
    if (epoch < 0) throw IngestError("epoch must be >= 0", row.line);
    s.epoch = static_cast<int>(epoch);
    s.ambient_temp_c = csv::parse_double(f[2], row.line, header[2]);
    double* nonneg[] = {&s.tou_price_per_kwh, &s.carbon_intensity_kg_per_kwh,
                        &s.water_intensity_l_per_kwh, &s.potable_ei_kwh_per_l,
                        &s.wastewater_ei_kwh_per_l};
    for (int k = 0; k < 5; ++k) {
      *nonneg[k] = csv::parse_double(f[3 + k], row.line, header[3 + k]);
      if (*nonneg[k] < 0) {
        throw IngestError("negative " + header[3 + k] + " for site " + s.site_id,
                          row.line);
      }
    }
    samples.push_back(std::move(s));
  }
  EnvironmentTable table(std::move(samples));
  for (const auto& site : known) {
    if (!table.covers(site, 0)) {
      throw IngestError("environment has no samples for site " + site);
    }
  }
  return table;
}

}  // namespace geosched

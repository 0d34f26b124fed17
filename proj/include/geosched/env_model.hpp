#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace geosched {

enum class WorkingState { On, Idle, Off };

/// Per-node hardware. A node bundles `gpu_count` GPUs; `tdp_w` is the
/// node-level thermal design power.
struct NodeSpec {
  double tdp_w = 400.0;
  double bandwidth_bytes_per_s = 2e9;
  int gpu_count = 1;
  double memory_bytes = 80e9;  // serving memory available on one node

  void validate() const;
};

/// Fraction of TDP drawn in each working state.
class WorkingStateProfile {
 public:
  WorkingStateProfile() = default;
  WorkingStateProfile(double on, double idle, double off);

  double proportion(WorkingState state) const;
  double on() const { return on_; }
  double idle() const { return idle_; }
  double off() const { return off_; }

 private:
  double on_ = 1.0;
  double idle_ = 0.3;
  double off_ = 0.0;
};

/// Cooling-tower water parameters.
struct WaterParams {
  double heat_capacity_kwh_per_l = 0.68;
  double blowdown_ratio = 0.2;

  void validate() const;
};

/// Partial-PUE as a function of ambient temperature, piecewise linear
/// between anchors and clamped outside them.
class CopCurve {
 public:
  struct Anchor {
    double temp_c;
    double ppue;
  };

  explicit CopCurve(std::vector<Anchor> anchors);

  /// Anchors (-3.9 C, 1.05) and (35 C, 1.30).
  static CopCurve standard();

  double ppue_at(double temp_c) const;
  std::span<const Anchor> anchors() const { return anchors_; }

 private:
  std::vector<Anchor> anchors_;
};

/// Cooling coefficient of performance at `temp_c`: 3 / (pPUE(T) - 1), so
/// that total cooling 3 * E_IT / CoP equals (pPUE - 1) * E_IT.
double cop_at(const CopCurve& curve, double temp_c);

struct SiteSpec {
  std::string site_id;
  std::string region;
  int node_count = 1;
  NodeSpec node;
  WorkingStateProfile states;
  WaterParams water;
  CopCurve cop_curve = CopCurve::standard();

  void validate() const;
  double memory_capacity_bytes() const { return node_count * node.memory_bytes; }
};

struct EnvironmentSample {
  std::string site_id;
  int epoch = 0;
  double ambient_temp_c = 20.0;
  double tou_price_per_kwh = 0.0;
  double carbon_intensity_kg_per_kwh = 0.0;
  double water_intensity_l_per_kwh = 0.0;
  double potable_ei_kwh_per_l = 0.004;
  double wastewater_ei_kwh_per_l = 0.001;
};

inline constexpr double kDefaultPotableEi = 0.004;
inline constexpr double kDefaultWastewaterEi = 0.001;

/// Dense (site, epoch) table. Construction rejects duplicates, negative
/// intensities and gaps: every site must cover epochs 0..epoch_count()-1.
class EnvironmentTable {
 public:
  EnvironmentTable() = default;
  explicit EnvironmentTable(std::vector<EnvironmentSample> samples);

  const EnvironmentSample& at(const std::string& site_id, int epoch) const;
  bool covers(const std::string& site_id, int epoch) const;
  int epoch_count() const { return epochs_; }
  std::vector<std::string> site_ids() const;
  std::size_t size() const { return samples_.size(); }

 private:
  std::map<std::pair<std::string, int>, EnvironmentSample> samples_;
  int epochs_ = 0;
};

/// Reads the environment CSV. When `known_sites` is non-empty, rows naming
/// other sites are rejected and every known site must be present.
EnvironmentTable load_environment(const std::filesystem::path& path,
                                  std::span<const std::string> known_sites = {});

}  // namespace geosched

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geosched/simulator.hpp"

namespace geosched {

inline constexpr int kSchemaVersion = 1;

/// Loads a scenario document. CSV paths inside it are relative to the
/// document's directory. `seed` overrides the document's seed.
Scenario load_scenario(const std::filesystem::path& path,
                       std::optional<std::uint64_t> seed = std::nullopt);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Every load step run independently; checks whose inputs failed are
/// reported as failed with a "skipped" detail.
std::vector<CheckResult> validate_scenario(const std::filesystem::path& path);

/// Single-epoch instance files used by the oracle comparison.
SchedulingProblem load_instance(const std::filesystem::path& path);
void write_instance(std::ostream& out, const SchedulingProblem& problem);

}  // namespace geosched

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geosched/scheduler.hpp"

namespace geosched {

struct RunConfig {
  std::filesystem::path scenario;
  std::filesystem::path out_dir = "out";
  std::optional<std::string> scheduler;  // admm | queue-split | flow-greedy
  std::vector<std::string> modes;        // ADMM modes; empty means all five
  std::optional<std::uint64_t> seed;
  std::optional<std::string> normalize_against;
  bool emit_metrics = true;
  bool emit_summary = true;
  bool emit_normalized = true;

  void validate() const;
};

/// Each command reports failures as {"error": {"kind", "message"}} on `err`
/// and returns a nonzero status.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::filesystem::path& instance, const AdmmParams& params,
               std::ostream& out, std::ostream& err);

std::string error_json(std::string_view kind, std::string_view message);

}  // namespace geosched

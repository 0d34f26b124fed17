#pragma once

// JSON encodings shared by the scenario loader and the report writers.

#include <json.hpp>

#include "geosched/scheduler.hpp"

namespace geosched::detail {

nlohmann::json site_to_json(const SiteSpec& site);
nlohmann::json model_to_json(const ModelProfile& model);
nlohmann::json admm_to_json(const AdmmParams& params);

}  // namespace geosched::detail

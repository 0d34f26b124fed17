#include "geosched/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "geosched/errors.hpp"
#include "json_codec.hpp"

namespace geosched {

namespace fs = std::filesystem;
using nlohmann::json;

namespace detail {

json site_to_json(const SiteSpec& s) {
  json anchors = json::array();
  for (const auto& a : s.cop_curve.anchors()) {
    anchors.push_back({{"temp_c", a.temp_c}, {"ppue", a.ppue}});
  }
  return {{"site_id", s.site_id},
          {"region", s.region},
          {"node_count", s.node_count},
          {"node",
           {{"tdp_w", s.node.tdp_w},
            {"bandwidth_bytes_per_s", s.node.bandwidth_bytes_per_s},
            {"gpu_count", s.node.gpu_count},
            {"memory_bytes", s.node.memory_bytes}}},
          {"state_profile", {{"on", s.states.on()}, {"idle", s.states.idle()}, {"off", s.states.off()}}},
          {"water",
           {{"heat_capacity_kwh_per_l", s.water.heat_capacity_kwh_per_l},
            {"blowdown_ratio", s.water.blowdown_ratio}}},
          {"cop_curve", anchors}};
}

json model_to_json(const ModelProfile& m) {
  return {{"model_id", m.model_id},
          {"param_bytes", m.param_bytes},
          {"kv_bytes_per_token", m.kv_bytes_per_token},
          {"prefill_tokens_per_s", m.prefill_tokens_per_s}};
}

json admm_to_json(const AdmmParams& p) {
  return {{"rho", p.rho},
          {"max_iters", p.max_iters},
          {"eps_primal", p.eps_primal},
          {"eps_dual", p.eps_dual}};
}

}  // namespace detail

using detail::model_to_json;
using detail::site_to_json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

// Field access that reports the offending key instead of a library message.
template <typename T>
T field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(where + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return field<T>(obj, key, where);
}

NodeSpec node_from_json(const json& j, const std::string& where) {
  NodeSpec n;
  n.tdp_w = field_or(j, "tdp_w", n.tdp_w, where);
  n.bandwidth_bytes_per_s = field_or(j, "bandwidth_bytes_per_s", n.bandwidth_bytes_per_s, where);
  n.gpu_count = field_or(j, "gpu_count", n.gpu_count, where);
  n.memory_bytes = field_or(j, "memory_bytes", n.memory_bytes, where);
  return n;
}

SiteSpec site_from_json(const json& j) {
  std::string id = field<std::string>(j, "site_id", "site");
  std::string where = "site " + id;
  SiteSpec s;
  s.site_id = id;
  s.region = field<std::string>(j, "region", where);
  s.node_count = field<int>(j, "node_count", where);
  s.node = node_from_json(j.value("node", json::object()), where);
  if (j.contains("state_profile")) {
    const json& p = j.at("state_profile");
    s.states = WorkingStateProfile(field_or(p, "on", 1.0, where), field_or(p, "idle", 0.3, where),
                                   field_or(p, "off", 0.0, where));
  }
  if (j.contains("water")) {
    const json& w = j.at("water");
    s.water.heat_capacity_kwh_per_l =
        field_or(w, "heat_capacity_kwh_per_l", s.water.heat_capacity_kwh_per_l, where);
    s.water.blowdown_ratio = field_or(w, "blowdown_ratio", s.water.blowdown_ratio, where);
  }
  if (j.contains("cop_curve")) {
    std::vector<CopCurve::Anchor> anchors;
    for (const json& a : j.at("cop_curve")) {
      anchors.push_back({field<double>(a, "temp_c", where), field<double>(a, "ppue", where)});
    }
    s.cop_curve = CopCurve(std::move(anchors));
  }
  s.validate();
  return s;
}

ModelProfile model_from_json(const json& j) {
  ModelProfile m;
  m.model_id = field<std::string>(j, "model_id", "model");
  std::string where = "model " + m.model_id;
  m.param_bytes = field<double>(j, "param_bytes", where);
  m.kv_bytes_per_token = field<double>(j, "kv_bytes_per_token", where);
  m.prefill_tokens_per_s = field<double>(j, "prefill_tokens_per_s", where);
  m.validate();
  return m;
}

LogNormalTokens tokens_from_json(const json& j, LogNormalTokens t, const std::string& where) {
  t.log_mean = field_or(j, "log_mean", t.log_mean, where);
  t.log_sigma = field_or(j, "log_sigma", t.log_sigma, where);
  t.max_tokens = field_or(j, "max_tokens", t.max_tokens, where);
  return t;
}

std::vector<std::pair<std::string, double>> mix_from_json(const json& j, const std::string& where) {
  std::vector<std::pair<std::string, double>> mix;
  if (!j.is_object() || j.empty()) throw ConfigError(where + " must be a non-empty object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number() || v.get<double>() < 0) throw ConfigError(where + ": bad weight for " + k);
    mix.emplace_back(k, v.get<double>());
  }
  return mix;
}

// Staged scenario construction. Each stage fills part of `sc` and may rely
// on earlier stages; `validate_scenario` runs them one by one.
class Loader {
 public:
  Loader(fs::path path, std::optional<std::uint64_t> seed)
      : path_(std::move(path)), seed_override_(seed) {}

  void parse() {
    doc_ = read_json(path_);
    if (!doc_.is_object()) throw ConfigError(path_.string() + ": scenario must be a JSON object");
    sc_.name = field_or<std::string>(doc_, "name", path_.stem().string(), "scenario");
    sc_.epoch_hours = field_or(doc_, "epoch_hours", 1.0, "scenario");
    sc_.idle_floor_nodes = field_or(doc_, "idle_floor_nodes", 0, "scenario");
    sc_.seed = field_or<std::uint64_t>(doc_, "seed", 42, "scenario");
    if (seed_override_) sc_.seed = *seed_override_;
    if (!(sc_.epoch_hours > 0)) throw ConfigError("scenario: epoch_hours must be positive");
    if (sc_.idle_floor_nodes < 0) throw ConfigError("scenario: idle_floor_nodes must be >= 0");
  }

  void sites() {
    const json defaults = doc_.value("site_defaults", json::object());
    if (!doc_.contains("sites") || !doc_["sites"].is_array() || doc_["sites"].empty()) {
      throw ConfigError("scenario: 'sites' must be a non-empty array");
    }
    std::vector<std::string> problems;
    for (const json& raw : doc_["sites"]) {
      json merged = defaults;
      merged.merge_patch(raw);
      try {
        sc_.sites.push_back(site_from_json(merged));
      } catch (const Error& e) {
        std::string id = raw.is_object() ? raw.value("site_id", std::string("?")) : "?";
        problems.push_back("site " + id + ": " + e.what());
      }
    }
    if (!problems.empty()) throw ConfigError(join(problems));
    std::sort(sc_.sites.begin(), sc_.sites.end(),
              [](const SiteSpec& a, const SiteSpec& b) { return a.site_id < b.site_id; });
    for (std::size_t s = 1; s < sc_.sites.size(); ++s) {
      if (sc_.sites[s].site_id == sc_.sites[s - 1].site_id) {
        throw ConfigError("duplicate site_id " + sc_.sites[s].site_id);
      }
    }
  }

  void models() {
    if (!doc_.contains("models") || !doc_["models"].is_array() || doc_["models"].empty()) {
      throw ConfigError("scenario: 'models' must be a non-empty array");
    }
    for (const json& m : doc_["models"]) {
      ModelProfile p = model_from_json(m);
      if (!sc_.profiles.emplace(p.model_id, p).second) {
        throw ConfigError("duplicate model_id " + p.model_id);
      }
    }
  }

  void environment() {
    std::vector<std::string> ids;
    for (const auto& s : sc_.sites) ids.push_back(s.site_id);
    sc_.environment = load_environment(resolve("environment"), ids);
  }

  void trace() {
    if (!doc_.contains("trace")) throw ConfigError("scenario: missing field 'trace'");
    const json& t = doc_["trace"];
    if (t.contains("file")) {
      sc_.trace = ingest_trace(path_.parent_path() / field<std::string>(t, "file", "trace"));
      synthetic_epochs_.reset();
    } else if (t.contains("synthetic")) {
      const json& g = t["synthetic"];
      SynthTraceParams p;
      p.seed = sc_.seed;
      p.epochs = field<int>(g, "epochs", "trace.synthetic");
      p.mean_rate = field<std::vector<double>>(g, "mean_rate", "trace.synthetic");
      p.input_tokens = tokens_from_json(g.value("input_tokens", json::object()), p.input_tokens,
                                        "trace.synthetic.input_tokens");
      p.output_tokens = tokens_from_json(g.value("output_tokens", json::object()),
                                         p.output_tokens, "trace.synthetic.output_tokens");
      p.model_mix = mix_from_json(g.value("model_mix", json()), "trace.synthetic.model_mix");
      p.region_mix = mix_from_json(g.value("region_mix", json()), "trace.synthetic.region_mix");
      sc_.trace = synth_trace(p);
      synthetic_epochs_ = p.epochs;
    } else {
      throw ConfigError("scenario: trace needs 'file' or 'synthetic'");
    }
  }

  void horizon() {
    int fallback = synthetic_epochs_ ? *synthetic_epochs_ : sc_.environment.epoch_count();
    sc_.horizon_epochs = field_or(doc_, "horizon_epochs", fallback, "scenario");
    if (sc_.horizon_epochs < 1) throw ConfigError("scenario: horizon_epochs must be >= 1");
    if (sc_.horizon_epochs > sc_.environment.epoch_count()) {
      throw ConfigError("environment covers " + std::to_string(sc_.environment.epoch_count()) +
                        " epochs but the horizon is " + std::to_string(sc_.horizon_epochs));
    }
    for (const auto& r : sc_.trace) {
      if (r.arrival_epoch >= sc_.horizon_epochs) {
        throw ConfigError("request " + r.request_id + " arrives at epoch " +
                          std::to_string(r.arrival_epoch) + ", beyond the horizon");
      }
    }
  }

  void trace_models() {
    std::set<std::string> missing;
    for (const auto& r : sc_.trace) {
      if (!sc_.profiles.count(r.model_id)) missing.insert(r.model_id);
    }
    if (!missing.empty()) throw ConfigError("trace names unknown models: " + join(missing));
  }

  void latency() { sc_.latency = load_latency(resolve("latency")); }

  void latency_coverage() {
    std::set<std::string> regions;
    for (const auto& r : sc_.trace) regions.insert(r.origin_region);
    std::vector<std::string> missing;
    for (const auto& region : regions) {
      for (const auto& s : sc_.sites) {
        if (!sc_.latency.contains(region, s.site_id)) {
          missing.push_back("(" + region + ", " + s.site_id + ")");
        }
      }
    }
    if (!missing.empty()) throw ConfigError("latency missing for " + join(missing));
  }

  void runs() {
    if (doc_.contains("admm")) {
      const json& a = doc_["admm"];
      sc_.admm.rho = field_or(a, "rho", sc_.admm.rho, "admm");
      sc_.admm.max_iters = field_or(a, "max_iters", sc_.admm.max_iters, "admm");
      sc_.admm.eps_primal = field_or(a, "eps_primal", sc_.admm.eps_primal, "admm");
      sc_.admm.eps_dual = field_or(a, "eps_dual", sc_.admm.eps_dual, "admm");
    }
    sc_.admm.validate();
    if (doc_.contains("runs")) {
      for (const std::string& label : field<std::vector<std::string>>(doc_, "runs", "scenario")) {
        auto run = parse_run(label);
        if (!run) throw ConfigError("unknown run '" + label + "'");
        sc_.runs.push_back(*run);
      }
      if (sc_.runs.empty()) throw ConfigError("scenario: 'runs' is empty");
    } else {
      sc_.runs = all_runs();
    }
    sc_.normalize_against =
        field_or<std::string>(doc_, "normalize_against", "queue-split", "scenario");
    if (!parse_run(sc_.normalize_against)) {
      throw ConfigError("unknown normalization run '" + sc_.normalize_against + "'");
    }
  }

  Scenario take() { return std::move(sc_); }

 private:
  fs::path resolve(const std::string& key) const {
    return path_.parent_path() / field<std::string>(doc_, key, "scenario");
  }

  template <typename C>
  static std::string join(const C& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
    return out;
  }

  fs::path path_;
  std::optional<std::uint64_t> seed_override_;
  json doc_;
  Scenario sc_;
  std::optional<int> synthetic_epochs_;
};

struct Stage {
  const char* name;
  void (Loader::*run)();
  std::vector<const char*> needs;
};

const std::vector<Stage>& stages() {
  static const std::vector<Stage> s = {
      {"scenario document", &Loader::parse, {}},
      {"site specs", &Loader::sites, {"scenario document"}},
      {"model profiles", &Loader::models, {"scenario document"}},
      {"environment coverage", &Loader::environment, {"site specs"}},
      {"trace", &Loader::trace, {"scenario document"}},
      {"horizon", &Loader::horizon, {"environment coverage", "trace"}},
      {"trace models", &Loader::trace_models, {"model profiles", "trace"}},
      {"latency table", &Loader::latency, {"scenario document"}},
      {"latency completeness", &Loader::latency_coverage, {"site specs", "trace", "latency table"}},
      {"runs and solver parameters", &Loader::runs, {"scenario document"}},
  };
  return s;
}

}  // namespace

Scenario load_scenario(const fs::path& path, std::optional<std::uint64_t> seed) {
  if (!fs::exists(path)) throw ConfigError("scenario file not found: " + path.string());
  Loader loader(path, seed);
  for (const auto& stage : stages()) (loader.*stage.run)();
  Scenario sc = loader.take();
  sc.validate();
  return sc;
}

std::vector<CheckResult> validate_scenario(const fs::path& path) {
  std::vector<CheckResult> out;
  std::set<std::string> failed;
  Loader loader(path, std::nullopt);
  for (const auto& stage : stages()) {
    CheckResult r{stage.name, true, ""};
    auto blocked = std::find_if(stage.needs.begin(), stage.needs.end(),
                                [&](const char* n) { return failed.count(n) > 0; });
    if (blocked != stage.needs.end()) {
      r.passed = false;
      r.detail = std::string("skipped: ") + *blocked + " failed";
    } else {
      try {
        (loader.*stage.run)();
      } catch (const Error& e) {
        r.passed = false;
        r.detail = e.what();
      }
    }
    if (!r.passed) failed.insert(stage.name);
    out.push_back(std::move(r));
  }
  return out;
}

SchedulingProblem load_instance(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("instance file not found: " + path.string());
  json doc = read_json(path);
  const std::string where = "instance";
  SchedulingProblem p;
  p.epoch = field_or(doc, "epoch", 0, where);
  p.epoch_hours = field_or(doc, "epoch_hours", 1.0, where);
  const json w = field<json>(doc, "weights", where);
  p.weights = ObjectiveWeights(field<double>(w, "cost", "weights"), field<double>(w, "carbon", "weights"),
                               field<double>(w, "water", "weights"), field<double>(w, "ttft", "weights"));
  std::vector<std::pair<SiteSpec, json>> sites;
  for (const json& s : field<json>(doc, "sites", where)) sites.emplace_back(site_from_json(s), s);
  std::sort(sites.begin(), sites.end(),
            [](const auto& a, const auto& b) { return a.first.site_id < b.first.site_id; });
  std::map<std::string, EnvironmentSample> env;
  for (const json& e : field<json>(doc, "environment", where)) {
    EnvironmentSample x;
    x.site_id = field<std::string>(e, "site_id", "environment");
    x.epoch = p.epoch;
    x.ambient_temp_c = field<double>(e, "ambient_temp_c", "environment");
    x.tou_price_per_kwh = field<double>(e, "tou_price_per_kwh", "environment");
    x.carbon_intensity_kg_per_kwh = field<double>(e, "carbon_intensity_kg_per_kwh", "environment");
    x.water_intensity_l_per_kwh = field<double>(e, "water_intensity_l_per_kwh", "environment");
    x.potable_ei_kwh_per_l = field_or(e, "potable_ei_kwh_per_l", kDefaultPotableEi, "environment");
    x.wastewater_ei_kwh_per_l =
        field_or(e, "wastewater_ei_kwh_per_l", kDefaultWastewaterEi, "environment");
    env[x.site_id] = x;
  }
  for (const auto& [site, raw] : sites) {
    if (!env.count(site.site_id)) throw ConfigError("instance: no environment for " + site.site_id);
    p.env.push_back(env[site.site_id]);
    SiteCapacity cap = full_capacity(site);
    cap.memory_bytes = field_or(raw, "memory_capacity_bytes", cap.memory_bytes, where);
    p.capacity.push_back(cap);
    p.sites.push_back(site);
  }
  for (const json& m : field<json>(doc, "models", where)) {
    ModelProfile mp = model_from_json(m);
    p.profiles[mp.model_id] = mp;
  }
  for (const json& l : field<json>(doc, "latency", where)) {
    p.latency.set(field<std::string>(l, "origin_region", "latency"),
                  field<std::string>(l, "site_id", "latency"), field<double>(l, "latency_s", "latency"));
  }
  for (const json& r : field<json>(doc, "requests", where)) {
    InferenceRequest q;
    q.request_id = field<std::string>(r, "request_id", "request");
    q.arrival_epoch = p.epoch;
    q.model_id = field<std::string>(r, "model_id", "request");
    q.input_tokens = field<std::int64_t>(r, "input_tokens", "request");
    q.output_tokens = field<std::int64_t>(r, "output_tokens", "request");
    q.origin_region = field<std::string>(r, "origin_region", "request");
    p.requests.push_back(q);
  }
  for (const json& r : doc.value("resident", json::array())) {
    p.resident.emplace(field<std::string>(r, "site_id", "resident"),
                       field<std::string>(r, "model_id", "resident"));
  }
  try {
    p.validate();
  } catch (const ContractError& e) {
    throw ConfigError(std::string("instance: ") + e.what());
  }
  return p;
}

void write_instance(std::ostream& out, const SchedulingProblem& p) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["epoch"] = p.epoch;
  doc["epoch_hours"] = p.epoch_hours;
  doc["weights"] = {{"cost", p.weights[Objective::Cost]},
                    {"carbon", p.weights[Objective::Carbon]},
                    {"water", p.weights[Objective::Water]},
                    {"ttft", p.weights[Objective::Ttft]}};
  json sites = json::array();
  json env = json::array();
  for (std::size_t s = 0; s < p.sites.size(); ++s) {
    json j = site_to_json(p.sites[s]);
    j["memory_capacity_bytes"] = p.capacity[s].memory_bytes;
    sites.push_back(j);
    const auto& e = p.env[s];
    env.push_back({{"site_id", e.site_id},
                   {"ambient_temp_c", e.ambient_temp_c},
                   {"tou_price_per_kwh", e.tou_price_per_kwh},
                   {"carbon_intensity_kg_per_kwh", e.carbon_intensity_kg_per_kwh},
                   {"water_intensity_l_per_kwh", e.water_intensity_l_per_kwh},
                   {"potable_ei_kwh_per_l", e.potable_ei_kwh_per_l},
                   {"wastewater_ei_kwh_per_l", e.wastewater_ei_kwh_per_l}});
  }
  doc["sites"] = sites;
  doc["environment"] = env;
  json models = json::array();
  for (const auto& [id, m] : p.profiles) models.push_back(model_to_json(m));
  doc["models"] = models;
  json lat = json::array();
  for (const auto& [key, v] : p.latency.entries()) {
    lat.push_back({{"origin_region", key.first}, {"site_id", key.second}, {"latency_s", v}});
  }
  doc["latency"] = lat;
  json reqs = json::array();
  for (const auto& r : p.requests) {
    reqs.push_back({{"request_id", r.request_id},
                    {"model_id", r.model_id},
                    {"input_tokens", r.input_tokens},
                    {"output_tokens", r.output_tokens},
                    {"origin_region", r.origin_region}});
  }
  doc["requests"] = reqs;
  json res = json::array();
  for (const auto& [site, model] : p.resident) res.push_back({{"site_id", site}, {"model_id", model}});
  doc["resident"] = res;
  out << doc.dump(2) << '\n';
}

}  // namespace geosched

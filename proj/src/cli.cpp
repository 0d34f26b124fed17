#include "geosched/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "geosched/errors.hpp"
#include "geosched/report.hpp"
#include "geosched/scenario.hpp"

namespace geosched {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (scenario.empty()) throw ConfigError("no scenario given");
  if (out_dir.empty()) throw ConfigError("no output directory given");
  if (scheduler && *scheduler != "admm" && !parse_run(*scheduler)) {
    throw ConfigError("unknown scheduler '" + *scheduler + "'");
  }
  if (scheduler && *scheduler != "admm" && !modes.empty()) {
    throw ConfigError("--modes only applies to the admm scheduler");
  }
  for (const auto& m : modes) {
    if (!parse_mode(m)) throw ConfigError("unknown mode '" + m + "'");
  }
}

std::string error_json(std::string_view kind, std::string_view message) {
  json doc = {{"error", {{"kind", kind}, {"message", message}}}};
  return doc.dump();
}

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what()) << '\n';
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()) << '\n';
  }
  return 1;
}

void write_file(const fs::path& path, const auto& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  writer(f);
  if (!f) throw ConfigError("failed writing " + path.string());
}

std::vector<RunSpec> select_runs(const RunConfig& config, const Scenario& scenario) {
  if (!config.scheduler && config.modes.empty()) return scenario.runs;
  std::vector<RunSpec> runs;
  if (!config.scheduler || *config.scheduler == "admm") {
    if (config.modes.empty()) {
      for (Mode m : kAllModes) runs.push_back(RunSpec::admm(m));
    } else {
      for (const auto& m : config.modes) runs.push_back(RunSpec::admm(*parse_mode(m)));
    }
  } else {
    runs.push_back(*parse_run(*config.scheduler));
  }
  return runs;
}

double relative_gap(double value, double optimum) {
  if (value == optimum) return 0.0;
  return (value - optimum) / std::max(std::abs(optimum), 1e-300);
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    Scenario scenario = load_scenario(config.scenario, config.seed);
    scenario.runs = select_runs(config, scenario);
    if (config.normalize_against) {
      if (!parse_run(*config.normalize_against)) {
        throw ConfigError("unknown normalization run '" + *config.normalize_against + "'");
      }
      scenario.normalize_against = *config.normalize_against;
    }
    RunSummary summary = run_simulation(scenario);

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create " + config.out_dir.string() + ": " + ec.message());
    if (config.emit_metrics) {
      write_file(config.out_dir / "metrics.csv",
                 [&](std::ostream& f) { write_metrics_csv(f, summary); });
    }
    if (config.emit_summary) {
      write_file(config.out_dir / "summary.json",
                 [&](std::ostream& f) { write_summary_json(f, scenario, summary); });
    }
    if (config.emit_normalized) {
      write_file(config.out_dir / "normalized.csv",
                 [&](std::ostream& f) { write_normalized_csv(f, summary); });
    }
    for (const auto& run : summary.runs) {
      const auto& nm = summary.normalized.at(run.spec.label);
      out << run.spec.label << ": ttft " << nm.ttft << " carbon " << nm.carbon << " cost "
          << nm.cost << " water " << nm.water << " (vs " << summary.baseline << ")\n";
    }
    return 0;
  });
}

int cmd_validate(const fs::path& scenario, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!fs::exists(scenario)) throw ConfigError("scenario file not found: " + scenario.string());
    bool ok = true;
    for (const auto& check : validate_scenario(scenario)) {
      out << (check.passed ? "PASS " : "FAIL ") << check.name;
      if (!check.detail.empty()) out << ": " << check.detail;
      out << '\n';
      ok = ok && check.passed;
    }
    return ok ? 0 : 2;
  });
}

int cmd_oracle(const fs::path& instance, const AdmmParams& params, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    SchedulingProblem problem = load_instance(instance);
    OracleResult oracle = oracle_solve(problem);
    SolveReport admm = admm_solve(problem, params);
    ScalarProblem sp = CostModel(problem).scalarized(problem.weights);
    double relaxed = sp.value(admm.fractional);
    double integral = sp.value(admm.integral);
    json doc = {{"schema_version", kSchemaVersion},
                {"requests", problem.requests.size()},
                {"sites", problem.sites.size()},
                {"relaxed",
                 {{"oracle", oracle.relaxed_value},
                  {"admm", relaxed},
                  {"gap", relative_gap(relaxed, oracle.relaxed_value)}}},
                {"integral",
                 {{"oracle", oracle.integral_value},
                  {"admm", integral},
                  {"gap", relative_gap(integral, oracle.integral_value)}}},
                {"admm_iterations", admm.iterations},
                {"admm_converged", admm.converged}};
    out << doc.dump(2) << '\n';
    return 0;
  });
}

}  // namespace geosched

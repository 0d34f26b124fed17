#pragma once

#include <iosfwd>
#include <string>

#include "geosched/scenario.hpp"
#include "geosched/simulator.hpp"

namespace geosched {

/// One row per (run, epoch, site).
void write_metrics_csv(std::ostream& out, const RunSummary& summary);
/// metric,mode,value rows for the four normalized panels.
void write_normalized_csv(std::ostream& out, const RunSummary& summary);
/// Run totals, normalized values and a full echo of the model parameters.
void write_summary_json(std::ostream& out, const Scenario& scenario, const RunSummary& summary);

/// Solver diagnostics: weights, normalizers, objectives, residual trace.
std::string solve_report_json(const SolveReport& report);

}  // namespace geosched

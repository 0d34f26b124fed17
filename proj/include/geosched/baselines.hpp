#pragma once

#include <string_view>

#include "geosched/scheduler.hpp"

namespace geosched {

/// Comparison policies. These are simplified stand-ins: a TTFT-greedy
/// queue-based policy ("queue-split (Splitwise-style)") and an
/// environment-blind utilization-balancing policy ("flow-greedy
/// (Helix-style)"), not reimplementations of either system.
enum class BaselineKind { QueueSplit, FlowGreedy };

std::string_view baseline_label(BaselineKind kind);
std::string_view baseline_display_name(BaselineKind kind);

/// Requests in order; each goes to the memory-feasible site with the lowest
/// estimated TTFT given the assignments made so far.
Assignment queue_split_schedule(const SchedulingProblem& problem);

/// Requests in order; each goes to the memory-feasible site whose
/// utilization (load / service capacity) after placement is lowest. Sites
/// are ranked by service capacity, larger first, then by index.
Assignment flow_greedy_schedule(const SchedulingProblem& problem);

Assignment baseline_schedule(BaselineKind kind, const SchedulingProblem& problem);

}  // namespace geosched

#include "geosched/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "geosched/errors.hpp"

namespace geosched {

std::string_view baseline_label(BaselineKind kind) {
  return kind == BaselineKind::QueueSplit ? "queue-split" : "flow-greedy";
}

std::string_view baseline_display_name(BaselineKind kind) {
  return kind == BaselineKind::QueueSplit ? "queue-split (Splitwise-style)"
                                          : "flow-greedy (Helix-style)";
}

namespace {

bool fits(double used, double add, double capacity) {
  return used + add <= capacity * (1.0 + 1e-12);
}

[[noreturn]] void no_site(const SchedulingProblem& p, std::size_t i) {
  throw InfeasibleError("epoch " + std::to_string(p.epoch) + ": request " +
                        p.requests[i].request_id + " fits on no site");
}

}  // namespace

Assignment queue_split_schedule(const SchedulingProblem& problem) {
  CostModel model(problem);
  const std::size_t n = model.requests(), S = model.sites();
  std::vector<double> used(S, 0.0), load(S, 0.0);
  std::vector<std::size_t> site_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = S;
    double best_ttft = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      if (!fits(used[s], model.memory(i), model.capacity(s))) continue;
      double ttft = at(model.linear(i, s), Objective::Ttft) +
                    model.queue_slope_s(s) * (load[s] + 1.0);
      if (best == S || ttft < best_ttft) {
        best = s;
        best_ttft = ttft;
      }
    }
    if (best == S) no_site(problem, i);
    site_of[i] = best;
    used[best] += model.memory(i);
    load[best] += 1.0;
  }
  return Assignment::from_sites(site_of, S);
}

Assignment flow_greedy_schedule(const SchedulingProblem& problem) {
  CostModel model(problem);
  const std::size_t n = model.requests(), S = model.sites();
  // Service capacity is proportional to site memory (concurrent slots).
  std::vector<double> service(S);
  for (std::size_t s = 0; s < S; ++s) service[s] = model.capacity(s);
  std::vector<std::size_t> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return service[a] > service[b]; });

  std::vector<double> used(S, 0.0), load(S, 0.0);
  std::vector<std::size_t> site_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = S;
    double best_util = 0.0;
    for (std::size_t s : order) {
      if (!fits(used[s], model.memory(i), model.capacity(s))) continue;
      double util = (load[s] + 1.0) / service[s];
      if (best == S || util < best_util) {
        best = s;
        best_util = util;
      }
    }
    if (best == S) no_site(problem, i);
    site_of[i] = best;
    used[best] += model.memory(i);
    load[best] += 1.0;
  }
  return Assignment::from_sites(site_of, S);
}

Assignment baseline_schedule(BaselineKind kind, const SchedulingProblem& problem) {
  return kind == BaselineKind::QueueSplit ? queue_split_schedule(problem)
                                          : flow_greedy_schedule(problem);
}

}  // namespace geosched

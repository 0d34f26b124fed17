#include <algorithm>
#include <cmath>
#include <numeric>

#include "geosched/errors.hpp"
#include "geosched/scheduler.hpp"

namespace geosched {
namespace {

constexpr double kRowTolerance = 1e-6;
constexpr double kCapacitySlack = 1e-12;

bool fits(double used, double add, double capacity) {
  return used + add <= capacity * (1.0 + kCapacitySlack);
}

}  // namespace

Assignment round_assignment(const Assignment& fractional, const ScalarProblem& problem) {
  problem.validate();
  const std::size_t n = problem.requests;
  const std::size_t S = problem.sites;
  if (fractional.requests() != n || fractional.sites() != S) {
    throw ContractError("round_assignment: assignment shape mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(fractional.row_sum(i) - 1.0) > kRowTolerance) {
      throw ContractError("round_assignment: row " + std::to_string(i) + " sums to " +
                          std::to_string(fractional.row_sum(i)));
    }
  }

  // Preference list per request: fraction descending, site index ascending.
  std::vector<std::vector<std::size_t>> pref(n, std::vector<std::size_t>(S));
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(pref[i].begin(), pref[i].end(), 0);
    std::stable_sort(pref[i].begin(), pref[i].end(), [&](std::size_t a, std::size_t b) {
      return fractional(i, a) > fractional(i, b);
    });
  }

  std::vector<std::size_t> rank(n, 0), site_of(n);
  std::vector<double> used(S, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    site_of[i] = pref[i][0];
    used[site_of[i]] += problem.memory[i];
  }

  while (true) {
    std::size_t over = S;
    for (std::size_t s = 0; s < S; ++s) {
      if (!fits(used[s], 0.0, problem.capacity[s])) {
        over = s;
        break;
      }
    }
    if (over == S) break;

    // Evict the request with the least mass here; later request wins ties.
    std::size_t victim = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (site_of[i] != over) continue;
      if (victim == n || fractional(i, over) <= fractional(victim, over)) victim = i;
    }
    std::size_t next = S;
    while (++rank[victim] < S) {
      std::size_t t = pref[victim][rank[victim]];
      if (fits(used[t], problem.memory[victim], problem.capacity[t])) {
        next = t;
        break;
      }
    }
    if (next == S) {
      throw InfeasibleError("capacity repair failed: request " + std::to_string(victim) +
                            " fits on no remaining site");
    }
    used[over] -= problem.memory[victim];
    used[next] += problem.memory[victim];
    site_of[victim] = next;
  }
  return Assignment::from_sites(site_of, S);
}

Assignment improve_assignment(const Assignment& integral, const ScalarProblem& problem) {
  problem.validate();
  const std::size_t n = problem.requests;
  const std::size_t S = problem.sites;
  if (integral.requests() != n || integral.sites() != S) {
    throw ContractError("improve_assignment: assignment shape mismatch");
  }
  auto site_of = integral.site_of();
  std::vector<double> used(S, 0.0), load(S, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    used[site_of[i]] += problem.memory[i];
    load[site_of[i]] += 1.0;
  }
  const double tol = 1e-12 * std::max(std::abs(problem.value(integral)), 1e-300);

  for (int pass = 0; pass < 200; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t from = site_of[i];
      double leave = -problem.c(i, from) - problem.congestion[from] * (2.0 * load[from] - 1.0);
      std::size_t best = from;
      double best_delta = -tol;
      for (std::size_t t = 0; t < S; ++t) {
        if (t == from || !fits(used[t], problem.memory[i], problem.capacity[t])) continue;
        double delta = leave + problem.c(i, t) + problem.congestion[t] * (2.0 * load[t] + 1.0);
        if (delta < best_delta) {
          best_delta = delta;
          best = t;
        }
      }
      if (best != from) {
        used[from] -= problem.memory[i];
        load[from] -= 1.0;
        used[best] += problem.memory[i];
        load[best] += 1.0;
        site_of[i] = best;
        improved = true;
      }
    }
    // Swaps keep every site's load, so only the linear terms change.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        std::size_t si = site_of[i], sj = site_of[j];
        if (si == sj) continue;
        double delta = problem.c(i, sj) + problem.c(j, si) - problem.c(i, si) - problem.c(j, sj);
        if (delta >= -tol) continue;
        double dm = problem.memory[j] - problem.memory[i];
        if (!fits(used[si], dm, problem.capacity[si]) ||
            !fits(used[sj], -dm, problem.capacity[sj])) {
          continue;
        }
        used[si] += dm;
        used[sj] -= dm;
        std::swap(site_of[i], site_of[j]);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return Assignment::from_sites(site_of, S);
}

}  // namespace geosched

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "geosched/errors.hpp"
#include "geosched/scheduler.hpp"

namespace geosched {

void AdmmParams::validate() const {
  if (!(rho > 0)) throw ConfigError("ADMM rho must be > 0");
  if (max_iters < 1) throw ConfigError("ADMM max_iters must be >= 1");
  if (!(eps_primal > 0) || !(eps_dual > 0)) throw ConfigError("ADMM tolerances must be > 0");
}

void project_simplex(std::span<double> v) {
  if (v.empty()) return;
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumsum += sorted[j];
    double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
}

namespace {

constexpr int kAdaptPeriod = 10;
constexpr double kBalance = 10.0;
constexpr double kRhoStep = 2.0;

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// Solves t = sum_i clip(b_i - k t) for t >= 0 and writes x_i = clip(b_i - k t).
// h(t) = t - sum_i clip(b_i - k t) is increasing and piecewise linear, so the
// root is bracketed by consecutive breakpoints and found exactly.
void congestion_fixed_point(std::span<const double> b, double k, std::span<double> x,
                            std::vector<double>& scratch) {
  const std::size_t n = b.size();
  if (k <= 0) {
    for (std::size_t i = 0; i < n; ++i) x[i] = clip01(b[i]);
    return;
  }
  auto h = [&](double t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += clip01(b[i] - k * t);
    return t - sum;
  };
  double h0 = h(0.0);
  double root = 0.0;
  if (h0 < 0) {
    scratch.clear();
    for (std::size_t i = 0; i < n; ++i) {
      double p1 = (b[i] - 1.0) / k;
      double p0 = b[i] / k;
      if (p1 > 0) scratch.push_back(p1);
      if (p0 > 0) scratch.push_back(p0);
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    // First breakpoint where h >= 0; one exists because h(max b/k) > 0.
    std::size_t lo = 0, hi = scratch.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (h(scratch[mid]) >= 0) hi = mid;
      else lo = mid + 1;
    }
    double t_hi = lo < scratch.size() ? scratch[lo] : static_cast<double>(n);
    double t_lo = lo > 0 ? scratch[lo - 1] : 0.0;
    double h_lo = lo > 0 ? h(t_lo) : h0;
    double h_hi = h(t_hi);
    root = h_hi > h_lo ? t_lo - h_lo * (t_hi - t_lo) / (h_hi - h_lo) : t_hi;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = clip01(b[i] - k * root);
}

// Site block: min c.x + a (1.x)^2 + (rho/2)|x - v|^2 over the box with
// m.x <= 1 (memory already divided by the site's capacity). The capacity
// multiplier is found by bisection; memory use is monotone in it.
class SiteBlock {
 public:
  SiteBlock(std::vector<double> cost, double congestion, std::vector<double> memory, double rho)
      : cost_(std::move(cost)), memory_(std::move(memory)), congestion_(congestion),
        b_(cost_.size()) {
    set_rho(rho);
  }

  void set_rho(double rho) {
    rho_ = rho;
    k_ = 2.0 * congestion_ / rho;
  }

  void solve(std::span<const double> v, std::span<double> x) {
    evaluate(v, 0.0, x);
    if (used(x) <= 1.0) return;
    double lo = 0.0, hi = 1.0;
    for (int guard = 0; guard < 200; ++guard) {
      evaluate(v, hi, x);
      if (used(x) <= 1.0) break;
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      evaluate(v, mid, x);
      if (used(x) <= 1.0) hi = mid;
      else lo = mid;
    }
    evaluate(v, hi, x);
  }

 private:
  void evaluate(std::span<const double> v, double mu, std::span<double> x) {
    for (std::size_t i = 0; i < b_.size(); ++i) {
      b_[i] = v[i] - (cost_[i] + mu * memory_[i]) / rho_;
    }
    congestion_fixed_point(b_, k_, x, scratch_);
  }

  double used(std::span<const double> x) const {
    double u = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) u += memory_[i] * x[i];
    return u;
  }

  std::vector<double> cost_;
  std::vector<double> memory_;
  double congestion_;
  double rho_ = 1.0;
  double k_ = 0.0;
  std::vector<double> b_;
  std::vector<double> scratch_;
};

}  // namespace

AdmmResult admm_consensus(const ScalarProblem& problem, const AdmmParams& params) {
  problem.validate();
  params.validate();
  const std::size_t n = problem.requests;
  const std::size_t S = problem.sites;

  AdmmResult result;
  result.z = Assignment(n, S);
  if (n == 0) {
    result.converged = true;
    return result;
  }
  if (S == 1) {
    for (std::size_t i = 0; i < n; ++i) result.z(i, 0) = 1.0;
    result.iterations = 1;
    result.converged = true;
    result.primal_residuals = {0.0};
    result.dual_residuals = {0.0};
    return result;
  }

  // Per-request scaling keeps coefficients O(1) whatever the batch size.
  const double scale = static_cast<double>(n);
  std::vector<SiteBlock> blocks;
  blocks.reserve(S);
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<double> cost(n), memory(n);
    for (std::size_t i = 0; i < n; ++i) {
      cost[i] = scale * problem.c(i, s);
      memory[i] = problem.memory[i] / problem.capacity[s];
    }
    blocks.emplace_back(std::move(cost), scale * problem.congestion[s], std::move(memory),
                        params.rho);
  }

  // Column-major working copies: column s is site s's local block.
  std::vector<double> x(n * S), z(n * S, 1.0 / static_cast<double>(S)), u(n * S, 0.0);
  std::vector<double> z_prev(n * S), v(n), row(S);
  std::vector<double> best_z = z;
  double best_score = std::numeric_limits<double>::infinity();

  double rho = params.rho;
  for (int k = 1; k <= params.max_iters; ++k) {
    for (std::size_t s = 0; s < S; ++s) {
      double* zs = &z[s * n];
      double* us = &u[s * n];
      for (std::size_t i = 0; i < n; ++i) v[i] = zs[i] - us[i];
      blocks[s].solve(v, std::span<double>(&x[s * n], n));
    }
    z_prev = z;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < S; ++s) row[s] = x[s * n + i] + u[s * n + i];
      project_simplex(row);
      for (std::size_t s = 0; s < S; ++s) z[s * n + i] = row[s];
    }
    double r2 = 0.0, d2 = 0.0;
    for (std::size_t j = 0; j < n * S; ++j) {
      double diff = x[j] - z[j];
      u[j] += diff;
      r2 += diff * diff;
      double dz = z[j] - z_prev[j];
      d2 += dz * dz;
    }
    double primal = std::sqrt(r2);
    double dual = rho * std::sqrt(d2);
    result.primal_residuals.push_back(primal);
    result.dual_residuals.push_back(dual);
    result.iterations = k;

    double score = std::max(primal / params.eps_primal, dual / params.eps_dual);
    if (score <= best_score) {
      best_score = score;
      best_z = z;
    }
    if (primal <= params.eps_primal && dual <= params.eps_dual) {
      result.converged = true;
      break;
    }

    // Residual balancing: keep the two residuals within a factor of each
    // other. The scaled dual u = y / rho is rescaled with rho.
    if (params.adaptive_rho && k % kAdaptPeriod == 0 && k <= params.max_iters * 4 / 5) {
      double factor = 1.0;
      if (primal > kBalance * dual) factor = kRhoStep;
      else if (dual > kBalance * primal) factor = 1.0 / kRhoStep;
      if (factor != 1.0) {
        rho *= factor;
        for (double& uj : u) uj /= factor;
        for (auto& b : blocks) b.set_rho(rho);
      }
    }
  }

  const auto& chosen = result.converged ? z : best_z;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < S; ++s) result.z(i, s) = chosen[s * n + i];
  }
  return result;
}

}  // namespace geosched

// Dense primal-dual interior-point method for the relaxed placement problem
//
//   min 1/2 x'Px + q'x   s.t.  A x = 1 (rows on the simplex),  G x <= h
//
// where G stacks the per-site memory rows and -I (x >= 0). Mehrotra
// predictor-corrector with an infeasible start. Sizes are at most 48
// variables, so everything is dense.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "geosched/errors.hpp"
#include "geosched/scheduler.hpp"

namespace geosched {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double max_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (dv[j] < 0) alpha = std::min(alpha, -v[j] / dv[j]);
  }
  return alpha;
}

}  // namespace

Assignment solve_relaxation_interior_point(const ScalarProblem& problem) {
  problem.validate();
  const auto n = static_cast<Eigen::Index>(problem.requests);
  const auto S = static_cast<Eigen::Index>(problem.sites);
  Assignment out(problem.requests, problem.sites);
  if (n == 0) return out;
  if (S == 1) {
    for (Eigen::Index i = 0; i < n; ++i) out(i, 0) = 1.0;
    return out;
  }

  const Eigen::Index N = n * S;
  const Eigen::Index m = S + N;
  auto var = [S](Eigen::Index i, Eigen::Index s) { return i * S + s; };

  MatrixXd P = MatrixXd::Zero(N, N);
  VectorXd q(N);
  MatrixXd A = MatrixXd::Zero(n, N);
  VectorXd b = VectorXd::Ones(n);
  MatrixXd G = MatrixXd::Zero(m, N);
  VectorXd h = VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index s = 0; s < S; ++s) {
      q[var(i, s)] = problem.c(i, s);
      A(i, var(i, s)) = 1.0;
      G(s, var(i, s)) = problem.memory[i] / problem.capacity[s];
      for (Eigen::Index j = 0; j < n; ++j) P(var(i, s), var(j, s)) = 2.0 * problem.congestion[s];
    }
  }
  for (Eigen::Index s = 0; s < S; ++s) h[s] = 1.0;
  for (Eigen::Index j = 0; j < N; ++j) G(S + j, j) = -1.0;

  VectorXd x = VectorXd::Constant(N, 1.0 / static_cast<double>(S));
  VectorXd y = VectorXd::Zero(n);
  VectorXd s = (h - G * x).cwiseMax(1.0);
  VectorXd z = VectorXd::Ones(m);

  const double qscale = 1.0 + q.cwiseAbs().maxCoeff();
  for (int iter = 0; iter < 200; ++iter) {
    VectorXd r_dual = P * x + q + A.transpose() * y + G.transpose() * z;
    VectorXd r_eq = A * x - b;
    VectorXd r_ineq = G * x + s - h;
    double mu = s.dot(z) / static_cast<double>(m);
    if (r_dual.lpNorm<Eigen::Infinity>() < 1e-11 * qscale &&
        r_eq.lpNorm<Eigen::Infinity>() < 1e-12 && r_ineq.lpNorm<Eigen::Infinity>() < 1e-12 &&
        mu < 1e-13 * qscale) {
      break;
    }

    VectorXd d = z.cwiseQuotient(s);
    MatrixXd K = MatrixXd::Zero(N + n, N + n);
    K.topLeftCorner(N, N) = P + G.transpose() * d.asDiagonal() * G;
    K.topRightCorner(N, n) = A.transpose();
    K.bottomLeftCorner(n, N) = A;
    Eigen::PartialPivLU<MatrixXd> lu(K);

    auto direction = [&](const VectorXd& rc, VectorXd& dx, VectorXd& ds, VectorXd& dz,
                         VectorXd& dy) {
      VectorXd t = (rc + z.cwiseProduct(r_ineq)).cwiseQuotient(s);
      VectorXd rhs(N + n);
      rhs.head(N) = -r_dual - G.transpose() * t;
      rhs.tail(n) = -r_eq;
      VectorXd sol = lu.solve(rhs);
      dx = sol.head(N);
      dy = sol.tail(n);
      ds = -r_ineq - G * dx;
      dz = (rc - z.cwiseProduct(ds)).cwiseQuotient(s);
    };

    VectorXd dx, ds, dz, dy;
    VectorXd rc = -s.cwiseProduct(z);
    direction(rc, dx, ds, dz, dy);
    double alpha_aff = std::min(max_step(s, ds), max_step(z, dz));
    double mu_aff =
        (s + alpha_aff * ds).dot(z + alpha_aff * dz) / static_cast<double>(m);
    double sigma = std::pow(mu_aff / mu, 3);

    rc = -s.cwiseProduct(z) - ds.cwiseProduct(dz) + VectorXd::Constant(m, sigma * mu);
    direction(rc, dx, ds, dz, dy);
    double alpha = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)));

    x += alpha * dx;
    y += alpha * dy;
    s += alpha * ds;
    z += alpha * dz;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index si = 0; si < S; ++si) out(i, si) = std::max(0.0, x[var(i, si)]);
  }
  return out;
}

}  // namespace geosched

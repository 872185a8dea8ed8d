#include "barrier_solver.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

#include "uavsc/errors.hpp"

namespace uavsc::detail {

double LocalQuad::value(const Eigen::VectorXd& x) const {
  double v = r;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double xi = x[idx[i]];
    v += q[i] * xi;
    for (std::size_t j = 0; j < idx.size(); ++j) v += 0.5 * p(i, j) * xi * x[idx[j]];
  }
  return v;
}

Eigen::VectorXd LocalQuad::grad(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = q;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) g[i] += p(i, j) * x[idx[j]];
  return g;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double objective_value(const QcqpProblem& prob, const Eigen::VectorXd& x) {
  double f = 0.0;
  for (const auto& term : prob.objective) f += term.value(x);
  return f;
}

// t f(x) - sum log(-g_i(x)); +inf outside the strict interior.
double barrier_value(const QcqpProblem& prob, const Eigen::VectorXd& x, double t) {
  double phi = t * objective_value(prob, x);
  for (const auto& g : prob.inequalities) {
    const double v = g.value(x);
    if (!(v < 0.0)) return kInf;
    phi -= std::log(-v);
  }
  return phi;
}

}  // namespace

BarrierResult solve_barrier(const QcqpProblem& prob, const Eigen::VectorXd& x0, const BarrierOptions& opt) {
  const int n = prob.n;
  const int p = static_cast<int>(prob.a.rows());
  const double m = static_cast<double>(prob.inequalities.size());

  BarrierResult res;
  res.x = x0;
  Eigen::VectorXd& x = res.x;
  if (!std::isfinite(barrier_value(prob, x, 1.0)))
    throw OptimizationError("barrier start point is not strictly feasible");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(prob.a.nonZeros() * 2 + prob.inequalities.size() * 9 + prob.objective.size() * 4 + n);
  Eigen::SparseMatrix<double> kkt(n + p, n + p);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  Eigen::VectorXd grad(n), rhs(n + p), dx(n);

  auto assemble = [&](double t) {
    trip.clear();
    grad.setZero();
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, 0.0);
    for (const auto& term : prob.objective) {
      const Eigen::VectorXd g = term.grad(x);
      for (std::size_t i = 0; i < term.idx.size(); ++i) {
        grad[term.idx[i]] += t * g[i];
        for (std::size_t j = 0; j < term.idx.size(); ++j)
          if (term.p(i, j) != 0.0) trip.emplace_back(term.idx[i], term.idx[j], t * term.p(i, j));
      }
    }
    for (const auto& c : prob.inequalities) {
      const double v = c.value(x);
      const Eigen::VectorXd g = c.grad(x);
      const double inv = -1.0 / v;
      for (std::size_t i = 0; i < c.idx.size(); ++i) {
        grad[c.idx[i]] += inv * g[i];
        for (std::size_t j = 0; j < c.idx.size(); ++j)
          trip.emplace_back(c.idx[i], c.idx[j], inv * inv * g[i] * g[j] + inv * c.p(i, j));
      }
    }
    for (int k = 0; k < prob.a.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(prob.a, k); it; ++it) {
        trip.emplace_back(n + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        trip.emplace_back(static_cast<int>(it.col()), n + static_cast<int>(it.row()), it.value());
      }
    kkt.setFromTriplets(trip.begin(), trip.end());
    kkt.makeCompressed();
  };

  double t = std::max(1.0, m / (1.0 + std::abs(objective_value(prob, x))));
  for (int stage = 0; stage < 60; ++stage) {
    for (int it = 0; it < opt.max_newton; ++it) {
      assemble(t);
      if (!analyzed) {
        lu.analyzePattern(kkt);
        analyzed = true;
      }
      lu.factorize(kkt);
      if (lu.info() != Eigen::Success) throw OptimizationError("KKT factorization failed in barrier solve");
      rhs.head(n) = -grad;
      rhs.tail(p) = -(prob.a * x - prob.b);
      const Eigen::VectorXd sol = lu.solve(rhs);
      dx = sol.head(n);
      ++res.newton_steps;

      const double primal = (prob.a * x - prob.b).lpNorm<Eigen::Infinity>();
      const double decrement = -grad.dot(dx);
      // grad + A^T w = -H dx at the Newton solution.
      Eigen::VectorXd hdx = Eigen::VectorXd::Zero(n);
      for (int k = 0; k < kkt.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator e(kkt, k); e; ++e)
          if (e.row() < n && e.col() < n) hdx[e.row()] += e.value() * dx[e.col()];
      res.kkt_residual = hdx.lpNorm<Eigen::Infinity>() / t;
      if (decrement * 0.5 <= opt.newton_tol && primal <= 1e-9) break;

      const double phi0 = barrier_value(prob, x, t);
      double s = 1.0;
      while (s > 1e-14 && !std::isfinite(barrier_value(prob, x + s * dx, t))) s *= 0.5;
      const double slope = grad.dot(dx);
      while (s > 1e-14 && barrier_value(prob, x + s * dx, t) > phi0 + 0.25 * s * std::min(slope, 0.0)) s *= 0.5;
      if (s <= 1e-14) break;
      x += s * dx;
    }
    res.objective = objective_value(prob, x);
    res.gap = m / t;
    if (res.gap <= opt.gap_rel * (1.0 + std::abs(res.objective))) {
      res.converged = true;
      break;
    }
    t *= opt.t_growth;
  }
  return res;
}

}  // namespace uavsc::detail

#pragma once

// Primal log-barrier method for convex programs whose objective and
// inequality constraints are sums of small dense quadratics over a few
// variables each, with linear equality constraints.

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace uavsc::detail {

/// 0.5 x_I^T P x_I + q^T x_I + r over the variable subset I.
struct LocalQuad {
  std::vector<int> idx;
  Eigen::MatrixXd p;
  Eigen::VectorXd q;
  double r = 0.0;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
};

struct QcqpProblem {
  int n = 0;
  std::vector<LocalQuad> objective;
  std::vector<LocalQuad> inequalities;  ///< each g(x) <= 0
  Eigen::SparseMatrix<double> a;
  Eigen::VectorXd b;
};

struct BarrierOptions {
  double t_growth = 20.0;
  double gap_rel = 1e-9;
  double newton_tol = 1e-10;
  int max_newton = 80;
};

struct BarrierResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  double gap = 0.0;           ///< m / t at exit
  double kkt_residual = 0.0;  ///< infinity norm of the centering residual
  int newton_steps = 0;
  bool converged = false;
};

/// `x0` must satisfy every inequality strictly; equality residuals of x0 are
/// removed by the first full Newton step.
BarrierResult solve_barrier(const QcqpProblem& prob, const Eigen::VectorXd& x0, const BarrierOptions& opt = {});

}  // namespace uavsc::detail

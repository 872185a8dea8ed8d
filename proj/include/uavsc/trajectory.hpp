#pragma once

#include <vector>

#include "uavsc/channel.hpp"
#include "uavsc/scenario.hpp"

namespace uavsc {

/// Per-slot UAV state; index n runs over 0..N.
struct TrajectoryPlan {
  std::vector<Vec2> pos, vel, acc;
  std::vector<double> mu_ba, mu_ca;  ///< slack distances (m^2)
  double altitude = 0.0;
  double dt = 0.0;

  int slots() const { return static_cast<int>(pos.size()) - 1; }
  Vec3 position(int n) const { return {pos[n].x(), pos[n].y(), altitude}; }
  std::vector<Vec3> positions() const;
};

/// Rate of one slot as a function of the squared horizontal distances.
///
/// Carlo active: a = q_b * rho_ba * lambda0, b = q_c * rho_ca * lambda0,
/// weighted SCP/CCP objective. Carlo silent (`h0`): SCP times `r_s`.
struct SlotRateModel {
  double a = 0.0, b = 0.0, r_s = 0.0;
  bool h0 = false;
};

struct RateGradient {
  double value = 0.0, d_ba = 0.0, d_ca = 0.0;
};

double rate_of_mu(double mu_ba, double mu_ca, const SlotRateModel& model, const ScenarioConfig& cfg);
RateGradient rate_gradient(double mu_ba, double mu_ca, const SlotRateModel& model, const ScenarioConfig& cfg);

/// Average rate over slots 1..N at the plan's true distances.
double plan_objective(const TrajectoryPlan& plan, const std::vector<SlotRateModel>& models,
                      const ScenarioConfig& cfg);

struct LinearizedObjective {
  std::vector<double> mu_ba, mu_ca;  ///< reference point
  std::vector<double> value, d_ba, d_ca;
  double constant = 0.0;  ///< average rate at the reference

  /// First-order model at the given slacks.
  double model(const std::vector<double>& mu_ba, const std::vector<double>& mu_ca) const;
};

LinearizedObjective linearize(const TrajectoryPlan& ref, const std::vector<SlotRateModel>& models,
                              const ScenarioConfig& cfg);

/// Straight line at constant speed, or a smooth speed profile when end
/// speeds are pinned. Throws InfeasibleTrajectory when the endpoints cannot
/// be joined in time.
TrajectoryPlan initial_plan(const ScenarioConfig& cfg);

struct SubproblemInfo {
  int newton_steps = 0;
  double gap = 0.0;
  double kkt_residual = 0.0;
  bool converged = false;
};

/// Maximizes the linearized objective over the convex flight envelope.
TrajectoryPlan solve_subproblem(const LinearizedObjective& lin, const TrajectoryPlan& ref, const ScenarioConfig& cfg,
                                SubproblemInfo* info = nullptr);

struct ScaResult {
  TrajectoryPlan plan;
  std::vector<double> objective;  ///< true objective after each accepted step, starting at plan0
  std::vector<double> step;       ///< accepted damping factor per step
  bool stationary = false;
};

ScaResult sca_trajectory(const TrajectoryPlan& plan0, const std::vector<SlotRateModel>& models,
                         const ScenarioConfig& cfg);

struct PlanCheck {
  double dynamics_residual = 0.0;  ///< max position/velocity residual (m, m/s)
  double endpoint_error = 0.0;
  double max_speed = 0.0, min_speed = 0.0, max_accel = 0.0;
  double slack_gap = 0.0;  ///< max relative |mu - distance^2|
  double slack_violation = 0.0;  ///< max of distance^2 - mu
};

PlanCheck check_plan(const TrajectoryPlan& plan, const ScenarioConfig& cfg);

}  // namespace uavsc

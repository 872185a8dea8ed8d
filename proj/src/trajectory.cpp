#include "uavsc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "barrier_solver.hpp"
#include "uavsc/errors.hpp"
#include "uavsc/units.hpp"

namespace uavsc {

using detail::LocalQuad;

std::vector<Vec3> TrajectoryPlan::positions() const {
  std::vector<Vec3> out;
  out.reserve(pos.size());
  for (int n = 0; n <= slots(); ++n) out.push_back(position(n));
  return out;
}

RateGradient rate_gradient(double mu_ba, double mu_ca, const SlotRateModel& m, const ScenarioConfig& cfg) {
  RateGradient r;
  const double h2 = cfg.altitude * cfg.altitude;
  const double d_b = h2 + mu_ba, d_c = h2 + mu_ca;
  const double s2 = cfg.sigma2_a;
  const double g = units::snr_threshold(cfg.r_t);

  if (m.h0) {
    if (!(m.a > 0.0)) return r;
    r.value = std::exp(-g * s2 * d_b / m.a) * m.r_s;
    r.d_ba = -(g * s2 / m.a) * r.value;
    return r;
  }
  if (!(m.b > 0.0)) {
    r.value = m.a / d_b > g * s2 ? cfg.kappa * m.r_s : 0.0;
    return r;
  }
  const double num = m.a / d_b - g * s2;
  if (num <= 0.0) return r;
  const double gc = units::snr_threshold(cfg.r_c);
  const double x = num * d_c / (g * m.b);
  const double ex = std::exp(-x);
  const double scp = -std::expm1(-x);
  const double c = std::exp(-gc * s2 * d_c / m.b);
  const double w = cfg.kappa * m.r_s + (1.0 - cfg.kappa) * cfg.r_c * c;
  r.value = scp * w;
  const double dx_dba = -m.a * d_c / (g * m.b * d_b * d_b);
  const double dx_dca = num / (g * m.b);
  r.d_ba = ex * dx_dba * w;
  r.d_ca = ex * dx_dca * w - scp * (1.0 - cfg.kappa) * cfg.r_c * (gc * s2 / m.b) * c;
  return r;
}

double rate_of_mu(double mu_ba, double mu_ca, const SlotRateModel& model, const ScenarioConfig& cfg) {
  return rate_gradient(mu_ba, mu_ca, model, cfg).value;
}

double plan_objective(const TrajectoryPlan& plan, const std::vector<SlotRateModel>& models,
                      const ScenarioConfig& cfg) {
  const int n_slots = plan.slots();
  double s = 0.0;
  for (int n = 1; n <= n_slots; ++n) {
    const Vec3 p = plan.position(n);
    s += rate_of_mu(horizontal_sq(cfg, p, User::bob), horizontal_sq(cfg, p, User::carlo), models[n], cfg);
  }
  return s / n_slots;
}

double LinearizedObjective::model(const std::vector<double>& mb, const std::vector<double>& mc) const {
  const std::size_t n_slots = value.size() - 1;
  double s = 0.0;
  for (std::size_t n = 1; n <= n_slots; ++n)
    s += value[n] + d_ba[n] * (mb[n] - mu_ba[n]) + d_ca[n] * (mc[n] - mu_ca[n]);
  return s / static_cast<double>(n_slots);
}

LinearizedObjective linearize(const TrajectoryPlan& ref, const std::vector<SlotRateModel>& models,
                              const ScenarioConfig& cfg) {
  LinearizedObjective lin;
  const int n_slots = ref.slots();
  for (int n = 0; n <= n_slots; ++n) {
    const Vec3 p = ref.position(n);
    const double mb = horizontal_sq(cfg, p, User::bob), mc = horizontal_sq(cfg, p, User::carlo);
    const RateGradient g = rate_gradient(mb, mc, models[n], cfg);
    lin.mu_ba.push_back(mb);
    lin.mu_ca.push_back(mc);
    lin.value.push_back(g.value);
    lin.d_ba.push_back(g.d_ba);
    lin.d_ca.push_back(g.d_ca);
    if (n > 0) lin.constant += g.value;
  }
  lin.constant /= n_slots;
  return lin;
}

TrajectoryPlan initial_plan(const ScenarioConfig& cfg) {
  const int n_slots = cfg.n_slots;
  const double dt = cfg.slot_duration();
  const Vec2 p0 = cfg.uav_start.head<2>(), p1 = cfg.uav_end.head<2>();
  const double dist = (p1 - p0).norm();
  const double min_period = dist / cfg.v_max;
  const bool pinned = cfg.v_start || cfg.v_end;

  if (!pinned && dist / cfg.period > cfg.v_max)
    throw InfeasibleTrajectory("trajectory infeasible: endpoints need at least " + std::to_string(min_period) +
                                   " s at v_max",
                               min_period);
  if (!(dist > 0.0)) throw OptimizationError("coincident endpoints: a straight initial path does not exist");

  const Vec2 dir = (p1 - p0) / dist;
  std::vector<double> speed(n_slots + 1);
  if (!pinned) {
    std::fill(speed.begin(), speed.end(), dist / cfg.period);
  } else {
    // Linear blend between the pinned speeds plus a sine bump sized so the
    // trapezoidal distance equals the endpoint separation exactly.
    const double s0 = cfg.v_start.value_or(dist / cfg.period);
    const double s1 = cfg.v_end.value_or(dist / cfg.period);
    double bump = 0.0;
    for (int n = 0; n <= n_slots; ++n) bump += std::sin(std::numbers::pi * n / n_slots);
    bump *= dt;
    const double c = (dist - 0.5 * (s0 + s1) * cfg.period) / bump;
    for (int n = 0; n <= n_slots; ++n)
      speed[n] = s0 + (s1 - s0) * n / n_slots + c * std::sin(std::numbers::pi * n / n_slots);
  }
  for (int n = 0; n <= n_slots; ++n) {
    const bool pin = (n == 0 && cfg.v_start) || (n == n_slots && cfg.v_end);
    const bool ok = pin ? speed[n] >= cfg.v_min && speed[n] <= cfg.v_max
                        : speed[n] > cfg.v_min && speed[n] < cfg.v_max;
    if (!ok) {
      if (speed[n] >= cfg.v_max || dist / cfg.period >= cfg.v_max)
        throw InfeasibleTrajectory("trajectory infeasible: endpoints need at least " + std::to_string(min_period) +
                                       " s at v_max",
                                   min_period);
      throw OptimizationError("initial speed profile leaves (v_min, v_max) at slot " + std::to_string(n));
    }
    if (n > 0 && std::abs(speed[n] - speed[n - 1]) / dt >= cfg.a_max)
      throw InfeasibleTrajectory("trajectory infeasible: pinned speeds need more than a_max", min_period);
  }

  TrajectoryPlan plan;
  plan.altitude = cfg.altitude;
  plan.dt = dt;
  plan.pos.resize(n_slots + 1);
  plan.vel.resize(n_slots + 1);
  plan.acc.resize(n_slots + 1);
  plan.pos[0] = p0;
  plan.vel[0] = speed[0] * dir;
  plan.acc[0] = Vec2::Zero();
  double travelled = 0.0;
  for (int n = 1; n <= n_slots; ++n) {
    plan.vel[n] = speed[n] * dir;
    plan.acc[n] = (plan.vel[n] - plan.vel[n - 1]) / dt;
    travelled += 0.5 * (speed[n - 1] + speed[n]) * dt;
    plan.pos[n] = p0 + travelled * dir;
  }
  plan.pos[n_slots] = p1;
  for (int n = 0; n <= n_slots; ++n) {
    const Vec3 p = plan.position(n);
    plan.mu_ba.push_back(horizontal_sq(cfg, p, User::bob));
    plan.mu_ca.push_back(horizontal_sq(cfg, p, User::carlo));
  }
  return plan;
}

namespace {

LocalQuad quad(std::vector<int> idx, Eigen::MatrixXd p, Eigen::VectorXd q, double r) {
  return {std::move(idx), std::move(p), std::move(q), r};
}

Eigen::MatrixXd diag2(double v) { return v * Eigen::MatrixXd::Identity(2, 2); }

}  // namespace

TrajectoryPlan solve_subproblem(const LinearizedObjective& lin, const TrajectoryPlan& ref, const ScenarioConfig& cfg,
                                SubproblemInfo* info) {
  const int n_slots = ref.slots();
  const double dt = ref.dt;
  const auto lx = [](int n) { return 6 * n; };
  const auto vx = [](int n) { return 6 * n + 2; };
  const auto ax = [](int n) { return 6 * n + 4; };

  detail::QcqpProblem prob;
  int n_var = 6 * (n_slots + 1);
  Eigen::VectorXd x0(n_var + 2 * (n_slots + 1));
  for (int n = 0; n <= n_slots; ++n) {
    x0.segment<2>(lx(n)) = ref.pos[n];
    x0.segment<2>(vx(n)) = ref.vel[n];
    x0.segment<2>(ax(n)) = ref.acc[n];
  }

  // Slack variables where the rate falls with distance; elsewhere the convex
  // squared distance is replaced by its tangent plane, a lower bound.
  std::vector<int> slack_ba(n_slots + 1, -1), slack_ca(n_slots + 1, -1);
  const double inv_n = 1.0 / n_slots;
  const double h2 = cfg.altitude * cfg.altitude;
  for (int n = 1; n < n_slots; ++n) {
    for (int u = 0; u < 2; ++u) {
      const double d = u == 0 ? lin.d_ba[n] : lin.d_ca[n];
      const Vec2& target = u == 0 ? cfg.bob : cfg.carlo;
      const Vec2 off = ref.pos[n] - target;
      if (d < 0.0) {
        const int k = n_var++;
        (u == 0 ? slack_ba : slack_ca)[n] = k;
        x0[k] = off.squaredNorm() + 1e-6 * (h2 + off.squaredNorm());
        prob.objective.push_back(quad({k}, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, -d * inv_n), 0.0));
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
        p(0, 0) = p(1, 1) = 2.0;
        Eigen::VectorXd q(3);
        q << -2.0 * target.x(), -2.0 * target.y(), -1.0;
        prob.inequalities.push_back(quad({lx(n), lx(n) + 1, k}, p, q, target.squaredNorm()));
      } else if (d > 0.0) {
        prob.objective.push_back(
            quad({lx(n), lx(n) + 1}, Eigen::MatrixXd::Zero(2, 2), -d * inv_n * 2.0 * off, 0.0));
      }
    }
  }
  prob.n = n_var;
  x0.conservativeResize(n_var);

  const double vmax2 = cfg.v_max * cfg.v_max, vmin2 = cfg.v_min * cfg.v_min, amax2 = cfg.a_max * cfg.a_max;
  for (int n = 0; n <= n_slots; ++n) {
    const bool pin = (n == 0 && cfg.v_start) || (n == n_slots && cfg.v_end);
    if (!pin) {
      prob.inequalities.push_back(quad({vx(n), vx(n) + 1}, diag2(2.0), Eigen::VectorXd::Zero(2), -vmax2));
      const Vec2& vr = ref.vel[n];
      prob.inequalities.push_back(
          quad({vx(n), vx(n) + 1}, Eigen::MatrixXd::Zero(2, 2), -2.0 * vr, vmin2 + vr.squaredNorm()));
    }
    if (n > 0) prob.inequalities.push_back(quad({ax(n), ax(n) + 1}, diag2(2.0), Eigen::VectorXd::Zero(2), -amax2));
  }

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> rhs;
  int row = 0;
  auto fix = [&](int var, double value) {
    trip.emplace_back(row++, var, 1.0);
    rhs.push_back(value);
  };
  fix(lx(0), cfg.uav_start.x());
  fix(lx(0) + 1, cfg.uav_start.y());
  fix(lx(n_slots), cfg.uav_end.x());
  fix(lx(n_slots) + 1, cfg.uav_end.y());
  fix(ax(0), 0.0);
  fix(ax(0) + 1, 0.0);
  for (int n = 1; n <= n_slots; ++n) {
    for (int c = 0; c < 2; ++c) {
      trip.emplace_back(row, lx(n) + c, 1.0);
      trip.emplace_back(row, lx(n - 1) + c, -1.0);
      trip.emplace_back(row, vx(n - 1) + c, -dt);
      trip.emplace_back(row, ax(n) + c, -0.5 * dt * dt);
      rhs.push_back(0.0);
      ++row;
      trip.emplace_back(row, vx(n) + c, 1.0);
      trip.emplace_back(row, vx(n - 1) + c, -1.0);
      trip.emplace_back(row, ax(n) + c, -dt);
      rhs.push_back(0.0);
      ++row;
    }
  }
  const Vec2 heading = (cfg.uav_end.head<2>() - cfg.uav_start.head<2>()).normalized();
  if (cfg.v_start) {
    fix(vx(0), *cfg.v_start * heading.x());
    fix(vx(0) + 1, *cfg.v_start * heading.y());
  }
  if (cfg.v_end) {
    fix(vx(n_slots), *cfg.v_end * heading.x());
    fix(vx(n_slots) + 1, *cfg.v_end * heading.y());
  }
  prob.a.resize(row, n_var);
  prob.a.setFromTriplets(trip.begin(), trip.end());
  prob.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), row);

  const auto res = detail::solve_barrier(prob, x0);
  if (info) *info = {res.newton_steps, res.gap, res.kkt_residual, res.converged};

  TrajectoryPlan out;
  out.altitude = ref.altitude;
  out.dt = dt;
  for (int n = 0; n <= n_slots; ++n) {
    out.pos.push_back(res.x.segment<2>(lx(n)));
    out.vel.push_back(res.x.segment<2>(vx(n)));
    out.acc.push_back(res.x.segment<2>(ax(n)));
    const Vec3 p = out.position(n);
    out.mu_ba.push_back(slack_ba[n] >= 0 ? res.x[slack_ba[n]] : horizontal_sq(cfg, p, User::bob));
    out.mu_ca.push_back(slack_ca[n] >= 0 ? res.x[slack_ca[n]] : horizontal_sq(cfg, p, User::carlo));
  }
  return out;
}

namespace {

// A damped step is not a subproblem solution, so its slacks are reset to the
// smallest feasible value.
TrajectoryPlan blend(const TrajectoryPlan& a, const TrajectoryPlan& b, double alpha, const ScenarioConfig& cfg) {
  if (alpha == 1.0) return b;
  TrajectoryPlan out = a;
  for (std::size_t n = 0; n < a.pos.size(); ++n) {
    out.pos[n] = a.pos[n] + alpha * (b.pos[n] - a.pos[n]);
    out.vel[n] = a.vel[n] + alpha * (b.vel[n] - a.vel[n]);
    out.acc[n] = a.acc[n] + alpha * (b.acc[n] - a.acc[n]);
    const Vec3 p = out.position(static_cast<int>(n));
    out.mu_ba[n] = horizontal_sq(cfg, p, User::bob);
    out.mu_ca[n] = horizontal_sq(cfg, p, User::carlo);
  }
  return out;
}

}  // namespace

ScaResult sca_trajectory(const TrajectoryPlan& plan0, const std::vector<SlotRateModel>& models,
                         const ScenarioConfig& cfg) {
  if (cfg.xi_ba != -2.0) throw ConfigError("xi_ba", "trajectory optimization needs an exponent of -2");
  if (cfg.xi_ca != -2.0) throw ConfigError("xi_ca", "trajectory optimization needs an exponent of -2");

  ScaResult res;
  res.plan = plan0;
  double obj = plan_objective(plan0, models, cfg);
  res.objective.push_back(obj);
  for (int it = 0; it < cfg.max_sca_iterations; ++it) {
    const LinearizedObjective lin = linearize(res.plan, models, cfg);
    const TrajectoryPlan cand = solve_subproblem(lin, res.plan, cfg);
    double alpha = 1.0;
    TrajectoryPlan trial;
    double val = 0.0;
    for (;;) {
      trial = blend(res.plan, cand, alpha, cfg);
      val = plan_objective(trial, models, cfg);
      if (val > obj) break;
      alpha *= 0.5;
      if (alpha < 0x1.0p-20) {
        res.stationary = true;
        return res;
      }
    }
    const double gain = val - obj;
    res.plan = std::move(trial);
    obj = val;
    res.objective.push_back(obj);
    res.step.push_back(alpha);
    if (gain < cfg.bcd_tol) break;
  }
  return res;
}

PlanCheck check_plan(const TrajectoryPlan& plan, const ScenarioConfig& cfg) {
  PlanCheck c;
  const int n_slots = plan.slots();
  const double dt = plan.dt;
  c.endpoint_error = std::max((plan.pos[0] - cfg.uav_start.head<2>()).norm(),
                              (plan.pos[n_slots] - cfg.uav_end.head<2>()).norm());
  c.min_speed = INFINITY;
  for (int n = 0; n <= n_slots; ++n) {
    const double s = plan.vel[n].norm();
    c.max_speed = std::max(c.max_speed, s);
    c.min_speed = std::min(c.min_speed, s);
    if (n > 0) {
      c.max_accel = std::max(c.max_accel, plan.acc[n].norm());
      const Vec2 rp = plan.pos[n] - plan.pos[n - 1] - plan.vel[n - 1] * dt - 0.5 * plan.acc[n] * dt * dt;
      const Vec2 rv = plan.vel[n] - plan.vel[n - 1] - plan.acc[n] * dt;
      c.dynamics_residual = std::max({c.dynamics_residual, rp.norm(), rv.norm()});
    }
    const Vec3 p = plan.position(n);
    for (auto [mu, user] : {std::pair{plan.mu_ba[n], User::bob}, std::pair{plan.mu_ca[n], User::carlo}}) {
      const double d2 = horizontal_sq(cfg, p, user);
      c.slack_gap = std::max(c.slack_gap, std::abs(mu - d2) / std::max(d2, 1.0));
      c.slack_violation = std::max(c.slack_violation, d2 - mu);
    }
  }
  return c;
}

}  // namespace uavsc

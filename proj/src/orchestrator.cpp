#include "uavsc/orchestrator.hpp"

#include <chrono>
#include <cmath>

#include "uavsc/errors.hpp"

namespace uavsc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<BeamformDecision> design_beams(const ScenarioConfig& cfg, const TrajectoryPlan& plan, RunMode mode,
                                           const std::vector<BeamformDecision>* prev) {
  const ChannelGains gains = compute_gains(cfg, plan.positions());
  std::vector<BeamformDecision> out;
  out.reserve(gains.slots());
  for (std::size_t n = 0; n < gains.slots(); ++n) {
    const SlotChannel ch = slot_channel(cfg, gains, n);
    if (mode == RunMode::sotfb) {
      out.push_back(fixed_decision(cfg, ch));
      continue;
    }
    BeamformDecision d = choose_directions(cfg, ch);
    if (prev) {
      // Keep the previous decision unless the new one is at least as good here.
      BeamformDecision old = evaluate_decision(cfg, ch, (*prev)[n].q_c, (*prev)[n].theta, BeamPolicy::jotb);
      if (old.rate > d.rate) d = std::move(old);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<BeamformDecision> reevaluate(const ScenarioConfig& cfg, const TrajectoryPlan& plan, RunMode mode,
                                         const std::vector<BeamformDecision>& decisions) {
  const ChannelGains gains = compute_gains(cfg, plan.positions());
  const BeamPolicy policy = mode == RunMode::sotfb ? BeamPolicy::sotfb : BeamPolicy::jotb;
  std::vector<BeamformDecision> out;
  out.reserve(gains.slots());
  for (std::size_t n = 0; n < gains.slots(); ++n)
    out.push_back(evaluate_decision(cfg, slot_channel(cfg, gains, n), decisions[n].q_c, decisions[n].theta, policy));
  return out;
}

std::vector<H0Decision> design_h0(const ScenarioConfig& cfg, const TrajectoryPlan& plan,
                                  const std::vector<H0Decision>* prev) {
  const ChannelGains gains = compute_gains(cfg, plan.positions());
  std::vector<H0Decision> out;
  for (std::size_t n = 0; n < gains.slots(); ++n) {
    const SlotChannel ch = slot_channel(cfg, gains, n);
    H0Decision d = design_h0_slot(cfg, ch);
    if (prev) {
      H0Decision old = evaluate_h0(cfg, ch, (*prev)[n].q_b);
      if (old.rate > d.rate) d = old;
    }
    out.push_back(d);
  }
  return out;
}

std::vector<H0Decision> reevaluate_h0(const ScenarioConfig& cfg, const TrajectoryPlan& plan,
                                      const std::vector<H0Decision>& decisions) {
  const ChannelGains gains = compute_gains(cfg, plan.positions());
  std::vector<H0Decision> out;
  for (std::size_t n = 0; n < gains.slots(); ++n)
    out.push_back(evaluate_h0(cfg, slot_channel(cfg, gains, n), decisions[n].q_b));
  return out;
}

}  // namespace

const char* mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::jotb: return "jotb";
    case RunMode::sotfb: return "sotfb";
    case RunMode::h0: return "h0";
  }
  return "?";
}

double average_rate(const std::vector<BeamformDecision>& d) {
  double s = 0.0;
  for (std::size_t n = 1; n < d.size(); ++n) s += d[n].rate;
  return s / static_cast<double>(d.size() - 1);
}

double average_rate(const std::vector<H0Decision>& d) {
  double s = 0.0;
  for (std::size_t n = 1; n < d.size(); ++n) s += d[n].rate;
  return s / static_cast<double>(d.size() - 1);
}

double BcdTrace::secret_rate(const ScenarioConfig&) const {
  double s = 0.0;
  std::size_t count = 0;
  if (mode == RunMode::h0) {
    for (std::size_t n = 1; n < h0_decisions.size(); ++n, ++count) s += h0_decisions[n].scp0 * h0_decisions[n].r_s;
  } else {
    for (std::size_t n = 1; n < decisions.size(); ++n, ++count) s += decisions[n].scp1 * decisions[n].r_s;
  }
  return count ? s / count : 0.0;
}

double BcdTrace::covert_rate(const ScenarioConfig& cfg) const {
  if (mode == RunMode::h0) return 0.0;
  double s = 0.0;
  for (std::size_t n = 1; n < decisions.size(); ++n) s += decisions[n].ccp * cfg.r_c;
  return decisions.size() > 1 ? s / (decisions.size() - 1) : 0.0;
}

std::vector<SlotRateModel> rate_models(const ScenarioConfig& cfg, const std::vector<BeamformDecision>& decisions) {
  std::vector<SlotRateModel> m;
  m.reserve(decisions.size());
  for (const auto& d : decisions)
    m.push_back({d.q_b * d.rho.ba * cfg.lambda0, d.q_c * d.rho.ca * cfg.lambda0, d.r_s, false});
  return m;
}

std::vector<SlotRateModel> rate_models(const ScenarioConfig& cfg, const std::vector<H0Decision>& decisions) {
  std::vector<SlotRateModel> m;
  m.reserve(decisions.size());
  for (const auto& d : decisions) m.push_back({d.q_b * d.rho_ba * cfg.lambda0, 0.0, d.r_s, true});
  return m;
}

BcdTrace run_bcd(const ScenarioConfig& cfg, RunMode mode) {
  if (mode == RunMode::h0) return run_h0_benchmark(cfg);
  const auto t0 = Clock::now();
  BcdTrace tr;
  tr.mode = mode;
  tr.plan = initial_plan(cfg);
  try {
    tr.decisions = design_beams(cfg, tr.plan, mode, nullptr);
    tr.objective.push_back(average_rate(tr.decisions));
    tr.wall_s.push_back(seconds_since(t0));
    for (int k = 1; k <= cfg.max_bcd_iterations; ++k) {
      if (k > 1) tr.decisions = design_beams(cfg, tr.plan, mode, &tr.decisions);
      const ScaResult sca = sca_trajectory(tr.plan, rate_models(cfg, tr.decisions), cfg);
      tr.plan = sca.plan;
      tr.decisions = reevaluate(cfg, tr.plan, mode, tr.decisions);
      tr.sca_objective.push_back(sca.objective);
      tr.objective.push_back(average_rate(tr.decisions));
      tr.wall_s.push_back(seconds_since(t0));
      tr.iterations = k;
      if (std::abs(tr.objective[k] - tr.objective[k - 1]) < cfg.bcd_tol) {
        tr.converged = true;
        break;
      }
    }
  } catch (const OptimizationError& e) {
    tr.error = e.what();
  }
  return tr;
}

BcdTrace run_h0_benchmark(const ScenarioConfig& cfg) {
  const auto t0 = Clock::now();
  BcdTrace tr;
  tr.mode = RunMode::h0;
  tr.plan = initial_plan(cfg);
  try {
    tr.h0_decisions = design_h0(cfg, tr.plan, nullptr);
    tr.objective.push_back(average_rate(tr.h0_decisions));
    tr.wall_s.push_back(seconds_since(t0));
    for (int k = 1; k <= cfg.max_bcd_iterations; ++k) {
      if (k > 1) tr.h0_decisions = design_h0(cfg, tr.plan, &tr.h0_decisions);
      const ScaResult sca = sca_trajectory(tr.plan, rate_models(cfg, tr.h0_decisions), cfg);
      tr.plan = sca.plan;
      tr.h0_decisions = reevaluate_h0(cfg, tr.plan, tr.h0_decisions);
      tr.sca_objective.push_back(sca.objective);
      tr.objective.push_back(average_rate(tr.h0_decisions));
      tr.wall_s.push_back(seconds_since(t0));
      tr.iterations = k;
      if (std::abs(tr.objective[k] - tr.objective[k - 1]) < cfg.bcd_tol) {
        tr.converged = true;
        break;
      }
    }
  } catch (const OptimizationError& e) {
    tr.error = e.what();
  }
  return tr;
}

std::vector<ParetoRow> pareto_sweep(const ScenarioConfig& cfg, const std::vector<double>& kappas) {
  std::vector<ParetoRow> rows;
  for (double k : kappas) {
    ParetoRow row;
    row.kappa = k;
    try {
      ScenarioConfig c = cfg;
      c.kappa = k;
      validate(c);
      const BcdTrace tr = run_bcd(c, RunMode::jotb);
      row.phi_s = tr.secret_rate(c);
      row.phi_c = tr.covert_rate(c);
      row.objective = tr.final_objective();
      row.iterations = tr.iterations;
      row.error = tr.error;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::size_t> dominated_rows(const std::vector<ParetoRow>& rows, double tie_tol) {
  auto close = [&](double a, double b) { return std::abs(a - b) <= tie_tol * std::max(1.0, std::abs(a)); };
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error) continue;
    bool tie = false;
    for (std::size_t j : kept) tie = tie || (close(rows[i].phi_s, rows[j].phi_s) && close(rows[i].phi_c, rows[j].phi_c));
    if (!tie) kept.push_back(i);
  }
  std::vector<std::size_t> out;
  for (std::size_t i : kept)
    for (std::size_t j : kept)
      if (j != i && rows[j].phi_s > rows[i].phi_s && rows[j].phi_c > rows[i].phi_c &&
          !close(rows[j].phi_s, rows[i].phi_s) && !close(rows[j].phi_c, rows[i].phi_c)) {
        out.push_back(i);
        break;
      }
  return out;
}

SotfbComparison compare_sotfb(const ScenarioConfig& cfg) {
  return {run_bcd(cfg, RunMode::jotb), run_bcd(cfg, RunMode::sotfb)};
}

}  // namespace uavsc

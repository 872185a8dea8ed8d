#include "uavsc/validation.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "uavsc/beamform.hpp"
#include "uavsc/channel.hpp"
#include "uavsc/secmetrics.hpp"
#include "uavsc/trajectory.hpp"

namespace uavsc {
namespace {

double uniform(Philox4x32& rng, double a, double b) { return a + (b - a) * rng.uniform(); }

}  // namespace

MetricCase random_metric_case(Philox4x32& rng) {
  // Powers are placed so every probability lands in roughly [0.1, 0.9],
  // where a binomial comparison is informative.
  MetricCase c;
  c.sigma2 = std::pow(10.0, uniform(rng, -13.0, -11.0));
  c.r_t = uniform(rng, 0.5, 8.0);
  c.r_w = uniform(rng, 0.5, 8.0);
  const int ants[] = {1, 2, 4};
  c.n_ant = ants[static_cast<int>(rng.uniform() * 3.0) % 3];
  const double gt = std::pow(2.0, c.r_t) - 1.0, gw = std::pow(2.0, c.r_w) - 1.0;
  c.p_ba = gt * c.sigma2 * uniform(rng, 1.5, 20.0);
  c.p_ca = (c.p_ba - gt * c.sigma2) / (gt * uniform(rng, 0.1, 2.3));
  c.p_bw = gw * c.sigma2 * uniform(rng, 1.5, 20.0);
  c.p_cw = (c.p_bw - gw * c.sigma2) / (gw * uniform(rng, 0.1, 2.3));
  // Covert decoding factor exp(-(2^Rc - 1) sigma2 / p_ca) kept moderate.
  c.r_c = std::log2(1.0 + uniform(rng, 0.05, 1.5) * c.p_ca / c.sigma2);
  return c;
}

std::vector<McComparison> compare_metrics(const MetricCase& c, long n, std::uint64_t seed) {
  std::vector<McComparison> out;
  out.push_back({"scp0", scp_h0(c.p_ba, c.sigma2, c.r_t), mc_scp_h0(c.p_ba, c.sigma2, c.r_t, c.n_ant, n, seed), seed});
  out.push_back({"scp1", scp_h1(c.p_ba, c.p_ca, c.sigma2, c.r_t),
                 mc_scp_h1(c.p_ba, c.p_ca, c.sigma2, c.r_t, c.n_ant, n, seed), seed});
  out.push_back({"sop0", sop_h0(c.p_bw, c.sigma2, c.r_w), mc_sop_h0(c.p_bw, c.sigma2, c.r_w, c.n_ant, n, seed), seed});
  out.push_back({"sop1", sop_h1(c.p_bw, c.p_cw, c.sigma2, c.r_w),
                 mc_sop_h1(c.p_bw, c.p_cw, c.sigma2, c.r_w, c.n_ant, n, seed), seed});
  out.push_back({"ccp", ccp(c.p_ba, c.p_ca, c.sigma2, c.r_t, c.r_c),
                 mc_ccp(c.p_ba, c.p_ca, c.sigma2, c.r_t, c.r_c, c.n_ant, n, seed), seed});
  return out;
}

bool ValidationReport::ok() const { return failures() == 0; }

int ValidationReport::failures() const {
  int f = 0;
  for (const auto& c : checks) f += !c.pass;
  return f;
}

ValidationReport run_validation(const ScenarioConfig& cfg, std::uint64_t seed, long samples, long dep_trials) {
  ValidationReport rep;

  {
    Philox4x32 rng(seed, 0);
    std::map<std::string, int> agree;
    constexpr int kCases = 20;
    for (int i = 0; i < kCases; ++i) {
      const MetricCase c = random_metric_case(rng);
      for (auto& row : compare_metrics(c, samples, worker_seed(seed, 1000 + i))) {
        agree[row.metric] += row.mc.covers(row.closed_form);
        rep.rows.push_back(row);
      }
    }
    for (const auto& [metric, count] : agree)
      rep.checks.push_back({"mc_agreement_" + metric, count >= 18,
                            std::to_string(count) + "/" + std::to_string(kCases) + " within 95% CI"});
  }

  {
    struct Point {
      int m;
      double s0, s1;
    };
    for (const Point pt : {Point{1, 1.0, 2.0}, Point{10, 1.0, 1.3}, Point{100, 1.0, 1.1}}) {
      DetectionStats st;
      st.sigma0 = pt.s0;
      st.sigma1 = pt.s1;
      st.m = pt.m;
      st.q_th = optimal_threshold(pt.s0, pt.s1);
      const DepResult closed = dep(st, st.q_th);
      const std::uint64_t s = worker_seed(seed, 2000 + pt.m);
      const McDep mc = mc_dep(pt.s0, pt.s1, st.q_th, pt.m, dep_trials, s);
      std::ostringstream d;
      d << "closed " << closed.p_e << " mc " << mc.p_e.p << " +- " << mc.p_e.ci;
      rep.checks.push_back({"radiometer_dep_m" + std::to_string(pt.m), mc.p_e.covers(closed.p_e), d.str()});
      rep.rows.push_back({"p_e_m" + std::to_string(pt.m), closed.p_e, mc.p_e, s});
    }
  }

  {
    Philox4x32 rng(seed, 7);
    int violations = 0;
    for (int i = 0; i < 50; ++i) {
      DetectionStats st;
      st.sigma0 = std::pow(10.0, uniform(rng, -13.0, -9.0));
      st.sigma1 = st.sigma0 * (1.0 + std::pow(10.0, uniform(rng, -3.0, 0.5)));
      st.m = 1 + static_cast<int>(rng.uniform() * 200.0);
      st.q_th = optimal_threshold(st.sigma0, st.sigma1);
      const double best = dep(st, st.q_th).p_e;
      const double lo = std::log(0.01 * st.sigma0), hi = std::log(100.0 * st.sigma1);
      for (int k = 0; k < 1000; ++k) violations += dep(st, std::exp(lo + (hi - lo) * k / 999.0)).p_e < best - 1e-12;
    }
    rep.checks.push_back({"threshold_optimality", violations == 0, std::to_string(violations) + " violations"});
  }

  {
    const TrajectoryPlan plan = initial_plan(cfg);
    const ChannelGains gains = compute_gains(cfg, plan.positions());
    double worst = 0.0, worst_pe = 0.0;
    for (std::size_t n = 0; n < gains.slots(); ++n) {
      const SlotChannel ch = slot_channel(cfg, gains, n);
      const BeamformDecision d = choose_directions(cfg, ch);
      const SlotEval e = evaluate_slot(cfg, slot_links(cfg, ch, d.theta, BeamPolicy::jotb), d.q_c);
      const auto st = detection_stats(e.powers.p_bw0, e.powers.p_bw, e.powers.p_cw, cfg.sigma2_w, cfg.block_length);
      worst = std::max(worst, std::abs(st.sigma1 - st.sigma0) / st.sigma0);
      for (double f : {0.5, 1.0, 2.0}) worst_pe = std::max(worst_pe, std::abs(1.0 - dep(st, f * st.sigma0).p_e));
    }
    std::ostringstream d;
    d << "max relative variance gap " << worst << ", max |1 - P_e| " << worst_pe;
    rep.checks.push_back({"perfect_covertness", worst <= 1e-9 && worst_pe <= 1e-12, d.str()});
  }

  {
    const TrajectoryPlan plan = initial_plan(cfg);
    const double a2 = large_scale_air(cfg, plan.position(0), User::bob);
    rep.rician = mc_rician_gap(cfg, {0.0, 1.0, cfg.k_ba, 10.0, 100.0}, cfg.q_b_max, a2, samples,
                               worker_seed(seed, 3000));
    const auto& r0 = rep.rician.front();
    std::ostringstream d;
    d << "K=0 gap " << r0.gap << " (CI " << r0.mc.ci << ")";
    rep.checks.push_back({"rician_gap_k0", r0.mc.covers(r0.closed_form), d.str()});
  }
  return rep;
}

}  // namespace uavsc

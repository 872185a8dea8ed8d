// End-to-end acceptance checks. One line per criterion; exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "uavsc/beamform.hpp"
#include "uavsc/channel.hpp"
#include "uavsc/mc_oracle.hpp"
#include "uavsc/orchestrator.hpp"
#include "uavsc/rng.hpp"
#include "uavsc/scenario.hpp"
#include "uavsc/secmetrics.hpp"
#include "uavsc/trajectory.hpp"
#include "uavsc/units.hpp"
#include "uavsc/validation.hpp"

using namespace uavsc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... T>
std::string fmt(T&&... parts) {
  std::ostringstream s;
  s.precision(6);
  (s << ... << parts);
  return s.str();
}

ScenarioConfig canonical() { return load_scenario_file("paper_default"); }

// Fixed a priori; never tuned.
constexpr std::uint64_t kSeed = 20240601;

Outcome c1_closed_vs_mc() {
  Philox4x32 rng(kSeed, 0);
  int agree[5] = {0, 0, 0, 0, 0};
  std::string names[5];
  for (int i = 0; i < 20; ++i) {
    const MetricCase c = random_metric_case(rng);
    const auto rows = compare_metrics(c, 100000, worker_seed(kSeed, 1000 + i));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      names[k] = rows[k].metric;
      agree[k] += rows[k].mc.covers(rows[k].closed_form);
    }
  }
  bool ok = true;
  std::string d;
  for (int k = 0; k < 5; ++k) {
    ok = ok && agree[k] >= 18;
    d += fmt(names[k], "=", agree[k], "/20 ");
  }
  return {ok, d};
}

Outcome c2_dep_vs_radiometer() {
  bool ok = true;
  std::string d;
  const double exact_q = 2.0 * std::log(2.0);
  DetectionStats st{1.0, 2.0, exact_q, 1};
  const double p_exact = dep(st, exact_q).p_e;
  ok = ok && std::abs(p_exact - 0.75) <= 1e-12 && std::abs(optimal_threshold(1.0, 2.0) - exact_q) <= 1e-12;
  d += fmt("P_e(m=1, 2ln2)=", p_exact, " ");
  struct Pt {
    int m;
    double s1;
  };
  for (const Pt pt : {Pt{1, 2.0}, Pt{10, 1.3}, Pt{100, 1.1}}) {
    const double q = optimal_threshold(1.0, pt.s1);
    const DetectionStats s{1.0, pt.s1, q, pt.m};
    const double closed = dep(s, q).p_e;
    const McDep mc = mc_dep(1.0, pt.s1, q, pt.m, 100000, worker_seed(kSeed, 2000 + pt.m));
    ok = ok && mc.p_e.covers(closed);
    d += fmt("m=", pt.m, " |diff|=", std::abs(closed - mc.p_e.p), " ci=", mc.p_e.ci, " ");
  }
  return {ok, d};
}

Outcome c3_threshold_optimality() {
  Philox4x32 rng(kSeed, 3);
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    DetectionStats st;
    st.sigma0 = std::pow(10.0, -13.0 + 4.0 * rng.uniform());
    st.sigma1 = st.sigma0 * (1.0 + std::pow(10.0, -3.0 + 3.5 * rng.uniform()));
    st.m = 1 + static_cast<int>(rng.uniform() * 200.0);
    st.q_th = optimal_threshold(st.sigma0, st.sigma1);
    const double best = dep(st, st.q_th).p_e;
    const double lo = 0.01 * st.sigma0, hi = 100.0 * st.sigma1;
    for (int k = 0; k < 1000; ++k) {
      const double q = lo * std::pow(hi / lo, k / 999.0);
      const double diff = best - dep(st, q).p_e;
      worst = std::max(worst, diff);
      violations += diff > 1e-12;
    }
  }
  return {violations == 0, fmt(violations, " violations, worst excess ", worst)};
}

double covertness_error(const ScenarioConfig& cfg, const SlotChannel& ch, const BeamformDecision& d, BeamPolicy policy,
                        double* pe_err) {
  const SlotEval e = evaluate_slot(cfg, slot_links(cfg, ch, d.theta, policy), d.q_c);
  const auto st = detection_stats(e.powers.p_bw0, e.powers.p_bw, e.powers.p_cw, cfg.sigma2_w, cfg.block_length);
  for (double q : {st.q_th, 0.5 * st.sigma0, st.sigma0, 2.0 * st.sigma0})
    *pe_err = std::max(*pe_err, std::abs(1.0 - dep(st, q).p_e));
  return std::abs(st.sigma1 - st.sigma0) / st.sigma0;
}

Outcome c4_perfect_covertness(const BcdTrace& jotb, const BcdTrace& sotfb) {
  double rel = 0.0, pe = 0.0;
  int count = 0;
  const ScenarioConfig cfg = canonical();
  for (const BcdTrace* tr : {&jotb, &sotfb}) {
    const ChannelGains g = compute_gains(cfg, tr->plan.positions());
    const BeamPolicy pol = tr->mode == RunMode::sotfb ? BeamPolicy::sotfb : BeamPolicy::jotb;
    for (std::size_t n = 0; n < tr->decisions.size(); ++n, ++count)
      rel = std::max(rel, covertness_error(cfg, slot_channel(cfg, g, n), tr->decisions[n], pol, &pe));
  }
  ScenarioConfig da = cfg;
  da.gain_model = GainModel::direction_aware;
  const ChannelGains g = compute_gains(da, initial_plan(da).positions());
  for (std::size_t n = 0; n < g.slots(); n += 13, ++count) {
    const SlotChannel ch = slot_channel(da, g, n);
    rel = std::max(rel, covertness_error(da, ch, choose_directions(da, ch), BeamPolicy::jotb, &pe));
    rel = std::max(rel, covertness_error(da, ch, fixed_decision(da, ch), BeamPolicy::sotfb, &pe));
    count++;
  }
  return {rel <= 1e-9 && pe <= 1e-12, fmt(count, " decisions, max rel variance gap ", rel, ", max |1-P_e| ", pe)};
}

int count_increases(const std::vector<double>& v) {
  int c = 0;
  for (std::size_t i = 1; i < v.size(); ++i) c += v[i] > v[i - 1];
  return c;
}

Outcome c5_monotonicity() {
  const ScenarioConfig base = canonical();
  int viol = 0;
  std::string d;
  for (int n_b : {2, 4}) {
    ScenarioConfig cfg = base;
    cfg.n_b = n_b;
    const SlotChannel ch = slot_channel(cfg, compute_gains(cfg, initial_plan(cfg).positions()), 0);
    const SlotLinks l = slot_links(cfg, ch, 0.0, BeamPolicy::jotb);
    const double q_c = bsa_optimize(cfg, l).x;
    const double q_b = covert_bob_power(cfg, l, q_c);
    const double p_ba = q_b * l.a2_ba * l.rho.ba, p_ca = q_c * l.a2_ca * l.rho.ca;
    const double p_bw = q_b * l.a2_bw * l.rho.bw, p_cw = q_c * l.a2_cw * l.rho.cw;
    std::vector<double> s0, s1, o0, o1;
    for (int i = 0; i < 100; ++i) {
      const double r = 30.0 * i / 99.0;
      s0.push_back(scp_h0(cfg.q_b_max * l.a2_ba * l.rho.ba, cfg.sigma2_a, r));
      s1.push_back(scp_h1(p_ba, p_ca, cfg.sigma2_a, r));
      o0.push_back(sop_h0(cfg.q_b_max * l.a2_bw * l.rho.bw, cfg.sigma2_w, r));
      o1.push_back(sop_h1(p_bw, p_cw, cfg.sigma2_w, r));
    }
    viol += count_increases(s0) + count_increases(s1) + count_increases(o0) + count_increases(o1);
    const bool ends = s0.front() == 1.0 && s1.front() == 1.0 && s0.back() < 1e-6 && s1.back() < 1e-6;
    if (!ends) ++viol;
    d += fmt("N_b=", n_b, " scp1 ", s1.front(), "->", s1.back(), "; ");
  }
  for (double ratio : {1.0001, 1.01, 1.5, 2.0}) {
    std::vector<double> pe;
    for (int m = 1; m <= 100; ++m) {
      const double q = optimal_threshold(1.0, ratio);
      pe.push_back(dep(DetectionStats{1.0, ratio, q, m}, q).p_e);
    }
    viol += count_increases(pe);
  }
  return {viol == 0, fmt(d, viol, " violations")};
}

Outcome c6_bsa() {
  const ScenarioConfig cfg = canonical();
  const SlotChannel ch = slot_channel(cfg, compute_gains(cfg, initial_plan(cfg).positions()), 0);
  const SlotLinks l = slot_links(cfg, ch, 0.0, BeamPolicy::jotb);
  const double hi = covert_power_limit(cfg, l);
  std::vector<double> grid;
  int arg = 0;
  for (int i = 0; i < 10000; ++i) {
    grid.push_back(slot_objective(hi * i / 9999.0, cfg, l));
    if (grid.back() > grid[arg]) arg = i;
  }
  int peaks = 0;
  for (int i = 0; i < 10000; ++i) {
    const bool left = i == 0 || grid[i] > grid[i - 1];
    const bool right = i == 9999 || grid[i] > grid[i + 1];
    peaks += left && right;
  }
  const BsaResult b = bsa_optimize(cfg, l);
  const double x_grid = hi * arg / 9999.0;
  const double zeta1 = 1e-4 * cfg.q_c_max;
  bool ok = peaks == 1 && std::abs(b.x - x_grid) <= zeta1;
  std::string d = fmt("peaks=", peaks, " |bsa-grid|=", std::abs(b.x - x_grid), " (zeta1 ", zeta1, ") ");

  ScenarioConfig da = cfg;
  da.gain_model = GainModel::direction_aware;
  const ChannelGains g = compute_gains(da, initial_plan(da).positions());
  Philox4x32 rng(kSeed, 6);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto n = static_cast<std::size_t>(rng.uniform() * g.slots()) % g.slots();
    const SlotChannel c = slot_channel(da, g, n);
    const BeamformDecision dec = choose_directions(da, c);
    const Oracle2d o = oracle_2d(da, c);
    const double rel = (o.value - dec.rate) / std::max(std::abs(o.value), 1e-300);
    worst = std::max(worst, rel);
  }
  ok = ok && worst <= 0.01;
  return {ok, d + fmt("worst shortfall vs 2-D oracle ", worst)};
}

// Slot rate composed directly from the closed-form metrics.
double composed_rate(double mu_ba, double mu_ca, const SlotRateModel& m, const ScenarioConfig& cfg) {
  const double h2 = cfg.altitude * cfg.altitude;
  const double p_ba = m.a / (h2 + mu_ba);
  if (m.h0) return scp_h0(p_ba, cfg.sigma2_a, cfg.r_t) * m.r_s;
  const double p_ca = m.b / (h2 + mu_ca);
  return cfg.kappa * scp_h1(p_ba, p_ca, cfg.sigma2_a, cfg.r_t) * m.r_s +
         (1.0 - cfg.kappa) * ccp(p_ba, p_ca, cfg.sigma2_a, cfg.r_t, cfg.r_c) * cfg.r_c;
}

Outcome c7_linearization(const BcdTrace& jotb, const BcdTrace& h0) {
  const ScenarioConfig cfg = canonical();
  const auto m1 = rate_models(cfg, jotb.decisions);
  const auto m0 = rate_models(cfg, h0.h0_decisions);
  Philox4x32 rng(kSeed, 7);
  double worst = 0.0;
  int tested = 0, attempts = 0;
  while (tested < 100 && attempts < 100000) {
    ++attempts;
    const bool use_h0 = tested % 4 == 3;
    const auto& models = use_h0 ? m0 : m1;
    const SlotRateModel& m = models[1 + static_cast<std::size_t>(rng.uniform() * (models.size() - 1)) % (models.size() - 1)];
    const double mb = 3e5 * rng.uniform(), mc = 3e5 * rng.uniform();
    const RateGradient g = rate_gradient(mb, mc, m, cfg);
    // Points on the connection boundary have no derivative.
    if (!(g.value > 1e-6)) continue;
    const double hb = 1e-4 * (cfg.altitude * cfg.altitude + mb), hc = 1e-4 * (cfg.altitude * cfg.altitude + mc);
    const double fb = (composed_rate(mb + hb, mc, m, cfg) - composed_rate(mb - hb, mc, m, cfg)) / (2 * hb);
    const double fc = (composed_rate(mb, mc + hc, m, cfg) - composed_rate(mb, mc - hc, m, cfg)) / (2 * hc);
    const double eb = std::abs(g.d_ba - fb) / std::max(std::abs(fb), 1e-300);
    worst = std::max(worst, eb);
    if (!m.h0) worst = std::max(worst, std::abs(g.d_ca - fc) / std::max(std::abs(fc), 1e-300));
    ++tested;
  }
  return {tested == 100 && worst <= 1e-5, fmt(tested, " points, worst relative error ", worst)};
}

Outcome c8_bcd(const BcdTrace& tr, double seconds) {
  const ScenarioConfig cfg = canonical();
  int drops = 0;
  for (std::size_t k = 1; k < tr.objective.size(); ++k) drops += tr.objective[k] < tr.objective[k - 1];
  const PlanCheck stored = check_plan(tr.plan, cfg);
  const auto models = rate_models(cfg, tr.decisions);
  const TrajectoryPlan raw = solve_subproblem(linearize(tr.plan, models, cfg), tr.plan, cfg);
  const PlanCheck fresh = check_plan(raw, cfg);
  const bool ok = !tr.error && tr.converged && tr.iterations <= 50 && drops == 0 && stored.slack_gap <= 1e-4 &&
                  fresh.slack_gap <= 1e-4;
  return {ok, fmt(tr.iterations, " iterations, ", drops, " decreases, objective ", tr.final_objective(),
                  ", slack gap ", stored.slack_gap, " (re-solved ", fresh.slack_gap, "), ", seconds, " s")};
}

Outcome c9_ordering(const BcdTrace& jotb, const BcdTrace& sotfb, const BcdTrace& h0, const BcdTrace& t100) {
  const double j = jotb.final_objective(), s = sotfb.final_objective(), z = h0.final_objective(),
               t = t100.final_objective();
  const bool ok = !jotb.error && !sotfb.error && !h0.error && !t100.error && j >= s - 1e-9 && z >= j - 1e-9 &&
                  j >= t - 1e-9;
  return {ok, fmt("JOTB ", j, " SOTFB ", s, " H0 ", z, " T=100 ", t)};
}

double secret_share(const std::vector<ParetoRow>& rows) {
  double s = 0.0;
  for (const auto& r : rows) s += r.phi_s / (r.phi_s + r.phi_c);
  return s / rows.size();
}

Outcome c10_pareto() {
  const ScenarioConfig cfg = canonical();
  std::vector<double> kappas;
  for (int i = 1; i <= 9; ++i) kappas.push_back(i / 10.0);
  const auto rows = pareto_sweep(cfg, kappas);
  ScenarioConfig weak = cfg;
  weak.xi_bw = weak.xi_cw = -4.0;
  const auto wrows = pareto_sweep(weak, kappas);
  bool errors = false;
  for (const auto& r : rows) errors = errors || r.error.has_value();
  for (const auto& r : wrows) errors = errors || r.error.has_value();
  const auto dom = dominated_rows(rows);
  const double share = secret_share(rows), wshare = secret_share(wrows);
  return {!errors && dom.empty() && wshare > share,
          fmt(dom.size(), " dominated rows, secret share ", share, " -> ", wshare, " with weaker Willie links")};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  int failed = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };

  auto t0 = Clock::now();
  report(1, "closed_form_vs_monte_carlo", c1_closed_vs_mc());
  report(2, "detection_error_vs_radiometer", c2_dep_vs_radiometer());
  report(3, "threshold_optimality", c3_threshold_optimality());

  const ScenarioConfig cfg = canonical();
  t0 = Clock::now();
  const BcdTrace jotb = run_bcd(cfg, RunMode::jotb);
  const double jotb_s = std::chrono::duration<double>(Clock::now() - t0).count();
  const BcdTrace sotfb = run_bcd(cfg, RunMode::sotfb);
  const BcdTrace h0 = run_h0_benchmark(cfg);
  ScenarioConfig short_cfg = cfg;
  short_cfg.period = 100.0;
  short_cfg.n_slots = 100;
  const BcdTrace t100 = run_bcd(short_cfg, RunMode::jotb);

  report(4, "perfect_covertness", c4_perfect_covertness(jotb, sotfb));
  report(5, "monotonicity", c5_monotonicity());
  report(6, "bisection_search", c6_bsa());
  report(7, "linearization", c7_linearization(jotb, h0));
  report(8, "bcd_convergence", c8_bcd(jotb, jotb_s));
  report(9, "ordering", c9_ordering(jotb, sotfb, h0, t100));
  report(10, "pareto", c10_pareto());
  std::printf("%d of 10 criteria failed\n", failed);
  return failed;
}

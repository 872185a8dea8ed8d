#include "doctest.h"

#include <cmath>
#include <numbers>

#include "uavsc/beamform.hpp"
#include "uavsc/errors.hpp"
#include "uavsc/trajectory.hpp"

using namespace uavsc;

namespace {

ScenarioConfig canonical() { return load_scenario_file("paper_default"); }

SlotChannel slot0(const ScenarioConfig& c) {
  return slot_channel(c, compute_gains(c, initial_plan(c).positions()), 0);
}

// Slot-0 rate of the canonical scenario written out by hand: UAV at the
// origin, two antennas on every link, noise 1e-12 W.
struct HandSlot {
  double a_ba = 0.1 / 170000.0, a_ca = 0.1 / 102500.0;
  double a_bw = 0.01 * std::pow(20000.0, -1.5), a_cw = 0.01 * std::pow(72500.0, -1.5);
  double s2 = 1e-12, gt = 65535.0, gc = 15.0;

  double rate(double qc) const {
    const double qb = 1.0 - qc * a_cw / a_bw;
    const double p_ba = 2 * qb * a_ba, p_ca = 2 * qc * a_ca;
    const double p_bw0 = 2 * a_bw, p_cw = 2 * qc * a_cw;
    const double rw = std::log2(1.0 + (p_bw0 - p_cw) / (s2 + std::log(100.0) * p_cw));
    const double scp = p_ba > gt * s2 ? 1.0 - std::exp(-(p_ba - gt * s2) / (gt * p_ca)) : 0.0;
    const double cc = scp * std::exp(-gc * s2 / p_ca);
    return 0.5 * scp * (16.0 - rw) + 0.5 * cc * 4.0;
  }

  double h0_rate(double qb) const {
    const double p_ba = 2 * qb * a_ba, p_bw = 2 * qb * a_bw;
    const double rw = std::log2(1.0 + std::log(100.0) * p_bw / s2);
    return std::exp(-gt * s2 / p_ba) * std::max(16.0 - rw, 0.0);
  }
};

}  // namespace

TEST_CASE("slot 0 covert power matches a brute-force search of the hand model") {
  const ScenarioConfig c = canonical();
  const HandSlot hand;
  double best_q = 0.0, best = -1.0;
  for (int i = 1; i <= 200000; ++i) {
    const double q = 2e-5 * i / 200000.0;
    const double v = hand.rate(q);
    if (v > best) best = v, best_q = q;
  }
  const SlotLinks l = slot_links(c, slot0(c), 0.0, BeamPolicy::jotb);
  const BsaResult r = bsa_optimize(c, l);
  CHECK(std::abs(r.x - best_q) <= c.bsa_tol());
  CHECK(r.value == doctest::Approx(best).epsilon(1e-6));
  CHECK(r.x == doctest::Approx(4.364e-6).epsilon(1e-3));
  CHECK(r.value == doctest::Approx(1.69599).epsilon(1e-5));
  CHECK_FALSE(r.multimodal);
  CHECK(slot_objective(3e-6, c, l) == doctest::Approx(hand.rate(3e-6)).epsilon(1e-12));
}

TEST_CASE("carlo-silent slot 0 power matches the hand model") {
  const ScenarioConfig c = canonical();
  const HandSlot hand;
  double best_q = 0.0, best = -1.0;
  for (int i = 1; i <= 100000; ++i) {
    const double q = 1.0 * i / 100000.0;
    const double v = hand.h0_rate(q);
    if (v > best) best = v, best_q = q;
  }
  const H0Decision d = design_h0_slot(c, slot0(c));
  CHECK(std::abs(d.q_b - best_q) <= 2e-4);
  CHECK(d.rate == doctest::Approx(best).epsilon(1e-6));
  CHECK(d.q_b == doctest::Approx(0.146).epsilon(0.01));
  CHECK(d.sop0 <= c.eta_s);
  CHECK(evaluate_h0(c, slot0(c), 0.3).rate == doctest::Approx(hand.h0_rate(0.3)).epsilon(1e-9));
}

TEST_CASE("willie's received power is held at the carlo-silent level") {
  const ScenarioConfig c = canonical();
  const SlotLinks l = slot_links(c, slot0(c), 0.0, BeamPolicy::jotb);
  const double lim = covert_power_limit(c, l);
  CHECK(lim == doctest::Approx(c.q_c_max));
  for (double f : {0.0, 0.1, 0.5, 1.0}) {
    const SlotEval e = evaluate_slot(c, l, f * lim);
    CHECK(e.powers.p_bw + e.powers.p_cw == doctest::Approx(e.powers.p_bw0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(evaluate_slot(c, l, -1e-9), OptimizationError);
  CHECK_THROWS_AS(evaluate_slot(c, l, 1.01 * lim), OptimizationError);
}

TEST_CASE("covert budget binds when willie hears carlo well") {
  ScenarioConfig c = canonical();
  SlotLinks l{1e-6, 1e-6, 1e-12, 1e-6, {}};
  // Bob's full power at Willie buys 1e-6 W of Carlo power at most.
  CHECK(covert_power_limit(c, l) == doctest::Approx(1e-6));
  CHECK(covert_bob_power(c, l, 1e-6) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("silent carlo uses the noise-limited connection limit") {
  const ScenarioConfig c = canonical();
  const SlotLinks l = slot_links(c, slot0(c), 0.0, BeamPolicy::jotb);
  const SlotEval e = evaluate_slot(c, l, 0.0);
  CHECK(e.scp1 == 1.0);
  CHECK(e.ccp == 0.0);
}

TEST_CASE("bisection search on known shapes") {
  auto quad = [](double x) { return -(x - 0.3) * (x - 0.3); };
  BsaResult r = bsa_maximize(quad, 0.0, 1.0, 1e-6);
  CHECK(r.x == doctest::Approx(0.3).epsilon(1e-5));
  CHECK_FALSE(r.multimodal);

  r = bsa_maximize([](double x) { return x; }, 0.0, 2.0, 1e-6);
  CHECK(r.x == doctest::Approx(2.0).epsilon(1e-5));
  r = bsa_maximize([](double x) { return -x; }, 0.0, 2.0, 1e-6);
  CHECK(r.x == doctest::Approx(0.0).epsilon(1e-5).scale(1.0));

  // Two peaks: the guard falls back to the grid and finds the taller one.
  auto two = [](double x) { return std::exp(-200 * (x - 0.2) * (x - 0.2)) + 1.5 * std::exp(-200 * (x - 0.8) * (x - 0.8)); };
  r = bsa_maximize(two, 0.0, 1.0, 1e-6);
  CHECK(r.multimodal);
  CHECK(r.x == doctest::Approx(0.8).epsilon(1e-3));

  CHECK_THROWS_AS(bsa_maximize(quad, 1.0, 0.0, 1e-6), OptimizationError);
  CHECK(bsa_maximize(quad, 0.5, 0.5, 1e-6).x == 0.5);
}

TEST_CASE("theta family gains equal the projected powers") {
  CVec g_ca(2), g_cw(2);
  g_ca << std::complex<double>(1.0, 0.5), std::complex<double>(-0.3, 0.8);
  g_cw << std::complex<double>(0.2, -0.7), std::complex<double>(1.1, 0.4);
  const ThetaFamily fam(g_ca, g_cw);
  REQUIRE(fam.planar());
  for (double t : {-1.2, -0.4, 0.0, 0.7, 1.5}) {
    const CVec u = fam.direction(t);
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fam.rho_ca(t) == doctest::Approx(std::norm(g_ca.dot(u))).epsilon(1e-12));
    CHECK(fam.rho_cw(t) == doctest::Approx(std::norm(g_cw.dot(u))).epsilon(1e-12));
  }
  CHECK(fam.rho_ca(std::numbers::pi / 2) == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
  // Somewhere in the family Carlo is invisible to Willie.
  double lowest = 1e9;
  for (int k = 0; k <= 2000; ++k) lowest = std::min(lowest, fam.rho_cw(-std::numbers::pi / 2 + std::numbers::pi * k / 2000));
  CHECK(lowest < 1e-5);
}

TEST_CASE("direction-aware links use the slot realization") {
  ScenarioConfig c = canonical();
  c.gain_model = GainModel::direction_aware;
  const SlotChannel ch = slot0(c);
  REQUIRE(ch.fading);
  const SlotLinks j = slot_links(c, ch, 0.0, BeamPolicy::jotb);
  const CVec u_b = ch.fading->g_ba.normalized();
  CHECK(j.rho.ba == doctest::Approx(std::norm(ch.fading->g_ba.dot(u_b))));
  CHECK(j.rho.bw == doctest::Approx(std::norm(ch.fading->g_bw.dot(u_b))));
  const BeamformDecision d = choose_directions(c, ch);
  const Oracle2d o = oracle_2d(c, ch);
  CHECK(d.rate >= 0.99 * o.value);
  CHECK(d.u_c.norm() == doctest::Approx(1.0));
  const BeamformDecision f = fixed_decision(c, ch);
  CHECK(f.q_c == doctest::Approx(c.sotfb_power_fraction * c.q_c_max));
  CHECK(f.theta == 0.0);
}

TEST_CASE("isotropic decisions ignore the angle") {
  const ScenarioConfig c = canonical();
  const SlotChannel ch = slot0(c);
  const BeamformDecision d = choose_directions(c, ch);
  CHECK(d.theta == 0.0);
  CHECK(d.rho.ba == 2.0);
  const Oracle2d o = oracle_2d(c, ch);
  CHECK(o.value == doctest::Approx(d.rate).epsilon(1e-6));
  const BeamformDecision s = fixed_decision(c, ch);
  CHECK(s.rho.ba == 1.0);
  CHECK(s.rate < d.rate);
}

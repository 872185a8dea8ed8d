#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "uavsc/channel.hpp"
#include "uavsc/scenario.hpp"
#include "uavsc/secmetrics.hpp"

namespace uavsc {

/// Large-scale gains of one slot plus, in direction-aware mode, the slot's
/// fixed small-scale realization.
struct SlotChannel {
  double a2_ba = 0.0, a2_ca = 0.0, a2_bw = 0.0, a2_cw = 0.0;
  std::optional<FadingDraw> fading;
};

SlotChannel slot_channel(const ScenarioConfig& cfg, const ChannelGains& gains, std::size_t n);

/// Beam gain factors rho such that p = q * a^2 * rho on each link.
struct BeamGains {
  double ba = 1.0, ca = 1.0, bw = 1.0, cw = 1.0;
};

/// Everything the slot objective needs besides the covert power.
struct SlotLinks {
  double a2_ba = 0.0, a2_ca = 0.0, a2_bw = 0.0, a2_cw = 0.0;
  BeamGains rho;
};

struct SlotEval {
  double q_b = 0.0, q_c = 0.0;
  LinkPowers powers;
  Redundancy redundancy;
  double r_s = 0.0, scp1 = 0.0, ccp = 0.0, rate = 0.0;
};

/// Largest covert power allowed by Q_c^max and by the perfect-covertness budget.
double covert_power_limit(const ScenarioConfig& cfg, const SlotLinks& links);

/// Bob's power that keeps Willie's received power equal to the Carlo-silent level.
double covert_bob_power(const ScenarioConfig& cfg, const SlotLinks& links, double q_c);

/// Full slot evaluation. Throws OptimizationError outside [0, covert_power_limit].
SlotEval evaluate_slot(const ScenarioConfig& cfg, const SlotLinks& links, double q_c);

double slot_objective(double q_c, const ScenarioConfig& cfg, const SlotLinks& links);

struct BsaResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool multimodal = false;
};

/// Bisection on the sign of the numerical derivative over [lo, hi], stopping
/// when the bracket is narrower than `tol`. A pre-scan guards the unimodality
/// assumption; if it fails, a grid search with local refinement is used.
BsaResult bsa_maximize(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Optimal covert power for fixed directions.
BsaResult bsa_optimize(const ScenarioConfig& cfg, const SlotLinks& links);

/// Rank-one covert directions u(theta) = cos(theta) e1 + sin(theta) e^{i phi} e2
/// in span{h_ca, h_cw}, with e1 along h_ca and phi aligning both terms of h_cw^H u.
class ThetaFamily {
 public:
  ThetaFamily(const CVec& g_ca, const CVec& g_cw);

  bool planar() const { return planar_; }
  CVec direction(double theta) const;
  double rho_ca(double theta) const;
  double rho_cw(double theta) const;

 private:
  CVec e1_, e2_;
  std::complex<double> phase_{1.0, 0.0};
  double norm_ca2_ = 0.0, c1_ = 0.0, c2_ = 0.0;
  bool planar_ = false;
};

enum class BeamPolicy { jotb, sotfb };

struct BeamformDecision {
  double q_b = 0.0, q_c = 0.0, theta = 0.0;
  CVec u_b, u_c;
  BeamGains rho;
  double r_w = 0.0, r_s = 0.0, scp1 = 0.0, ccp = 0.0, rate = 0.0;
  bool r_w_clamped = false;
  bool multimodal = false;
};

/// Beam gains for a given covert angle under the configured gain model.
SlotLinks slot_links(const ScenarioConfig& cfg, const SlotChannel& ch, double theta, BeamPolicy policy);

/// Re-evaluates a fixed (q_c, theta) decision on a (possibly new) slot channel.
BeamformDecision evaluate_decision(const ScenarioConfig& cfg, const SlotChannel& ch, double q_c, double theta,
                                   BeamPolicy policy);

/// Block-1 design for one slot: MRT toward Alice for Bob, theta scan plus BSA for Carlo.
BeamformDecision choose_directions(const ScenarioConfig& cfg, const SlotChannel& ch);

/// Fixed-beamformer baseline decision.
BeamformDecision fixed_decision(const ScenarioConfig& cfg, const SlotChannel& ch);

struct Oracle2d {
  double q_c = 0.0, theta = 0.0, value = 0.0;
};

/// Exhaustive power x angle grid with local refinement around the best cell.
Oracle2d oracle_2d(const ScenarioConfig& cfg, const SlotChannel& ch, int n_power = 64, int n_theta = 64);

/// Carlo-silent benchmark for one slot.
struct H0Decision {
  double q_b = 0.0, r_w = 0.0, r_s = 0.0, scp0 = 0.0, sop0 = 0.0, rate = 0.0;
  double rho_ba = 1.0, rho_bw = 1.0;
  bool multimodal = false;
};

H0Decision evaluate_h0(const ScenarioConfig& cfg, const SlotChannel& ch, double q_b);
H0Decision design_h0_slot(const ScenarioConfig& cfg, const SlotChannel& ch);

}  // namespace uavsc

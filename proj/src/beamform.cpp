#include "uavsc/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "uavsc/errors.hpp"
#include "uavsc/units.hpp"

namespace uavsc {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double golden_max(const std::function<double(double)>& f, double a, double b, double tol, double* best) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double x = fc >= fd ? c : d;
  if (best) *best = std::max(fc, fd);
  return x;
}

// Number of local maxima of a sampled curve, endpoints included, ignoring
// steps below `eps`.
int count_peaks(const std::vector<double>& v, double eps) {
  std::vector<int> dir;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - v[i];
    if (d > eps) dir.push_back(1);
    else if (d < -eps) dir.push_back(-1);
  }
  if (dir.empty()) return 1;
  int peaks = dir.front() < 0 ? 1 : 0;
  for (std::size_t i = 0; i + 1 < dir.size(); ++i) peaks += dir[i] > 0 && dir[i + 1] < 0;
  if (dir.back() > 0) ++peaks;
  return peaks;
}

BsaResult grid_refine(const std::function<double(double)>& f, double lo, double hi, double tol, int points) {
  BsaResult r;
  const double step = (hi - lo) / (points - 1);
  int best = 0;
  double best_v = -INFINITY;
  for (int i = 0; i < points; ++i) {
    const double v = f(lo + i * step);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = std::max(lo, lo + (best - 1) * step), b = std::min(hi, lo + (best + 1) * step);
  double v = 0.0;
  const double x = golden_max(f, a, b, tol, &v);
  if (v >= best_v) {
    r.x = x;
    r.value = v;
  } else {
    r.x = lo + best * step;
    r.value = best_v;
  }
  return r;
}

}  // namespace

SlotChannel slot_channel(const ScenarioConfig& cfg, const ChannelGains& gains, std::size_t n) {
  SlotChannel ch;
  ch.a2_ba = gains.a2_ba[n];
  ch.a2_ca = gains.a2_ca[n];
  ch.a2_bw = gains.a2_bw;
  ch.a2_cw = gains.a2_cw;
  if (cfg.gain_model == GainModel::direction_aware) ch.fading = slot_fading(cfg, static_cast<int>(n));
  return ch;
}

double covert_power_limit(const ScenarioConfig& cfg, const SlotLinks& l) {
  const double per_cw = l.a2_cw * l.rho.cw;
  if (!(per_cw > 0.0)) return cfg.q_c_max;
  return std::min(cfg.q_c_max, cfg.q_b_max * l.a2_bw * l.rho.bw / per_cw);
}

double covert_bob_power(const ScenarioConfig& cfg, const SlotLinks& l, double q_c) {
  const double per_bw = l.a2_bw * l.rho.bw;
  if (!(per_bw > 0.0)) return q_c > 0.0 ? 0.0 : cfg.q_b_max;
  return std::max(0.0, cfg.q_b_max - q_c * l.a2_cw * l.rho.cw / per_bw);
}

SlotEval evaluate_slot(const ScenarioConfig& cfg, const SlotLinks& l, double q_c) {
  const double limit = covert_power_limit(cfg, l);
  if (q_c < 0.0 || q_c > limit * (1.0 + 1e-12))
    throw OptimizationError("covert power " + std::to_string(q_c) + " W outside [0, " + std::to_string(limit) +
                            " W] (perfect-covertness budget)");
  SlotEval e;
  e.q_c = q_c;
  e.q_b = covert_bob_power(cfg, l, q_c);
  auto& p = e.powers;
  p.sigma2_a = cfg.sigma2_a;
  p.sigma2_w = cfg.sigma2_w;
  p.p_ba = e.q_b * l.a2_ba * l.rho.ba;
  p.p_ca = q_c * l.a2_ca * l.rho.ca;
  p.p_bw0 = cfg.q_b_max * l.a2_bw * l.rho.bw;
  p.p_bw = e.q_b * l.a2_bw * l.rho.bw;
  p.p_cw = q_c * l.a2_cw * l.rho.cw;
  e.redundancy = secrecy_redundancy(p.p_bw0, p.p_cw, cfg.sigma2_w, cfg.eta_s);
  e.r_s = std::max(cfg.r_t - e.redundancy.r_w, 0.0);
  if (p.p_ca > 0.0) {
    e.scp1 = scp_h1(p.p_ba, p.p_ca, cfg.sigma2_a, cfg.r_t);
    e.ccp = ccp(p.p_ba, p.p_ca, cfg.sigma2_a, cfg.r_t, cfg.r_c);
  } else {
    // Limit of the interference-limited form as Carlo's power vanishes.
    e.scp1 = p.p_ba > units::snr_threshold(cfg.r_t) * cfg.sigma2_a ? 1.0 : 0.0;
    e.ccp = 0.0;
  }
  e.rate = cfg.kappa * e.scp1 * e.r_s + (1.0 - cfg.kappa) * e.ccp * cfg.r_c;
  return e;
}

double slot_objective(double q_c, const ScenarioConfig& cfg, const SlotLinks& links) {
  return evaluate_slot(cfg, links, q_c).rate;
}

BsaResult bsa_maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(hi >= lo)) throw OptimizationError("empty search interval");
  if (hi - lo < tol) {
    const double x = 0.5 * (lo + hi);
    return {x, f(x), 0, false};
  }

  constexpr int kScan = 65;
  std::vector<double> scan(kScan);
  double scan_best = -INFINITY, scan_max_abs = 0.0;
  for (int i = 0; i < kScan; ++i) {
    scan[i] = f(lo + (hi - lo) * i / (kScan - 1));
    scan_best = std::max(scan_best, scan[i]);
    scan_max_abs = std::max(scan_max_abs, std::abs(scan[i]));
  }
  const double eps = 1e-12 * std::max(scan_max_abs, 1e-300);
  if (count_peaks(scan, eps) > 1) {
    auto r = grid_refine(f, lo, hi, tol, 1025);
    r.multimodal = true;
    return r;
  }

  const double h = std::max(1e-6 * (hi - lo), 1e-12);
  auto slope = [&](double x) {
    if (x - h < lo) return (f(x + h) - f(x)) / h;
    if (x + h > hi) return (f(x) - f(x - h)) / h;
    return (f(x + h) - f(x - h)) / (2.0 * h);
  };

  BsaResult r;
  double q0 = lo, q1 = hi;
  bool moved_lo = false, moved_hi = false;
  while (q1 - q0 >= tol) {
    const double qm = 0.5 * (q0 + q1);
    if (slope(qm) > 0.0) {
      q0 = qm;
      moved_lo = true;
    } else {
      q1 = qm;
      moved_hi = true;
    }
    ++r.iterations;
  }
  r.x = 0.5 * (q0 + q1);
  r.value = f(r.x);
  if (!moved_lo) {
    const double v = f(lo);
    if (v >= r.value) r = {lo, v, r.iterations, false};
  }
  if (!moved_hi) {
    const double v = f(hi);
    if (v >= r.value) r = {hi, v, r.iterations, false};
  }
  // Flat stretches stall the derivative test; trust the scan in that case.
  if (scan_best > r.value + eps) {
    const int it = r.iterations;
    r = grid_refine(f, lo, hi, tol, 1025);
    r.iterations = it;
  }
  return r;
}

BsaResult bsa_optimize(const ScenarioConfig& cfg, const SlotLinks& links) {
  const double hi = covert_power_limit(cfg, links);
  return bsa_maximize([&](double q) { return slot_objective(std::min(q, hi), cfg, links); }, 0.0, hi,
                      cfg.bsa_tol());
}

ThetaFamily::ThetaFamily(const CVec& g_ca, const CVec& g_cw) {
  norm_ca2_ = g_ca.squaredNorm();
  if (!(norm_ca2_ > 0.0)) throw OptimizationError("zero Carlo -> UAV channel vector");
  if (!(g_cw.squaredNorm() > 0.0)) throw OptimizationError("zero Carlo -> Willie channel vector");
  e1_ = g_ca / std::sqrt(norm_ca2_);
  const std::complex<double> c1 = e1_.dot(g_cw);  // e1^H g_cw
  c1_ = std::abs(c1);
  const CVec r = g_cw - c1 * e1_;
  c2_ = r.norm();
  if (g_ca.size() > 1 && c2_ > 1e-12 * g_cw.norm()) {
    planar_ = true;
    e2_ = r / c2_;
    phase_ = c1_ > 0.0 ? std::conj(c1) / c1_ : std::complex<double>(1.0, 0.0);
  } else {
    c2_ = 0.0;
  }
}

CVec ThetaFamily::direction(double theta) const {
  if (!planar_) return e1_;
  return std::cos(theta) * e1_ + std::sin(theta) * phase_ * e2_;
}

double ThetaFamily::rho_ca(double theta) const {
  if (!planar_) return norm_ca2_;
  const double c = std::cos(theta);
  return norm_ca2_ * c * c;
}

double ThetaFamily::rho_cw(double theta) const {
  if (!planar_) return c1_ * c1_;
  const double s = std::cos(theta) * c1_ + std::sin(theta) * c2_;
  return s * s;
}

SlotLinks slot_links(const ScenarioConfig& cfg, const SlotChannel& ch, double theta, BeamPolicy policy) {
  SlotLinks l{ch.a2_ba, ch.a2_ca, ch.a2_bw, ch.a2_cw, {}};
  if (!ch.fading) {
    if (policy == BeamPolicy::jotb) l.rho = {double(cfg.n_b), double(cfg.n_c), double(cfg.n_b), double(cfg.n_c)};
    return l;
  }
  const auto& f = *ch.fading;
  if (policy == BeamPolicy::sotfb) {
    l.rho = {f.g_ba.squaredNorm() / cfg.n_b, f.g_ca.squaredNorm() / cfg.n_c, f.g_bw.squaredNorm() / cfg.n_b,
             f.g_cw.squaredNorm() / cfg.n_c};
    return l;
  }
  const double nb2 = f.g_ba.squaredNorm();
  if (!(nb2 > 0.0)) throw OptimizationError("zero Bob -> UAV channel vector");
  const CVec u_b = f.g_ba / std::sqrt(nb2);
  const ThetaFamily fam(f.g_ca, f.g_cw);
  l.rho = {nb2, fam.rho_ca(theta), std::norm(f.g_bw.dot(u_b)), fam.rho_cw(theta)};
  return l;
}

BeamformDecision evaluate_decision(const ScenarioConfig& cfg, const SlotChannel& ch, double q_c, double theta,
                                   BeamPolicy policy) {
  const SlotLinks l = slot_links(cfg, ch, theta, policy);
  const SlotEval e = evaluate_slot(cfg, l, std::min(q_c, covert_power_limit(cfg, l)));
  BeamformDecision d;
  d.q_b = e.q_b;
  d.q_c = e.q_c;
  d.theta = theta;
  d.rho = l.rho;
  d.r_w = e.redundancy.r_w;
  d.r_w_clamped = e.redundancy.clamped;
  d.r_s = e.r_s;
  d.scp1 = e.scp1;
  d.ccp = e.ccp;
  d.rate = e.rate;
  if (ch.fading && policy == BeamPolicy::jotb) {
    d.u_b = ch.fading->g_ba.normalized();
    d.u_c = ThetaFamily(ch.fading->g_ca, ch.fading->g_cw).direction(theta);
  } else {
    d.u_b = los_vector(cfg.n_b) / std::sqrt(double(cfg.n_b));
    d.u_c = los_vector(cfg.n_c) / std::sqrt(double(cfg.n_c));
  }
  return d;
}

BeamformDecision choose_directions(const ScenarioConfig& cfg, const SlotChannel& ch) {
  auto at = [&](double theta) { return bsa_optimize(cfg, slot_links(cfg, ch, theta, BeamPolicy::jotb)); };

  double theta = 0.0;
  BsaResult best = at(0.0);
  const bool planar = ch.fading && ThetaFamily(ch.fading->g_ca, ch.fading->g_cw).planar();
  if (planar) {
    constexpr int kCoarse = 33;
    const double step = std::numbers::pi / (kCoarse - 1);
    for (int k = 0; k < kCoarse; ++k) {
      const double t = -kHalfPi + k * step;
      const BsaResult r = at(t);
      if (r.value > best.value) {
        best = r;
        theta = t;
      }
    }
    const double a = std::max(-kHalfPi, theta - step), b = std::min(kHalfPi, theta + step);
    double v = 0.0;
    const double t = golden_max([&](double x) { return at(x).value; }, a, b, 1e-6, &v);
    if (v > best.value) {
      theta = t;
      best = at(t);
    }
  }
  BeamformDecision d = evaluate_decision(cfg, ch, best.x, theta, BeamPolicy::jotb);
  d.multimodal = best.multimodal;
  return d;
}

BeamformDecision fixed_decision(const ScenarioConfig& cfg, const SlotChannel& ch) {
  return evaluate_decision(cfg, ch, cfg.sotfb_power_fraction * cfg.q_c_max, 0.0, BeamPolicy::sotfb);
}

Oracle2d oracle_2d(const ScenarioConfig& cfg, const SlotChannel& ch, int n_power, int n_theta) {
  const bool planar = ch.fading && ThetaFamily(ch.fading->g_ca, ch.fading->g_cw).planar();
  std::vector<double> thetas{0.0};
  if (planar)
    for (int k = 0; k < n_theta; ++k) thetas.push_back(-kHalfPi + std::numbers::pi * k / (n_theta - 1));

  auto value = [&](double q, double theta) {
    const SlotLinks l = slot_links(cfg, ch, theta, BeamPolicy::jotb);
    return slot_objective(std::clamp(q, 0.0, covert_power_limit(cfg, l)), cfg, l);
  };

  Oracle2d best{0.0, 0.0, -INFINITY};
  for (double t : thetas) {
    const double lim = covert_power_limit(cfg, slot_links(cfg, ch, t, BeamPolicy::jotb));
    for (int i = 0; i < n_power; ++i) {
      const double q = lim * i / (n_power - 1);
      const double v = value(q, t);
      if (v > best.value) best = {q, t, v};
    }
  }

  // Alternating golden refinement inside the neighbouring cells.
  const double dt = planar ? std::numbers::pi / (n_theta - 1) : 0.0;
  const double q_span = cfg.q_c_max / (n_power - 1);
  const double q_tol = 1e-3 * cfg.bsa_tol();
  for (int round = 0; round < 30; ++round) {
    const double prev = best.value;
    const double lim = covert_power_limit(cfg, slot_links(cfg, ch, best.theta, BeamPolicy::jotb));
    double v = 0.0;
    const double q = golden_max([&](double x) { return value(x, best.theta); }, std::max(0.0, best.q_c - q_span),
                                std::min(lim, best.q_c + q_span), q_tol, &v);
    if (v > best.value) best = {q, best.theta, v};
    if (planar) {
      const double t = golden_max([&](double x) { return value(best.q_c, x); }, std::max(-kHalfPi, best.theta - dt),
                                  std::min(kHalfPi, best.theta + dt), 1e-9, &v);
      if (v > best.value) best = {best.q_c, t, v};
    }
    if (best.value - prev <= 1e-15 * std::abs(best.value)) break;
  }
  return best;
}

H0Decision evaluate_h0(const ScenarioConfig& cfg, const SlotChannel& ch, double q_b) {
  H0Decision d;
  if (ch.fading) {
    const auto& f = *ch.fading;
    d.rho_ba = f.g_ba.squaredNorm();
    d.rho_bw = std::norm(f.g_bw.dot(f.g_ba.normalized()));
  } else {
    d.rho_ba = d.rho_bw = cfg.n_b;
  }
  d.q_b = q_b;
  const double p_ba = q_b * ch.a2_ba * d.rho_ba;
  const double p_bw = q_b * ch.a2_bw * d.rho_bw;
  d.r_w = h0_redundancy(p_bw, cfg.sigma2_w, cfg.eta_s);
  d.r_s = std::max(cfg.r_t - d.r_w, 0.0);
  d.scp0 = scp_h0(p_ba, cfg.sigma2_a, cfg.r_t);
  d.sop0 = p_bw > 0.0 ? sop_h0(p_bw, cfg.sigma2_w, d.r_w) : 0.0;
  d.rate = d.scp0 * d.r_s;
  return d;
}

H0Decision design_h0_slot(const ScenarioConfig& cfg, const SlotChannel& ch) {
  const auto r = bsa_maximize([&](double q) { return evaluate_h0(cfg, ch, q).rate; }, 0.0, cfg.q_b_max,
                              cfg.bsa_tol_rel * cfg.q_b_max);
  H0Decision d = evaluate_h0(cfg, ch, r.x);
  d.multimodal = r.multimodal;
  return d;
}

}  // namespace uavsc

#include "uavsc/secmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavsc/units.hpp"

namespace uavsc {
namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// Sum of e^{-x} x^k / k! for k in [lo, hi), in log domain, largest term first
// with Neumaier compensation.
double poisson_terms(int lo, int hi, double x) {
  if (hi <= lo) return 0.0;
  if (x == 0.0) return lo == 0 ? 1.0 : 0.0;
  const double lx = std::log(x);
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(hi - lo));
  for (int k = lo; k < hi; ++k) t.push_back(std::exp(-x + k * lx - std::lgamma(k + 1.0)));
  std::sort(t.begin(), t.end(), std::greater<>());
  double s = 0.0, c = 0.0;
  for (double v : t) {
    const double y = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - y) + v : (v - y) + s;
    s = y;
  }
  return s + c;
}

// Tail e^{-x} sum_{k>=m} x^k/k! for x < m + 1; terms shrink geometrically.
double poisson_tail(int m, double x) {
  if (x == 0.0) return 0.0;
  const double lx = std::log(x);
  std::vector<double> t;
  double term = std::exp(-x + m * lx - std::lgamma(m + 1.0));
  for (int k = m; term > 0.0; ++k) {
    t.push_back(term);
    if (term < 1e-18 * t.front() && k > m + 2) break;
    term *= x / (k + 1.0);
  }
  double s = 0.0;
  for (double v : t) s += v;  // already largest-first
  return s;
}

}  // namespace

double scp_h0(double p_ba, double sigma2_a, double r_t) {
  if (!(p_ba > 0.0)) return r_t <= 0.0 ? 1.0 : 0.0;
  return clamp01(std::exp(-units::snr_threshold(r_t) * sigma2_a / p_ba));
}

double scp_h1(double p_ba, double p_ca, double sigma2_a, double r_t) {
  if (!(p_ca > 0.0)) return scp_h0(p_ba, sigma2_a, r_t);
  const double g = units::snr_threshold(r_t);
  if (g <= 0.0) return 1.0;
  const double num = p_ba - g * sigma2_a;
  if (num <= 0.0) return 0.0;
  return clamp01(-std::expm1(-num / (g * p_ca)));
}

double sop_h0(double p_bw, double sigma2_w, double r_w) { return scp_h0(p_bw, sigma2_w, r_w); }

double sop_h1(double p_bw, double p_cw, double sigma2_w, double r_w) {
  return scp_h1(p_bw, p_cw, sigma2_w, r_w);
}

double ccp(double p_ba, double p_ca, double sigma2_a, double r_t, double r_c) {
  if (!(p_ca > 0.0)) return 0.0;
  const double s = scp_h1(p_ba, p_ca, sigma2_a, r_t);
  if (s == 0.0) return 0.0;
  return clamp01(s * std::exp(-units::snr_threshold(r_c) * sigma2_a / p_ca));
}

double optimal_threshold(double s0, double s1) {
  if (s0 == s1) return s0;
  // s1*s0/(s1-s0)*ln(s1/s0) = s1 * log1p(r)/r with r = (s1-s0)/s0.
  const double r = (s1 - s0) / s0;
  if (std::abs(r) < 1e-8) return s1 * (1.0 - 0.5 * r + r * r / 3.0);
  return s1 * std::log1p(r) / r;
}

DetectionStats detection_stats(double p_bw0, double p_bw1, double p_cw, double sigma2_w, int m) {
  if (m < 1) throw std::invalid_argument("block length must be at least 1");
  DetectionStats d;
  d.sigma0 = p_bw0 + sigma2_w;
  d.sigma1 = p_bw1 + p_cw + sigma2_w;
  d.m = m;
  d.q_th = optimal_threshold(d.sigma0, d.sigma1);
  return d;
}

double gamma_q(int m, double x) {
  if (m < 1) throw std::invalid_argument("gamma_q needs m >= 1");
  if (x <= 0.0) return 1.0;
  if (x < m + 1.0) return clamp01(1.0 - poisson_tail(m, x));
  return clamp01(poisson_terms(0, m, x));
}

double gamma_p(int m, double x) {
  if (m < 1) throw std::invalid_argument("gamma_p needs m >= 1");
  if (x <= 0.0) return 0.0;
  if (x < m + 1.0) return clamp01(poisson_tail(m, x));
  return clamp01(1.0 - poisson_terms(0, m, x));
}

DepResult dep(const DetectionStats& s, double q_th) {
  if (!(q_th > 0.0)) throw std::invalid_argument("detection threshold must be positive");
  DepResult r;
  const double x0 = s.psi0(q_th), x1 = s.psi1(q_th);
  if (x0 == x1) {
    // Same statistic under both hypotheses: the two errors are complementary.
    r.p_f = gamma_q(s.m, x0);
    r.p_m = 1.0 - r.p_f;
    r.p_e = 1.0;
    return r;
  }
  r.p_f = gamma_q(s.m, x0);
  r.p_m = gamma_p(s.m, x1);
  r.p_e = clamp01(r.p_f + r.p_m);
  return r;
}

Redundancy secrecy_redundancy(double p_bw_max, double p_cw, double sigma2_w, double eta_s) {
  const double num = p_bw_max - p_cw;
  const double den = sigma2_w - std::log(eta_s) * p_cw;
  if (num < 0.0) return {0.0, true};
  return {std::log2(1.0 + num / den), false};
}

double h0_redundancy(double p_bw0, double sigma2_w, double eta_s) {
  if (!(p_bw0 > 0.0)) return 0.0;
  double r = std::log2(1.0 - std::log(eta_s) * p_bw0 / sigma2_w);
  // Rounding can leave the SOP a hair above the cap.
  while (sop_h0(p_bw0, sigma2_w, r) > eta_s) r = std::nextafter(r, INFINITY);
  return r;
}

SecurityReport evaluate_security(const LinkPowers& p, const RateTargets& t) {
  SecurityReport r;
  const auto red = secrecy_redundancy(p.p_bw0, p.p_cw, p.sigma2_w, t.eta_s);
  r.r_w = red.r_w;
  r.r_s = std::max(t.r_t - r.r_w, 0.0);
  r.scp0 = scp_h0(p.p_ba, p.sigma2_a, t.r_t);
  r.scp1 = scp_h1(p.p_ba, p.p_ca, p.sigma2_a, t.r_t);
  r.sop0 = sop_h0(p.p_bw0, p.sigma2_w, r.r_w);
  r.sop1 = sop_h1(p.p_bw, p.p_cw, p.sigma2_w, r.r_w);
  r.ccp = ccp(p.p_ba, p.p_ca, p.sigma2_a, t.r_t, t.r_c);
  const auto stats = detection_stats(p.p_bw0, p.p_bw, p.p_cw, p.sigma2_w, t.m);
  const auto d = dep(stats, stats.q_th);
  r.p_f = d.p_f;
  r.p_m = d.p_m;
  r.p_e = d.p_e;
  r.rate = t.kappa * r.scp1 * r.r_s + (1.0 - t.kappa) * r.ccp * t.r_c;
  return r;
}

std::vector<std::string> security_csv_header() {
  return {"scp0", "scp1", "sop0", "sop1", "ccp", "p_f", "p_m", "p_e", "r_w", "r_s", "rate"};
}

std::vector<double> security_csv_row(const SecurityReport& r) {
  return {r.scp0, r.scp1, r.sop0, r.sop1, r.ccp, r.p_f, r.p_m, r.p_e, r.r_w, r.r_s, r.rate};
}

}  // namespace uavsc

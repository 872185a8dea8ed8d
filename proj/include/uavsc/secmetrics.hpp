#pragma once

#include <string>
#include <vector>

namespace uavsc {

/// Received quadratic-form powers for one slot (W).
struct LinkPowers {
  double p_ba = 0.0, p_ca = 0.0;
  double p_bw0 = 0.0;  ///< Bob -> Willie when Carlo is silent
  double p_bw = 0.0, p_cw = 0.0;
  double sigma2_a = 1e-12, sigma2_w = 1e-12;
};

double scp_h0(double p_ba, double sigma2_a, double r_t);
double scp_h1(double p_ba, double p_ca, double sigma2_a, double r_t);
double sop_h0(double p_bw, double sigma2_w, double r_w);
double sop_h1(double p_bw, double p_cw, double sigma2_w, double r_w);
double ccp(double p_ba, double p_ca, double sigma2_a, double r_t, double r_c);

struct DetectionStats {
  double sigma0 = 0.0, sigma1 = 0.0;
  double q_th = 0.0;  ///< optimal threshold
  int m = 1;

  double psi0(double q) const { return m * q / sigma0; }
  double psi1(double q) const { return m * q / sigma1; }
};

/// Log-mean threshold s1*s0/(s1-s0)*ln(s1/s0); equals s0 when s0 == s1.
double optimal_threshold(double sigma0, double sigma1);

DetectionStats detection_stats(double p_bw0, double p_bw1, double p_cw, double sigma2_w, int m);

/// Regularized upper incomplete gamma Q(m, x) for integer m >= 1.
double gamma_q(int m, double x);
/// Regularized lower incomplete gamma P(m, x) = 1 - Q(m, x), without cancellation.
double gamma_p(int m, double x);

struct DepResult {
  double p_f = 0.0, p_m = 0.0, p_e = 0.0;
};

/// False alarm, miss and total detection error at threshold `q_th` (> 0).
DepResult dep(const DetectionStats& stats, double q_th);

struct Redundancy {
  double r_w = 0.0;
  bool clamped = false;  ///< numerator was negative
};

Redundancy secrecy_redundancy(double p_bw_max, double p_cw, double sigma2_w, double eta_s);

/// Redundancy that puts the Carlo-silent SOP exactly at the cap.
double h0_redundancy(double p_bw0, double sigma2_w, double eta_s);

struct SecurityReport {
  double scp0 = 0.0, scp1 = 0.0, sop0 = 0.0, sop1 = 0.0, ccp = 0.0;
  double p_f = 0.0, p_m = 0.0, p_e = 0.0;
  double r_w = 0.0, r_s = 0.0, rate = 0.0;
};

struct RateTargets {
  double r_t = 16.0, r_c = 4.0, eta_s = 0.01, kappa = 0.5;
  int m = 100;
};

/// Every metric for one slot; R_w from the redundancy rule and the
/// detection quantities at the optimal threshold.
SecurityReport evaluate_security(const LinkPowers& p, const RateTargets& t);

std::vector<std::string> security_csv_header();
std::vector<double> security_csv_row(const SecurityReport& r);

}  // namespace uavsc

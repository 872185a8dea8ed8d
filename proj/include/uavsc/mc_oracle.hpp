#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "uavsc/scenario.hpp"

namespace uavsc {

/// Binomial estimate with 95% normal-approximation half-width.
struct McEstimate {
  double p = 0.0;
  long n = 0;
  double ci = 0.0;

  bool covers(double value) const { return std::abs(value - p) <= ci; }
};

McEstimate binomial_estimate(long hits, long n);

// Fading-draw estimators. Mean received powers are given per link; each draw
// projects a CN(0, I) vector of `n_ant` antennas onto a fixed unit beam, so
// the projected power is exponential with the given mean. Links held fixed
// by the closed form are not drawn.

McEstimate mc_scp_h0(double p_ba, double sigma2_a, double r_t, int n_ant, long samples, std::uint64_t seed);
/// Bob's link fixed, Carlo's interference drawn.
McEstimate mc_scp_h1(double p_ba, double p_ca, double sigma2_a, double r_t, int n_ant, long samples,
                     std::uint64_t seed);
McEstimate mc_sop_h0(double p_bw, double sigma2_w, double r_w, int n_ant, long samples, std::uint64_t seed);
McEstimate mc_sop_h1(double p_bw, double p_cw, double sigma2_w, double r_w, int n_ant, long samples,
                     std::uint64_t seed);
/// Secret decode and covert decode events use independent draws.
McEstimate mc_ccp(double p_ba, double p_ca, double sigma2_a, double r_t, double r_c, int n_ant, long samples,
                  std::uint64_t seed);

struct McDep {
  McEstimate p_f, p_m, p_e;
};

/// Radiometer simulation: `m` complex Gaussian symbols per trial under each
/// hypothesis, average power compared against `q_th`.
McDep mc_dep(double sigma0, double sigma1, double q_th, int m, long trials, std::uint64_t seed);

struct RicianGapRow {
  double k = 0.0;
  double closed_form = 0.0;
  McEstimate mc;
  double gap = 0.0;  ///< closed_form - mc.p
};

/// Carlo-silent SCP of Bob's link under Rician draws for each K, against the
/// exponential closed form at the same mean power. Beam: LoS direction.
std::vector<RicianGapRow> mc_rician_gap(const ScenarioConfig& cfg, const std::vector<double>& k_grid,
                                        double q_b, double a2_ba, long samples, std::uint64_t seed);

}  // namespace uavsc

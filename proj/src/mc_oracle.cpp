#include "uavsc/mc_oracle.hpp"

#include <cmath>
#include <complex>

#include "uavsc/rng.hpp"

namespace uavsc {
namespace {

// The oracle keeps its own threshold arithmetic.
double threshold(double rate) { return std::pow(2.0, rate) - 1.0; }

// |g^H u|^2 for g ~ CN(0, I_n) and u = ones / sqrt(n).
double projected_power(Philox4x32& rng, int n) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::conj(rng.complex_normal());
  return std::norm(acc) / n;
}

}  // namespace

McEstimate binomial_estimate(long hits, long n) {
  McEstimate e;
  e.n = n;
  e.p = n > 0 ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
  e.ci = n > 0 ? 1.96 * std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(n)) : 1.0;
  return e;
}

McEstimate mc_scp_h0(double p_ba, double sigma2_a, double r_t, int n_ant, long samples, std::uint64_t seed) {
  Philox4x32 rng(seed, 1);
  const double g = threshold(r_t);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const double snr = p_ba * projected_power(rng, n_ant) / sigma2_a;
    hits += snr > g;
  }
  return binomial_estimate(hits, samples);
}

McEstimate mc_scp_h1(double p_ba, double p_ca, double sigma2_a, double r_t, int n_ant, long samples,
                     std::uint64_t seed) {
  Philox4x32 rng(seed, 2);
  const double g = threshold(r_t);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const double sinr = p_ba / (p_ca * projected_power(rng, n_ant) + sigma2_a);
    hits += sinr > g;
  }
  return binomial_estimate(hits, samples);
}

McEstimate mc_sop_h0(double p_bw, double sigma2_w, double r_w, int n_ant, long samples, std::uint64_t seed) {
  Philox4x32 rng(seed, 3);
  const double g = threshold(r_w);
  long hits = 0;
  for (long i = 0; i < samples; ++i) hits += p_bw * projected_power(rng, n_ant) / sigma2_w > g;
  return binomial_estimate(hits, samples);
}

McEstimate mc_sop_h1(double p_bw, double p_cw, double sigma2_w, double r_w, int n_ant, long samples,
                     std::uint64_t seed) {
  Philox4x32 rng(seed, 4);
  const double g = threshold(r_w);
  long hits = 0;
  for (long i = 0; i < samples; ++i) hits += p_bw / (p_cw * projected_power(rng, n_ant) + sigma2_w) > g;
  return binomial_estimate(hits, samples);
}

McEstimate mc_ccp(double p_ba, double p_ca, double sigma2_a, double r_t, double r_c, int n_ant, long samples,
                  std::uint64_t seed) {
  Philox4x32 rng(seed, 5);
  const double gt = threshold(r_t), gc = threshold(r_c);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const double secret = p_ba / (p_ca * projected_power(rng, n_ant) + sigma2_a);
    const double covert = p_ca * projected_power(rng, n_ant) / sigma2_a;
    hits += secret > gt && covert > gc;
  }
  return binomial_estimate(hits, samples);
}

McDep mc_dep(double sigma0, double sigma1, double q_th, int m, long trials, std::uint64_t seed) {
  Philox4x32 rng(seed, 6);
  long fa = 0, md = 0;
  auto statistic = [&](double var) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += var * std::norm(rng.complex_normal());
    return s / m;
  };
  for (long i = 0; i < trials; ++i) {
    fa += statistic(sigma0) > q_th;
    md += statistic(sigma1) <= q_th;
  }
  McDep d;
  d.p_f = binomial_estimate(fa, trials);
  d.p_m = binomial_estimate(md, trials);
  d.p_e.n = trials;
  d.p_e.p = d.p_f.p + d.p_m.p;
  const double n = static_cast<double>(trials);
  d.p_e.ci = 1.96 * std::sqrt(d.p_f.p * (1.0 - d.p_f.p) / n + d.p_m.p * (1.0 - d.p_m.p) / n);
  return d;
}

std::vector<RicianGapRow> mc_rician_gap(const ScenarioConfig& cfg, const std::vector<double>& k_grid,
                                        double q_b, double a2_ba, long samples, std::uint64_t seed) {
  const double g = threshold(cfg.r_t);
  const int n = cfg.n_b;
  std::vector<RicianGapRow> rows;
  for (std::size_t j = 0; j < k_grid.size(); ++j) {
    const double k = k_grid[j];
    const double los = std::isinf(k) ? 1.0 : std::sqrt(k / (k + 1.0));
    const double nlos = std::isinf(k) ? 0.0 : std::sqrt(1.0 / (k + 1.0));
    // E|g^H u|^2 with u along the all-ones LoS direction.
    const double mean_gain = los * los * n + nlos * nlos;
    Philox4x32 rng(seed, 100 + j);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
      std::complex<double> acc = 0.0;
      for (int a = 0; a < n; ++a) acc += std::conj(los + nlos * rng.complex_normal());
      const double gain = std::norm(acc) / n;
      hits += q_b * a2_ba * gain / cfg.sigma2_a > g;
    }
    RicianGapRow row;
    row.k = k;
    row.closed_form = std::exp(-g * cfg.sigma2_a / (q_b * a2_ba * mean_gain));
    row.mc = binomial_estimate(hits, samples);
    row.gap = row.closed_form - row.mc.p;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace uavsc

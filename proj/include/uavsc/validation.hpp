#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavsc/mc_oracle.hpp"
#include "uavsc/rng.hpp"
#include "uavsc/scenario.hpp"

namespace uavsc {

/// One randomized parameter set in the regime where the closed forms are exact.
struct MetricCase {
  double sigma2 = 1e-12;
  double r_t = 0.0, r_c = 0.0, r_w = 0.0;
  double p_ba = 0.0, p_ca = 0.0, p_bw = 0.0, p_cw = 0.0;
  int n_ant = 1;
};

MetricCase random_metric_case(Philox4x32& rng);

struct McComparison {
  std::string metric;
  double closed_form = 0.0;
  McEstimate mc;
  std::uint64_t seed = 0;
};

/// Closed form and Monte Carlo estimate of SCP0, SCP1, SOP0, SOP1 and CCP for one case.
std::vector<McComparison> compare_metrics(const MetricCase& c, long samples, std::uint64_t seed);

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckLine> checks;
  std::vector<McComparison> rows;
  std::vector<RicianGapRow> rician;

  bool ok() const;
  int failures() const;
};

/// Oracle agreement plus the detection and beamforming invariants.
ValidationReport run_validation(const ScenarioConfig& cfg, std::uint64_t seed, long samples, long dep_trials);

}  // namespace uavsc

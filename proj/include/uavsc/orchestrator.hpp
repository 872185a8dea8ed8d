#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavsc/beamform.hpp"
#include "uavsc/scenario.hpp"
#include "uavsc/trajectory.hpp"

namespace uavsc {

enum class RunMode { jotb, sotfb, h0 };

const char* mode_name(RunMode mode);

struct BcdTrace {
  RunMode mode = RunMode::jotb;
  std::vector<double> objective;  ///< R_0 (initial plan, first beamformers), R_1, ...
  std::vector<double> wall_s;     ///< cumulative seconds at each entry of `objective`
  std::vector<std::vector<double>> sca_objective;  ///< inner SCA trace per outer iteration
  std::vector<BeamformDecision> decisions;  ///< per slot 0..N (Carlo active modes)
  std::vector<H0Decision> h0_decisions;     ///< per slot 0..N (Carlo silent)
  TrajectoryPlan plan;
  int iterations = 0;
  bool converged = false;
  std::optional<std::string> error;  ///< set when a block failed; fields hold the last feasible iterate

  double final_objective() const { return objective.empty() ? 0.0 : objective.back(); }
  /// Average secret part (SCP x R_s) and covert part (CCP x R_c) over slots 1..N.
  double secret_rate(const ScenarioConfig& cfg) const;
  double covert_rate(const ScenarioConfig& cfg) const;
};

/// Weighted rate averaged over slots 1..N.
double average_rate(const std::vector<BeamformDecision>& decisions);
double average_rate(const std::vector<H0Decision>& decisions);

/// Per-slot rate models for the trajectory block.
std::vector<SlotRateModel> rate_models(const ScenarioConfig& cfg, const std::vector<BeamformDecision>& decisions);
std::vector<SlotRateModel> rate_models(const ScenarioConfig& cfg, const std::vector<H0Decision>& decisions);

/// Alternating beamformer / trajectory optimization. `sotfb` freezes the
/// beamformer block at the fixed baseline.
BcdTrace run_bcd(const ScenarioConfig& cfg, RunMode mode = RunMode::jotb);

/// Carlo silent: Bob's power per slot and the trajectory for the secret rate alone.
BcdTrace run_h0_benchmark(const ScenarioConfig& cfg);

struct ParetoRow {
  double kappa = 0.0;
  double phi_s = 0.0, phi_c = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::optional<std::string> error;
};

std::vector<ParetoRow> pareto_sweep(const ScenarioConfig& cfg, const std::vector<double>& kappas);

/// Indices of rows strictly dominated in both components by another row,
/// after dropping rows within `tie_tol` of an earlier row in both components.
std::vector<std::size_t> dominated_rows(const std::vector<ParetoRow>& rows, double tie_tol = 1e-9);

struct SotfbComparison {
  BcdTrace jotb, sotfb;
};

SotfbComparison compare_sotfb(const ScenarioConfig& cfg);

}  // namespace uavsc

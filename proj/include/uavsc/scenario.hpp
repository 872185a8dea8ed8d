#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace uavsc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// How beamformed link powers are formed from the channel.
///
/// `isotropic` uses the array-gain form N * a^2 for every link (the form the
/// closed-form trajectory objective is written in). `direction_aware` draws
/// one small-scale realization per slot and uses the projected power
/// |h^H u|^2 of the chosen unit directions.
enum class GainModel { isotropic, direction_aware };

/// Validated, immutable experiment configuration. All quantities are linear
/// SI units (W, m, s); dB values are converted once by `load_scenario`.
struct ScenarioConfig {
  // Geometry.
  Vec2 bob{200.0, 300.0};
  Vec2 carlo{200.0, 150.0};
  Vec2 willie{100.0, 400.0};
  Vec3 uav_start{0.0, 0.0, 200.0};
  Vec3 uav_end{500.0, 500.0, 200.0};
  double altitude = 200.0;

  // Radio.
  double lambda0 = 0.1;  ///< path-loss reference at 1 m
  double eta0 = 0.1;     ///< excess ground path loss
  double xi_ba = -2.0, xi_ca = -2.0, xi_bw = -3.0, xi_cw = -3.0;
  double k_ba = 1.9952623149688795;  ///< Rician factor, 3 dB
  double k_ca = 1.0;                 ///< Rician factor, 0 dB
  double sigma2_a = 1e-12;
  double sigma2_w = 1e-12;

  // Power and arrays.
  double q_b_max = 1.0;
  double q_c_max = 1e-3;
  int n_b = 2;
  int n_c = 2;

  // Rates and security.
  double r_t = 16.0;  ///< bits per channel use
  double r_c = 4.0;
  double eta_s = 0.01;
  double epsilon = 0.0;
  double kappa = 0.5;

  // Flight.
  double period = 130.0;
  int n_slots = 130;
  double v_min = 1.0;
  double v_max = 20.0;
  double a_max = 10.0;
  std::optional<double> v_start;  ///< speed pin at slot 0
  std::optional<double> v_end;    ///< speed pin at slot N

  // Detection, tolerances, sampling.
  int block_length = 100;
  double bsa_tol_rel = 1e-4;  ///< zeta1 / Q_c^max
  double bcd_tol = 1e-4;      ///< zeta2
  int max_bcd_iterations = 50;
  int max_sca_iterations = 30;
  long mc_samples = 100000;
  long mc_detection_trials = 10000;

  // Modeling switches.
  GainModel gain_model = GainModel::isotropic;
  std::uint64_t fading_seed = 1;
  double sotfb_power_fraction = 0.01;

  double slot_duration() const { return period / n_slots; }
  double bsa_tol() const { return bsa_tol_rel * q_c_max; }
};

/// Parses and validates a scenario document (YAML key/value). Throws
/// ConfigError naming the offending field.
ScenarioConfig load_scenario(std::string_view document);

/// Reads `path`; the name `paper_default` selects the bundled scenario.
ScenarioConfig load_scenario_file(const std::string& path);

/// Text of the bundled canonical scenario.
std::string_view paper_default_scenario();

/// Re-checks every invariant; throws ConfigError on the first violation.
void validate(const ScenarioConfig& cfg);

/// Serializes back to the scenario document format (linear units).
std::string to_document(const ScenarioConfig& cfg);

struct SlotGrid {
  int n_slots;
  double dt;
  std::vector<double> times;  ///< t_n = n * dt for n = 0..N
};

SlotGrid slot_times(const ScenarioConfig& cfg);

}  // namespace uavsc

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "uavsc/rng.hpp"
#include "uavsc/scenario.hpp"

namespace uavsc {

using CVec = Eigen::VectorXcd;

enum class User { bob, carlo };

/// Squared large-scale amplitude of the user -> UAV link at UAV position `uav`.
double large_scale_air(const ScenarioConfig& cfg, const Vec3& uav, User user);

/// Same link as a function of the squared horizontal distance `mu` (m^2).
double air_gain_of_mu(const ScenarioConfig& cfg, double mu, User user);

/// Squared horizontal distance between the UAV and a ground user.
double horizontal_sq(const ScenarioConfig& cfg, const Vec3& uav, User user);

/// Squared large-scale amplitude of the user -> Willie ground link.
/// Throws ConfigError when the user and Willie coincide.
double large_scale_ground(const ScenarioConfig& cfg, User user);

struct ChannelGains {
  std::vector<double> a2_ba, a2_ca;  ///< per slot 0..N
  double a2_bw = 0.0, a2_cw = 0.0;
  int n_b = 1, n_c = 1;

  double g_ba(std::size_t n) const { return n_b * a2_ba[n]; }
  double g_ca(std::size_t n) const { return n_c * a2_ca[n]; }
  double g_bw() const { return n_b * a2_bw; }
  double g_cw() const { return n_c * a2_cw; }
  std::size_t slots() const { return a2_ba.size(); }
};

ChannelGains compute_gains(const ScenarioConfig& cfg, const std::vector<Vec3>& positions);

/// Small-scale fading vectors with unit average power per antenna.
struct FadingDraw {
  CVec g_ba, g_ca;  ///< Rician
  CVec g_bw, g_cw;  ///< Rayleigh
};

/// Deterministic LoS component: all-ones, unit modulus per element.
CVec los_vector(int n);

/// Reproducible stream of fading draws. Stream `stream` of `seed` is
/// independent of every other stream.
class FadingSampler {
 public:
  FadingSampler(const ScenarioConfig& cfg, std::uint64_t seed, std::uint64_t stream = 0);

  FadingDraw next();

 private:
  CVec rician(int n, double k);
  CVec rayleigh(int n);

  int n_b_, n_c_;
  double k_ba_, k_ca_;
  Philox4x32 rng_;
};

std::vector<FadingDraw> sample_fading(const ScenarioConfig& cfg, std::uint64_t seed, std::size_t count);

/// Fixed realization used for slot `n` in direction-aware mode.
FadingDraw slot_fading(const ScenarioConfig& cfg, int n);

}  // namespace uavsc

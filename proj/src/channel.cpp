#include "uavsc/channel.hpp"

#include <cmath>

#include "uavsc/errors.hpp"

namespace uavsc {
namespace {

const Vec2& ground_position(const ScenarioConfig& cfg, User user) {
  return user == User::bob ? cfg.bob : cfg.carlo;
}

double air_exponent(const ScenarioConfig& cfg, User user) {
  return user == User::bob ? cfg.xi_ba : cfg.xi_ca;
}

}  // namespace

double horizontal_sq(const ScenarioConfig& cfg, const Vec3& uav, User user) {
  return (uav.head<2>() - ground_position(cfg, user)).squaredNorm();
}

double air_gain_of_mu(const ScenarioConfig& cfg, double mu, User user) {
  const double d2 = cfg.altitude * cfg.altitude + mu;
  const double xi = air_exponent(cfg, user);
  if (xi == -2.0) return cfg.lambda0 / d2;
  return cfg.lambda0 * std::pow(d2, 0.5 * xi);
}

double large_scale_air(const ScenarioConfig& cfg, const Vec3& uav, User user) {
  return air_gain_of_mu(cfg, horizontal_sq(cfg, uav, user), user);
}

double large_scale_ground(const ScenarioConfig& cfg, User user) {
  const double d = (ground_position(cfg, user) - cfg.willie).norm();
  if (!(d > 0.0))
    throw ConfigError(user == User::bob ? "bob_xy_m" : "carlo_xy_m", "coincides with willie_xy_m");
  const double xi = user == User::bob ? cfg.xi_bw : cfg.xi_cw;
  return cfg.eta0 * cfg.lambda0 * std::pow(d, xi);
}

ChannelGains compute_gains(const ScenarioConfig& cfg, const std::vector<Vec3>& positions) {
  ChannelGains g;
  g.n_b = cfg.n_b;
  g.n_c = cfg.n_c;
  g.a2_bw = large_scale_ground(cfg, User::bob);
  g.a2_cw = large_scale_ground(cfg, User::carlo);
  g.a2_ba.reserve(positions.size());
  g.a2_ca.reserve(positions.size());
  for (const auto& p : positions) {
    g.a2_ba.push_back(large_scale_air(cfg, p, User::bob));
    g.a2_ca.push_back(large_scale_air(cfg, p, User::carlo));
  }
  return g;
}

CVec los_vector(int n) { return CVec::Ones(n); }

FadingSampler::FadingSampler(const ScenarioConfig& cfg, std::uint64_t seed, std::uint64_t stream)
    : n_b_(cfg.n_b), n_c_(cfg.n_c), k_ba_(cfg.k_ba), k_ca_(cfg.k_ca), rng_(seed, stream) {}

CVec FadingSampler::rayleigh(int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng_.complex_normal();
  return v;
}

CVec FadingSampler::rician(int n, double k) {
  // Draw the scatter part even at K = inf so the stream layout does not depend on K.
  const CVec scatter = rayleigh(n);
  if (std::isinf(k)) return los_vector(n);
  return std::sqrt(k / (k + 1.0)) * los_vector(n) + std::sqrt(1.0 / (k + 1.0)) * scatter;
}

FadingDraw FadingSampler::next() {
  FadingDraw d;
  d.g_ba = rician(n_b_, k_ba_);
  d.g_ca = rician(n_c_, k_ca_);
  d.g_bw = rayleigh(n_b_);
  d.g_cw = rayleigh(n_c_);
  return d;
}

std::vector<FadingDraw> sample_fading(const ScenarioConfig& cfg, std::uint64_t seed, std::size_t count) {
  FadingSampler s(cfg, seed);
  std::vector<FadingDraw> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(s.next());
  return out;
}

FadingDraw slot_fading(const ScenarioConfig& cfg, int n) {
  // The ground links are slot-independent, so every slot shares stream 0's
  // Willie-side draws; the air draws come from the slot's own stream.
  FadingSampler ground(cfg, cfg.fading_seed, 0);
  FadingSampler air(cfg, cfg.fading_seed, static_cast<std::uint64_t>(n) + 1);
  FadingDraw g = ground.next();
  FadingDraw a = air.next();
  a.g_bw = g.g_bw;
  a.g_cw = g.g_cw;
  return a;
}

}  // namespace uavsc

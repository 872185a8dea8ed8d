#include "uavsc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "uavsc/errors.hpp"
#include "uavsc/units.hpp"

namespace uavsc {
namespace {

constexpr std::string_view kPaperDefault = R"(# Canonical two-user uplink scenario.
# Units are carried in the key suffix; dB values are converted at load time.
bob_xy_m: [200, 300]
carlo_xy_m: [200, 150]
willie_xy_m: [100, 400]
uav_start_xyz_m: [0, 0, 200]
uav_end_xyz_m: [500, 500, 200]
altitude_m: 200

# Path-loss reference at 1 m and excess ground loss, both -10 dB (linear 0.1).
lambda0_dB: -10
eta0_dB: -10
xi_ba: -2
xi_ca: -2
xi_bw: -3
xi_cw: -3
K_ba_dB: 3
K_ca_dB: 0
sigma2_a_dBm: -90
sigma2_w_dBm: -90

Q_b_max_dBm: 30
Q_c_max_dBm: 0
N_b: 2
N_c: 2

R_t_bpcu: 16
R_c_bpcu: 4
eta_s: 0.01
epsilon: 0
kappa: 0.5

T_s: 130
N_slots: 130
v_min_mps: 1
v_max_mps: 20
a_max_mps2: 10

block_length: 100
bsa_tol_rel: 1.0e-4
bcd_tol: 1.0e-4
)";

const std::set<std::string> kKnownKeys = {
    "bob_xy_m", "carlo_xy_m", "willie_xy_m", "uav_start_xyz_m", "uav_end_xyz_m", "altitude_m",
    "lambda0_dB", "lambda0", "eta0_dB", "eta0", "xi_ba", "xi_ca", "xi_bw", "xi_cw",
    "K_ba_dB", "K_ba", "K_ca_dB", "K_ca", "sigma2_a_dBm", "sigma2_a_W", "sigma2_w_dBm",
    "sigma2_w_W", "sigma2_dBm", "sigma2_W", "Q_b_max_dBm", "Q_b_max_W", "Q_c_max_dBm",
    "Q_c_max_W", "N_b", "N_c", "R_t_bpcu", "R_c_bpcu", "eta_s", "epsilon", "kappa", "T_s",
    "N_slots", "v_min_mps", "v_max_mps", "a_max_mps2", "v_0_mps", "v_N_mps", "block_length",
    "bsa_tol_rel", "bcd_tol", "max_bcd_iterations", "max_sca_iterations", "mc_samples",
    "mc_detection_trials", "gain_model", "fading_seed", "sotfb_power_fraction"};

class Reader {
 public:
  explicit Reader(const YAML::Node& root) : root_(root) {}

  bool has(const std::string& key) const { return static_cast<bool>(root_[key]); }

  double number(const std::string& key) const {
    const YAML::Node n = root_[key];
    if (!n) throw ConfigError(key, "missing required key");
    double v = 0.0;
    try {
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(key, "expected a number");
    }
    if (std::isnan(v)) throw ConfigError(key, "value is not finite");
    return v;
  }

  double finite(const std::string& key) const {
    const double v = number(key);
    if (!std::isfinite(v)) throw ConfigError(key, "value is not finite");
    return v;
  }

  long integer(const std::string& key) const {
    const double v = finite(key);
    if (v != std::floor(v)) throw ConfigError(key, "expected an integer");
    return static_cast<long>(v);
  }

  std::vector<double> vector(const std::string& key, std::size_t dim) const {
    const YAML::Node n = root_[key];
    if (!n) throw ConfigError(key, "missing required key");
    if (!n.IsSequence() || n.size() != dim)
      throw ConfigError(key, "expected a list of " + std::to_string(dim) + " numbers");
    std::vector<double> out;
    for (const auto& item : n) {
      double v = 0.0;
      try {
        v = item.as<double>();
      } catch (const YAML::Exception&) {
        throw ConfigError(key, "expected a number in list");
      }
      if (!std::isfinite(v)) throw ConfigError(key, "value is not finite");
      out.push_back(v);
    }
    return out;
  }

  // Either `<base>_dBm` or `<base>_W`.
  double power(const std::string& base) const {
    if (has(base + "_dBm")) return units::dbm_to_watt(finite(base + "_dBm"));
    if (has(base + "_W")) return finite(base + "_W");
    throw ConfigError(base + "_dBm", "missing required key");
  }

  // Either `<base>_dB` or the bare linear `<base>`.
  double ratio(const std::string& base, bool allow_inf = false) const {
    if (has(base + "_dB")) {
      const double db = allow_inf ? number(base + "_dB") : finite(base + "_dB");
      return units::db_to_linear(db);
    }
    if (has(base)) return allow_inf ? number(base) : finite(base);
    throw ConfigError(base + "_dB", "missing required key");
  }

 private:
  const YAML::Node& root_;
};

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(field, what);
}

}  // namespace

std::string_view paper_default_scenario() { return kPaperDefault; }

ScenarioConfig load_scenario(std::string_view document) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", std::string("parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("<document>", "expected a key/value mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kKnownKeys.contains(key)) throw ConfigError(key, "unknown key");
  }

  const Reader r(root);
  ScenarioConfig c;
  auto xy = [&](const char* key) {
    const auto v = r.vector(key, 2);
    return Vec2{v[0], v[1]};
  };
  auto xyz = [&](const char* key) {
    const auto v = r.vector(key, 3);
    return Vec3{v[0], v[1], v[2]};
  };
  c.bob = xy("bob_xy_m");
  c.carlo = xy("carlo_xy_m");
  c.willie = xy("willie_xy_m");
  c.uav_start = xyz("uav_start_xyz_m");
  c.uav_end = xyz("uav_end_xyz_m");
  c.altitude = r.finite("altitude_m");

  c.lambda0 = r.ratio("lambda0");
  c.eta0 = r.ratio("eta0");
  c.xi_ba = r.finite("xi_ba");
  c.xi_ca = r.finite("xi_ca");
  c.xi_bw = r.finite("xi_bw");
  c.xi_cw = r.finite("xi_cw");
  c.k_ba = r.ratio("K_ba", true);
  c.k_ca = r.ratio("K_ca", true);
  if (r.has("sigma2_dBm") || r.has("sigma2_W")) {
    c.sigma2_a = c.sigma2_w = r.power("sigma2");
  }
  if (r.has("sigma2_a_dBm") || r.has("sigma2_a_W") || !(r.has("sigma2_dBm") || r.has("sigma2_W")))
    c.sigma2_a = r.power("sigma2_a");
  if (r.has("sigma2_w_dBm") || r.has("sigma2_w_W") || !(r.has("sigma2_dBm") || r.has("sigma2_W")))
    c.sigma2_w = r.power("sigma2_w");

  c.q_b_max = r.power("Q_b_max");
  c.q_c_max = r.power("Q_c_max");
  c.n_b = static_cast<int>(r.integer("N_b"));
  c.n_c = static_cast<int>(r.integer("N_c"));

  c.r_t = r.finite("R_t_bpcu");
  c.r_c = r.finite("R_c_bpcu");
  c.eta_s = r.finite("eta_s");
  c.epsilon = r.finite("epsilon");
  c.kappa = r.finite("kappa");

  c.period = r.finite("T_s");
  c.n_slots = static_cast<int>(r.integer("N_slots"));
  c.v_min = r.finite("v_min_mps");
  c.v_max = r.finite("v_max_mps");
  c.a_max = r.finite("a_max_mps2");
  if (r.has("v_0_mps")) c.v_start = r.finite("v_0_mps");
  if (r.has("v_N_mps")) c.v_end = r.finite("v_N_mps");

  c.block_length = static_cast<int>(r.integer("block_length"));
  if (r.has("bsa_tol_rel")) c.bsa_tol_rel = r.finite("bsa_tol_rel");
  if (r.has("bcd_tol")) c.bcd_tol = r.number("bcd_tol");
  if (r.has("max_bcd_iterations")) c.max_bcd_iterations = static_cast<int>(r.integer("max_bcd_iterations"));
  if (r.has("max_sca_iterations")) c.max_sca_iterations = static_cast<int>(r.integer("max_sca_iterations"));
  if (r.has("mc_samples")) c.mc_samples = r.integer("mc_samples");
  if (r.has("mc_detection_trials")) c.mc_detection_trials = r.integer("mc_detection_trials");
  if (r.has("gain_model")) {
    const auto mode = root["gain_model"].as<std::string>();
    if (mode == "isotropic")
      c.gain_model = GainModel::isotropic;
    else if (mode == "direction_aware")
      c.gain_model = GainModel::direction_aware;
    else
      throw ConfigError("gain_model", "expected 'isotropic' or 'direction_aware'");
  }
  if (r.has("fading_seed")) {
    const long seed = r.integer("fading_seed");
    require(seed >= 0, "fading_seed", "must be nonnegative");
    c.fading_seed = static_cast<std::uint64_t>(seed);
  }
  if (r.has("sotfb_power_fraction")) c.sotfb_power_fraction = r.finite("sotfb_power_fraction");

  validate(c);
  return c;
}

void validate(const ScenarioConfig& c) {
  require(c.altitude > 0.0, "altitude_m", "must be positive");
  require(c.uav_start.z() == c.altitude, "uav_start_xyz_m", "z must equal altitude_m");
  require(c.uav_end.z() == c.altitude, "uav_end_xyz_m", "z must equal altitude_m");
  require(c.lambda0 > 0.0 && std::isfinite(c.lambda0), "lambda0", "must be positive");
  require(c.eta0 > 0.0 && std::isfinite(c.eta0), "eta0", "must be positive");
  require(c.k_ba >= 0.0, "K_ba", "must be nonnegative");
  require(c.k_ca >= 0.0, "K_ca", "must be nonnegative");
  require(c.sigma2_a > 0.0 && std::isfinite(c.sigma2_a), "sigma2_a", "must be positive");
  require(c.sigma2_w > 0.0 && std::isfinite(c.sigma2_w), "sigma2_w", "must be positive");
  require(c.q_b_max > 0.0 && std::isfinite(c.q_b_max), "Q_b_max", "must be positive");
  require(c.q_c_max > 0.0 && std::isfinite(c.q_c_max), "Q_c_max", "must be positive");
  require(c.n_b >= 1, "N_b", "must be at least 1");
  require(c.n_c >= 1, "N_c", "must be at least 1");
  require(c.r_t > 0.0, "R_t_bpcu", "must be positive");
  require(c.r_c > 0.0, "R_c_bpcu", "must be positive");
  require(c.eta_s > 0.0 && c.eta_s <= 1.0, "eta_s", "must lie in (0, 1]");
  require(c.epsilon >= 0.0 && c.epsilon < 1.0, "epsilon", "must lie in [0, 1)");
  require(c.kappa > 0.0 && c.kappa < 1.0, "kappa", "must lie strictly inside (0, 1)");
  require(c.period > 0.0, "T_s", "must be positive");
  require(c.n_slots >= 2, "N_slots", "must be at least 2");
  require(c.v_min > 0.0, "v_min_mps", "must be positive");
  require(c.v_min <= c.v_max, "v_max_mps", "must be at least v_min_mps");
  require(c.a_max > 0.0, "a_max_mps2", "must be positive");
  if (c.v_start)
    require(*c.v_start >= c.v_min && *c.v_start <= c.v_max, "v_0_mps", "must lie in [v_min, v_max]");
  if (c.v_end)
    require(*c.v_end >= c.v_min && *c.v_end <= c.v_max, "v_N_mps", "must lie in [v_min, v_max]");
  require(c.block_length >= 1, "block_length", "must be at least 1");
  require(c.bsa_tol_rel > 0.0 && c.bsa_tol_rel < 1.0, "bsa_tol_rel", "must lie in (0, 1)");
  require(c.bcd_tol > 0.0, "bcd_tol", "must be positive");
  require(c.max_bcd_iterations >= 1, "max_bcd_iterations", "must be at least 1");
  require(c.max_sca_iterations >= 1, "max_sca_iterations", "must be at least 1");
  require(c.mc_samples >= 1, "mc_samples", "must be at least 1");
  require(c.mc_detection_trials >= 1, "mc_detection_trials", "must be at least 1");
  require(c.sotfb_power_fraction > 0.0 && c.sotfb_power_fraction <= 1.0, "sotfb_power_fraction",
          "must lie in (0, 1]");
  const double dt = c.slot_duration();
  require(std::abs(dt * c.n_slots - c.period) <= 1e-12 * c.period, "N_slots",
          "slot duration does not tile the flight period");
}

ScenarioConfig load_scenario_file(const std::string& path) {
  if (path == "paper_default") return load_scenario(kPaperDefault);
  std::ifstream in(path);
  if (!in) throw ConfigError("--scenario", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string to_document(const ScenarioConfig& c) {
  std::ostringstream o;
  o.precision(17);
  auto pair = [](const Vec2& v) {
    std::ostringstream s;
    s.precision(17);
    s << "[" << v.x() << ", " << v.y() << "]";
    return s.str();
  };
  auto triple = [](const Vec3& v) {
    std::ostringstream s;
    s.precision(17);
    s << "[" << v.x() << ", " << v.y() << ", " << v.z() << "]";
    return s.str();
  };
  o << "bob_xy_m: " << pair(c.bob) << "\n"
    << "carlo_xy_m: " << pair(c.carlo) << "\n"
    << "willie_xy_m: " << pair(c.willie) << "\n"
    << "uav_start_xyz_m: " << triple(c.uav_start) << "\n"
    << "uav_end_xyz_m: " << triple(c.uav_end) << "\n"
    << "altitude_m: " << c.altitude << "\n"
    << "lambda0: " << c.lambda0 << "\n"
    << "eta0: " << c.eta0 << "\n"
    << "xi_ba: " << c.xi_ba << "\nxi_ca: " << c.xi_ca << "\nxi_bw: " << c.xi_bw
    << "\nxi_cw: " << c.xi_cw << "\n";
  auto kval = [](double k) {
    std::ostringstream s;
    s.precision(17);
    if (std::isinf(k)) s << ".inf"; else s << k;
    return s.str();
  };
  o << "K_ba: " << kval(c.k_ba) << "\nK_ca: " << kval(c.k_ca)
    << "\nsigma2_a_W: " << c.sigma2_a << "\nsigma2_w_W: " << c.sigma2_w << "\n"
    << "Q_b_max_W: " << c.q_b_max << "\nQ_c_max_W: " << c.q_c_max << "\n"
    << "N_b: " << c.n_b << "\nN_c: " << c.n_c << "\n"
    << "R_t_bpcu: " << c.r_t << "\nR_c_bpcu: " << c.r_c << "\n"
    << "eta_s: " << c.eta_s << "\nepsilon: " << c.epsilon << "\nkappa: " << c.kappa << "\n"
    << "T_s: " << c.period << "\nN_slots: " << c.n_slots << "\n"
    << "v_min_mps: " << c.v_min << "\nv_max_mps: " << c.v_max << "\na_max_mps2: " << c.a_max << "\n";
  if (c.v_start) o << "v_0_mps: " << *c.v_start << "\n";
  if (c.v_end) o << "v_N_mps: " << *c.v_end << "\n";
  o << "block_length: " << c.block_length << "\n"
    << "bsa_tol_rel: " << c.bsa_tol_rel << "\nbcd_tol: " << c.bcd_tol << "\n"
    << "max_bcd_iterations: " << c.max_bcd_iterations << "\n"
    << "max_sca_iterations: " << c.max_sca_iterations << "\n"
    << "mc_samples: " << c.mc_samples << "\nmc_detection_trials: " << c.mc_detection_trials << "\n"
    << "gain_model: " << (c.gain_model == GainModel::isotropic ? "isotropic" : "direction_aware") << "\n"
    << "fading_seed: " << c.fading_seed << "\n"
    << "sotfb_power_fraction: " << c.sotfb_power_fraction << "\n";
  return o.str();
}

SlotGrid slot_times(const ScenarioConfig& cfg) {
  if (cfg.n_slots < 2) throw ConfigError("N_slots", "must be at least 2");
  SlotGrid g{cfg.n_slots, cfg.slot_duration(), {}};
  g.times.reserve(static_cast<std::size_t>(cfg.n_slots) + 1);
  for (int n = 0; n <= cfg.n_slots; ++n) g.times.push_back(n * g.dt);
  return g;
}

}  // namespace uavsc

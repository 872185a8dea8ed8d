#include "uavsc/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "json.hpp"

#include "uavsc/beamform.hpp"
#include "uavsc/channel.hpp"
#include "uavsc/csv.hpp"
#include "uavsc/errors.hpp"
#include "uavsc/orchestrator.hpp"
#include "uavsc/scenario.hpp"
#include "uavsc/secmetrics.hpp"
#include "uavsc/trajectory.hpp"
#include "uavsc/units.hpp"
#include "uavsc/validation.hpp"

namespace uavsc {
namespace {

using Clock = std::chrono::steady_clock;

class Run {
 public:
  Run(std::string command, const CommandOptions& opt) : start_(Clock::now()) {
    m_.command = std::move(command);
    m_.scenario = opt.scenario;
    m_.seed = opt.seed;
    m_.out = opt.out;
  }

  void write(const std::string& name, const std::string& content) {
    write_file_atomic(m_.out / name, content);
    m_.files.push_back(name);
  }

  // Snapshot and manifest go last so the manifest lists every file.
  RunManifest finish(const ScenarioConfig& cfg) {
    write("scenario.yaml", to_document(cfg));
    m_.elapsed_s = std::chrono::duration<double>(Clock::now() - start_).count();
    m_.files.push_back("manifest.json");
    write_file_atomic(m_.out / "manifest.json", m_.to_json());
    return m_;
  }

 private:
  RunManifest m_;
  Clock::time_point start_;
};

ScenarioConfig load(const CommandOptions& opt) {
  ScenarioConfig cfg = load_scenario_file(opt.scenario);
  if (opt.samples > 0) cfg.mc_samples = opt.samples;
  if (opt.kappa) {
    cfg.kappa = *opt.kappa;
    validate(cfg);
  }
  if (opt.period) {
    if (!(*opt.period > 0.0)) throw ConfigError("period", "must be positive");
    const double dt = cfg.slot_duration();
    cfg.n_slots = static_cast<int>(std::lround(*opt.period / dt));
    cfg.period = *opt.period;
    if (std::abs(cfg.n_slots * dt - cfg.period) > 1e-9 * cfg.period)
      throw ConfigError("period", "must be a multiple of the slot duration");
    validate(cfg);
  }
  return cfg;
}

std::vector<double> sweep(const CommandOptions& opt, double lo, double hi, const char* what) {
  const double a = opt.from.value_or(lo), b = opt.to.value_or(hi);
  if (!std::isfinite(a) || !std::isfinite(b) || b < a || opt.points < 1)
    throw ConfigError(what, "empty or invalid sweep range");
  if (opt.points > 1 && a == b) throw ConfigError(what, "empty or invalid sweep range");
  std::vector<double> xs;
  for (int i = 0; i < opt.points; ++i) xs.push_back(opt.points == 1 ? a : a + (b - a) * i / (opt.points - 1));
  return xs;
}

// Reference slot on the straight-line plan.
SlotChannel reference_slot(const ScenarioConfig& cfg, int slot) {
  if (slot < 0 || slot > cfg.n_slots) throw ConfigError("slot", "outside 0..N");
  const TrajectoryPlan plan = initial_plan(cfg);
  return slot_channel(cfg, compute_gains(cfg, plan.positions()), static_cast<std::size_t>(slot));
}

CommandResult ok(RunManifest m) {
  CommandResult r;
  r.manifest = std::move(m);
  return r;
}

std::vector<std::string> security_header() {
  auto h = security_csv_header();
  h.insert(h.begin(), "slot");
  return h;
}

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["out"] = out.string();
  j["files"] = files;
  j["elapsed_s"] = elapsed_s;
  return j.dump(2) + "\n";
}

CommandResult cmd_metrics(const CommandOptions& opt) {
  const ScenarioConfig base = load(opt);
  Run run("metrics", opt);
  const std::string fig = opt.figure;

  if (fig == "dep") {
    // Carlo at full power without the covertness budget, so Willie's two
    // hypotheses differ.
    const SlotChannel ch = reference_slot(base, opt.slot);
    const double p_bw0 = base.q_b_max * ch.a2_bw * base.n_b;
    const double p_cw = base.q_c_max * ch.a2_cw * base.n_c;
    const double s0 = p_bw0 + base.sigma2_w, s1 = s0 + p_cw;
    for (int m : {50, 100}) {
      DetectionStats st = detection_stats(p_bw0, p_bw0, p_cw, base.sigma2_w, m);
      CsvTable t({"q_th", "p_f", "p_m", "p_e"});
      for (double q : sweep(opt, 0.5 * s0, 1.5 * s1, "q_th")) {
        if (!(q > 0.0)) throw ConfigError("q_th", "threshold must be positive");
        const DepResult r = dep(st, q);
        t.add({q, r.p_f, r.p_m, r.p_e});
      }
      run.write("dep_m" + std::to_string(m) + ".csv", t.str());
    }
    return ok(run.finish(base));
  }

  if (fig != "scp" && fig != "sop" && fig != "ccp") throw ConfigError("figure", "unknown figure '" + fig + "'");
  const double lo = 0.0, hi = fig == "ccp" ? 15.0 : 30.0;
  const std::vector<double> xs = sweep(opt, lo, hi, fig == "scp" ? "R_t" : fig == "sop" ? "R_w" : "R_c");
  for (int n_ant : {2, 4}) {
    ScenarioConfig cfg = base;
    if (fig == "ccp")
      cfg.n_c = n_ant;
    else
      cfg.n_b = n_ant;
    const SlotChannel ch = reference_slot(cfg, opt.slot);
    const SlotLinks links = slot_links(cfg, ch, 0.0, BeamPolicy::jotb);
    const double q_c = covert_power_limit(cfg, links);
    const double q_b = covert_bob_power(cfg, links, q_c);
    const double p_ba = q_b * links.a2_ba * links.rho.ba, p_ca = q_c * links.a2_ca * links.rho.ca;
    const double p_bw = q_b * links.a2_bw * links.rho.bw, p_cw = q_c * links.a2_cw * links.rho.cw;
    const double p_bw0 = cfg.q_b_max * links.a2_bw * links.rho.bw;
    if (fig == "scp") {
      CsvTable t({"r_t", "scp0", "scp1"});
      for (double r : xs) t.add({r, scp_h0(cfg.q_b_max * links.a2_ba * links.rho.ba, cfg.sigma2_a, r),
                                 scp_h1(p_ba, p_ca, cfg.sigma2_a, r)});
      run.write("scp_nb" + std::to_string(n_ant) + ".csv", t.str());
    } else if (fig == "sop") {
      CsvTable t({"r_w", "sop0", "sop1"});
      for (double r : xs) t.add({r, sop_h0(p_bw0, cfg.sigma2_w, r), sop_h1(p_bw, p_cw, cfg.sigma2_w, r)});
      run.write("sop_nb" + std::to_string(n_ant) + ".csv", t.str());
    } else {
      CsvTable t({"r_c", "ccp"});
      for (double r : xs) t.add({r, ccp(p_ba, p_ca, cfg.sigma2_a, cfg.r_t, r)});
      run.write("ccp_nc" + std::to_string(n_ant) + ".csv", t.str());
    }
  }
  return ok(run.finish(base));
}

CommandResult cmd_rate_vs_power(const CommandOptions& opt) {
  const ScenarioConfig cfg = load(opt);
  Run run("rate-vs-power", opt);
  const SlotChannel ch = reference_slot(cfg, opt.slot);
  if (opt.state == "h0") {
    CsvTable t({"q_b", "r_w", "scp0", "rate"});
    for (double q : sweep(opt, 0.0, cfg.q_b_max, "Q_b")) {
      if (q < 0.0 || q > cfg.q_b_max) throw ConfigError("Q_b", "outside [0, Q_b_max]");
      const H0Decision d = evaluate_h0(cfg, ch, q);
      t.add({q, d.r_w, d.scp0, d.rate});
    }
    run.write("rate_vs_power_h0.csv", t.str());
    const H0Decision best = design_h0_slot(cfg, ch);
    CsvTable o({"q_b", "rate"});
    o.add({best.q_b, best.rate});
    run.write("optimum_h0.csv", o.str());
  } else if (opt.state == "h1") {
    const SlotLinks links = slot_links(cfg, ch, 0.0, BeamPolicy::jotb);
    const double limit = covert_power_limit(cfg, links);
    CsvTable t({"q_c", "q_b", "r_w", "scp1", "ccp", "rate"});
    for (double q : sweep(opt, 0.0, limit, "Q_c")) {
      if (q < 0.0 || q > limit) throw ConfigError("Q_c", "outside [0, covert power limit]");
      const SlotEval e = evaluate_slot(cfg, links, q);
      t.add({q, e.q_b, e.redundancy.r_w, e.scp1, e.ccp, e.rate});
    }
    run.write("rate_vs_power_h1.csv", t.str());
    const BsaResult best = bsa_optimize(cfg, links);
    CsvTable o({"q_c", "rate", "iterations"});
    o.add({best.x, best.value, static_cast<double>(best.iterations)});
    run.write("optimum_h1.csv", o.str());
  } else {
    throw ConfigError("state", "must be h0 or h1");
  }
  return ok(run.finish(cfg));
}

CommandResult cmd_optimize(const CommandOptions& opt) {
  const ScenarioConfig cfg = load(opt);
  RunMode mode;
  if (opt.mode == "jotb")
    mode = RunMode::jotb;
  else if (opt.mode == "sotfb")
    mode = RunMode::sotfb;
  else if (opt.mode == "h0")
    mode = RunMode::h0;
  else
    throw ConfigError("mode", "must be jotb, sotfb or h0");

  Run run("optimize", opt);
  const BcdTrace tr = mode == RunMode::h0 ? run_h0_benchmark(cfg) : run_bcd(cfg, mode);

  CsvTable trace({"iteration", "objective", "wall_s"});
  for (std::size_t k = 0; k < tr.objective.size(); ++k)
    trace.add({static_cast<double>(k), tr.objective[k], tr.wall_s[k]});
  run.write("trace.csv", trace.str());

  const TrajectoryPlan& plan = tr.plan;
  CsvTable traj({"slot", "t", "x", "y", "z", "vx", "vy", "ax", "ay"});
  for (int n = 0; n <= plan.slots(); ++n)
    traj.add({static_cast<double>(n), n * plan.dt, plan.pos[n].x(), plan.pos[n].y(), plan.altitude, plan.vel[n].x(),
              plan.vel[n].y(), plan.acc[n].x(), plan.acc[n].y()});
  run.write("trajectory.csv", traj.str());

  if (mode == RunMode::h0) {
    CsvTable bf({"slot", "q_b", "r_w", "r_s", "scp0", "sop0", "rate"});
    for (std::size_t n = 0; n < tr.h0_decisions.size(); ++n) {
      const auto& d = tr.h0_decisions[n];
      bf.add({static_cast<double>(n), d.q_b, d.r_w, d.r_s, d.scp0, d.sop0, d.rate});
    }
    run.write("beamformers.csv", bf.str());
  } else {
    CsvTable bf({"slot", "q_b", "q_c", "theta", "rho_ba", "rho_ca", "rho_bw", "rho_cw", "r_w", "r_s", "scp1", "ccp",
                 "rate"});
    CsvTable sec(security_header());
    const ChannelGains gains = compute_gains(cfg, plan.positions());
    const RateTargets targets{cfg.r_t, cfg.r_c, cfg.eta_s, cfg.kappa, cfg.block_length};
    const BeamPolicy policy = mode == RunMode::sotfb ? BeamPolicy::sotfb : BeamPolicy::jotb;
    for (std::size_t n = 0; n < tr.decisions.size(); ++n) {
      const auto& d = tr.decisions[n];
      bf.add({static_cast<double>(n), d.q_b, d.q_c, d.theta, d.rho.ba, d.rho.ca, d.rho.bw, d.rho.cw, d.r_w, d.r_s,
              d.scp1, d.ccp, d.rate});
      if (n < gains.slots()) {
        const SlotEval e = evaluate_slot(cfg, slot_links(cfg, slot_channel(cfg, gains, n), d.theta, policy), d.q_c);
        auto row = security_csv_row(evaluate_security(e.powers, targets));
        row.insert(row.begin(), static_cast<double>(n));
        sec.add(row);
      }
    }
    run.write("beamformers.csv", bf.str());
    run.write("security.csv", sec.str());
  }

  CommandResult res = ok(run.finish(cfg));
  if (tr.error) {
    res.optimization_failed = true;
    res.message = *tr.error;
  }
  return res;
}

CommandResult cmd_pareto(const CommandOptions& opt) {
  CommandOptions o = opt;
  o.kappa.reset();
  const ScenarioConfig cfg = load(o);
  std::vector<double> kappas;
  if (opt.kappa) {
    kappas.push_back(*opt.kappa);
  } else {
    CommandOptions s = opt;
    if (!s.from && !s.to && s.points == CommandOptions{}.points) s.points = 9;
    kappas = sweep(s, 0.1, 0.9, "kappa");
  }
  for (double k : kappas)
    if (!(k > 0.0 && k < 1.0)) throw ConfigError("kappa", "must lie strictly inside (0, 1)");

  Run run("pareto", opt);
  const auto rows = pareto_sweep(cfg, kappas);
  const auto dom = dominated_rows(rows);
  CsvTable t({"kappa", "phi_s", "phi_c", "objective", "iterations", "dominated", "error"});
  CommandResult res;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool d = std::find(dom.begin(), dom.end(), i) != dom.end();
    std::string err = r.error.value_or("");
    for (char& c : err)
      if (c == ',' || c == '\n') c = ' ';
    t.add_text({format_number(r.kappa), format_number(r.phi_s), format_number(r.phi_c), format_number(r.objective),
                std::to_string(r.iterations), d ? "1" : "0", err});
    if (r.error) {
      res.optimization_failed = true;
      res.message = *r.error;
    }
  }
  run.write("pareto.csv", t.str());
  res.manifest = run.finish(cfg);
  return res;
}

CommandResult cmd_validate(const CommandOptions& opt, std::ostream& log) {
  const ScenarioConfig cfg = load(opt);
  long samples = opt.samples > 0 ? opt.samples : cfg.mc_samples;
  long trials = cfg.mc_detection_trials;
  if (opt.quick) {
    // The 95% half-widths scale with the smaller counts.
    samples = std::min<long>(samples, 10000);
    trials = std::min<long>(trials, 2000);
  }
  Run run("validate", opt);
  const ValidationReport rep = run_validation(cfg, opt.seed, samples, trials);

  CsvTable checks({"check", "pass", "detail"});
  for (const auto& c : rep.checks) {
    log << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "\n";
    std::string detail = c.detail;
    for (char& ch : detail)
      if (ch == ',') ch = ';';
    checks.add_text({c.name, c.pass ? "1" : "0", detail});
  }
  run.write("checks.csv", checks.str());

  CsvTable rows({"metric", "closed_form", "mc", "ci", "covers", "seed"});
  for (const auto& r : rep.rows)
    rows.add_text({r.metric, format_number(r.closed_form), format_number(r.mc.p), format_number(r.mc.ci),
                   r.mc.covers(r.closed_form) ? "1" : "0", std::to_string(r.seed)});
  run.write("oracle.csv", rows.str());

  CsvTable ric({"k", "closed_form", "mc", "ci", "gap"});
  for (const auto& r : rep.rician) ric.add({r.k, r.closed_form, r.mc.p, r.mc.ci, r.gap});
  run.write("rician_gap.csv", ric.str());

  CommandResult res = ok(run.finish(cfg));
  res.failures = rep.failures();
  return res;
}

CommandResult cmd_gains(const CommandOptions& opt) {
  const ScenarioConfig cfg = load(opt);
  Run run("gains", opt);
  const TrajectoryPlan plan = initial_plan(cfg);
  const ChannelGains g = compute_gains(cfg, plan.positions());
  CsvTable t({"slot", "x", "y", "a2_ba", "a2_ca", "a2_bw", "a2_cw"});
  for (std::size_t n = 0; n < g.slots(); ++n)
    t.add({static_cast<double>(n), plan.pos[n].x(), plan.pos[n].y(), g.a2_ba[n], g.a2_ca[n], g.a2_bw, g.a2_cw});
  run.write("gains.csv", t.str());
  return ok(run.finish(cfg));
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err) {
  try {
    CommandResult res;
    if (name == "metrics")
      res = cmd_metrics(opt);
    else if (name == "rate-vs-power")
      res = cmd_rate_vs_power(opt);
    else if (name == "optimize")
      res = cmd_optimize(opt);
    else if (name == "pareto")
      res = cmd_pareto(opt);
    else if (name == "validate")
      res = cmd_validate(opt, log);
    else if (name == "gains")
      res = cmd_gains(opt);
    else
      throw ConfigError("command", "unknown command '" + name + "'");

    for (const auto& f : res.manifest.files) log << (res.manifest.out / f).string() << "\n";
    if (res.failures > 0) {
      err << res.failures << " validation check(s) failed\n";
      return 3;
    }
    if (res.optimization_failed) {
      err << "optimization failed: " << res.message << "\n";
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const OptimizationError& e) {
    err << "optimization failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // Unwritable output paths and similar setup problems.
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace uavsc

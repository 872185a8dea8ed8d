#include <iostream>

#include "CLI11.hpp"

#include "uavsc/commands.hpp"

namespace {

void common(CLI::App* sub, uavsc::CommandOptions& o) {
  sub->add_option("--scenario", o.scenario, "scenario file or 'paper_default'");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "base seed");
}

void sweep(CLI::App* sub, uavsc::CommandOptions& o) {
  sub->add_option("--from", o.from, "sweep start");
  sub->add_option("--to", o.to, "sweep end");
  sub->add_option("--points", o.points, "sweep points");
  sub->add_option("--slot", o.slot, "reference slot on the straight-line plan");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert and secret uplink to a fixed-wing UAV relay"};
  app.require_subcommand(1);
  uavsc::CommandOptions o;

  auto* metrics = app.add_subcommand("metrics", "closed-form metric sweeps");
  common(metrics, o);
  sweep(metrics, o);
  metrics->add_option("--figure", o.figure, "scp | sop | ccp | dep")
      ->check(CLI::IsMember({"scp", "sop", "ccp", "dep"}));

  auto* rvp = app.add_subcommand("rate-vs-power", "slot rate against transmit power");
  common(rvp, o);
  sweep(rvp, o);
  rvp->add_option("--state", o.state, "h0 | h1")->check(CLI::IsMember({"h0", "h1"}));

  auto* opt = app.add_subcommand("optimize", "beamformer and trajectory optimization");
  common(opt, o);
  opt->add_option("--mode", o.mode, "jotb | sotfb | h0")->check(CLI::IsMember({"jotb", "sotfb", "h0"}));
  opt->add_option("--kappa", o.kappa, "secret-rate weight");
  opt->add_option("--period", o.period, "flight period (s), slot duration kept");

  auto* pareto = app.add_subcommand("pareto", "kappa sweep of the secret/covert trade-off");
  common(pareto, o);
  pareto->add_option("--kappa", o.kappa, "single weight instead of a sweep");
  pareto->add_option("--from", o.from, "first kappa");
  pareto->add_option("--to", o.to, "last kappa");
  pareto->add_option("--points", o.points, "number of kappa values");

  auto* val = app.add_subcommand("validate", "Monte Carlo agreement and invariant checks");
  common(val, o);
  val->add_option("--samples", o.samples, "Monte Carlo samples per estimate");
  val->add_flag("--quick", o.quick, "reduced sample counts");

  auto* gains = app.add_subcommand("gains", "per-slot large-scale gains of the straight-line plan");
  common(gains, o);

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  return uavsc::run_command(name, o, std::cout, std::cerr);
}

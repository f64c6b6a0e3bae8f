// Experiment driver: plans coverage formations, simulates offload traffic,
// and sweeps deadlines, channel error rates, and instance sizes.
//
// An ExperimentSpec is assembled in three layers: built-in defaults, then a
// JSON spec file (--spec), then explicit command-line flags.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uavplan/cli.hpp"

namespace {

std::string slurp(const std::string& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ok = false;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  ok = !in.bad();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "UAV edge-offloading planner: joint placement, routing, and "
      "image-compression planning with a deterministic network simulator"};
  app.name("uavplan");

  std::string command;
  app.add_option("command", command,
                 "plan | simulate | sweep | gen-scenario | profile-check | "
                 "gen-profile");

  std::string spec_path;
  uavplan::ExperimentSpec flags;
  app.add_option("--spec", spec_path, "JSON spec file with defaults for any flag");
  auto* o_scenario =
      app.add_option("--scenario", flags.scenario_path, "scenario JSON file");
  auto* o_profile =
      app.add_option("--profile", flags.profile_path, "quality profile CSV file");
  auto* o_out = app.add_option("--out", flags.out_path, "output file (default stdout)");
  auto* o_planner =
      app.add_option("--planner", flags.planners,
                     "planner labels: greedy, exact, stba-h, stba-m, stba-l")
          ->delimiter(',');
  auto* o_alpha =
      app.add_option("--alpha", flags.alpha, "greedy cost mix in [0,1] (default 0.5)");
  auto* o_axis =
      app.add_option("--axis", flags.axis, "sweep axis: delta, psi, targets, uavs");
  auto* o_values = app.add_option("--values", flags.values, "sweep values")
                       ->delimiter(',');
  auto* o_threads =
      app.add_option("--threads", flags.threads, "parallel simulations (default 1)");
  auto* o_duration = app.add_option("--duration", flags.sim.duration,
                                    "simulated task-generation window, s (default 60)");
  auto* o_seed =
      app.add_option("--seed", flags.sim.seed, "simulation random seed (default 1)");
  auto* o_retries = app.add_option("--retries", flags.sim.retry_limit,
                                   "per-hop retransmission limit (default 7)");
  auto* o_overhead = app.add_option("--overhead", flags.sim.per_hop_overhead,
                                    "per-hop forwarding overhead, s (default 0.0005)");
  auto* o_tmpl = app.add_option("--template", flags.tmpl,
                                "generator template: urban, multi, scalability");
  auto* o_targets =
      app.add_option("--targets", flags.targets, "generated target count");
  auto* o_uavs =
      app.add_option("--uavs", flags.uavs, "generated fleet size (0 = template default)");
  auto* o_gen_seed =
      app.add_option("--gen-seed", flags.gen_seed, "scenario generation seed");
  auto* o_label = app.add_option(
      "--label", flags.label,
      "target label, or 'mixed' to cycle the six built-in labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  uavplan::ExperimentSpec spec;
  if (!spec_path.empty()) {
    bool ok = true;
    const std::string text = slurp(spec_path, ok);
    if (!ok) {
      std::cerr << "io error: cannot read spec file " << spec_path << "\n";
      return 3;
    }
    try {
      spec = uavplan::spec_from_json(text);
    } catch (const uavplan::ParseError& e) {
      std::cerr << "input error: " << e.what() << "\n";
      return 3;
    }
  }

  if (!command.empty()) spec.command = command;
  if (o_scenario->count()) spec.scenario_path = flags.scenario_path;
  if (o_profile->count()) spec.profile_path = flags.profile_path;
  if (o_out->count()) spec.out_path = flags.out_path;
  if (o_planner->count()) spec.planners = flags.planners;
  if (o_alpha->count()) spec.alpha = flags.alpha;
  if (o_axis->count()) spec.axis = flags.axis;
  if (o_values->count()) spec.values = flags.values;
  if (o_threads->count()) spec.threads = flags.threads;
  if (o_duration->count()) spec.sim.duration = flags.sim.duration;
  if (o_seed->count()) spec.sim.seed = flags.sim.seed;
  if (o_retries->count()) spec.sim.retry_limit = flags.sim.retry_limit;
  if (o_overhead->count()) spec.sim.per_hop_overhead = flags.sim.per_hop_overhead;
  if (o_tmpl->count()) spec.tmpl = flags.tmpl;
  if (o_targets->count()) spec.targets = flags.targets;
  if (o_uavs->count()) spec.uavs = flags.uavs;
  if (o_gen_seed->count()) spec.gen_seed = flags.gen_seed;
  if (o_label->count()) spec.label = flags.label;

  return uavplan::run(spec);
}

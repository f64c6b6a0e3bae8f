#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavplan/sim.hpp"

// Command-line experiment driver. A single ExperimentSpec describes one run;
// it can be assembled from command-line flags, from a JSON spec file, or
// both (explicit flags override spec-file values, which override defaults).

namespace uavplan {

struct ExperimentSpec {
  // One of: plan, simulate, sweep, gen-scenario, profile-check, gen-profile.
  std::string command;

  std::string scenario_path;  // scenario JSON; empty => generate from knobs
  std::string profile_path;   // profile CSV; empty => built-in fixture
  std::string out_path;       // output file; empty => stdout

  // Planner labels: greedy, exact, stba-h, stba-m, stba-l.
  std::vector<std::string> planners{"greedy"};
  double alpha = 0.5;  // greedy's cost mix between accuracy loss and fleet use

  // Sweep: axis in {delta, psi, targets, uavs} over these values.
  std::string axis;
  std::vector<double> values;
  int threads = 1;

  SimParams sim;

  // Generator knobs (gen-scenario, scenario-less runs, targets/uavs sweeps).
  std::string tmpl = "multi";
  int targets = 0;
  int uavs = 0;
  std::uint64_t gen_seed = 1;
  std::string label = "mixed";
};

// Parse a JSON spec file's text into an ExperimentSpec (strict keys; throws
// ParseError on malformed input).
ExperimentSpec spec_from_json(const std::string& text);

// Execute the experiment. Returns the process exit code: 0 success, 1 usage
// error, 2 planner infeasibility, 3 I/O failure. Writes results to the spec's
// output target and diagnostics to stderr.
int run(const ExperimentSpec& spec);

}  // namespace uavplan

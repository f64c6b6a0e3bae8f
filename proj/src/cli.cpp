#include "uavplan/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "uavplan/baselines.hpp"
#include "uavplan/exact.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/profile.hpp"
#include "uavplan/scenario_gen.hpp"

namespace uavplan {

namespace {

using nlohmann::json;

// Usage-level problem: wrong flags/labels/axes, not a planning failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// I/O-level problem: unreadable/unwritable files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("error writing to stdout");
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + out_path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error writing " + out_path);
}

ScenarioConfig make_scenario(const ExperimentSpec& spec) {
  if (!spec.scenario_path.empty()) return load_scenario(spec.scenario_path);
  if (spec.targets < 1)
    throw UsageError("no scenario file given; provide --scenario or --targets >= 1");
  return gen_scenario(spec.tmpl, spec.targets, spec.uavs, spec.gen_seed, spec.label);
}

QualityProfile make_profile(const ExperimentSpec& spec) {
  if (!spec.profile_path.empty()) return load_profile(spec.profile_path);
  return fixture_profile();
}

Plan make_plan(const std::string& label, const ScenarioConfig& cfg,
               const QualityProfile& prof, double alpha) {
  if (label == "greedy") return greedy_plan(cfg, prof, alpha);
  if (label == "exact") return exact_plan(cfg, prof).plan;
  if (label == "stba-h") return stba_plan(cfg, prof, StbaVariant::H);
  if (label == "stba-m") return stba_plan(cfg, prof, StbaVariant::M);
  if (label == "stba-l") return stba_plan(cfg, prof, StbaVariant::L);
  throw UsageError("unknown planner label '" + label +
                   "' (expected greedy, exact, stba-h, stba-m, or stba-l)");
}

void check_planner_labels(const std::vector<std::string>& labels) {
  if (labels.empty()) throw UsageError("at least one --planner label is required");
  for (const auto& l : labels)
    if (l != "greedy" && l != "exact" && l != "stba-h" && l != "stba-m" && l != "stba-l")
      throw UsageError("unknown planner label '" + l +
                       "' (expected greedy, exact, stba-h, stba-m, or stba-l)");
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j])
        throw UsageError("duplicate planner label '" + labels[i] + "'");
}

// Plan every requested label, isolating per-label planning failures so one
// infeasible planner does not silence the others. Throws PlanningError only
// when every label failed.
std::map<std::string, Plan> make_plans(const ExperimentSpec& spec,
                                       const ScenarioConfig& cfg,
                                       const QualityProfile& prof) {
  std::map<std::string, Plan> plans;
  std::string first_error;
  for (const auto& label : spec.planners) {
    try {
      plans[label] = make_plan(label, cfg, prof, spec.alpha);
    } catch (const PlanningError& e) {
      std::cerr << "planner '" << label << "' failed: " << e.what() << "\n";
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (plans.empty())
    throw NoFeasibleAssignmentError("every planner failed; first error: " + first_error);
  return plans;
}

int run_plan(const ExperimentSpec& spec) {
  const ScenarioConfig cfg = make_scenario(spec);
  const QualityProfile prof = make_profile(spec);
  const auto plans = make_plans(spec, cfg, prof);
  json out;
  out["plans"] = json::object();
  for (const auto& [label, plan] : plans)
    out["plans"][label] = json::parse(plan_to_json(plan));
  write_output(out.dump(2) + "\n", spec.out_path);
  return 0;
}

int run_simulate(const ExperimentSpec& spec) {
  const ScenarioConfig cfg = make_scenario(spec);
  const QualityProfile prof = make_profile(spec);
  const auto plans = make_plans(spec, cfg, prof);
  const auto rows = sweep(plans, cfg, prof, spec.sim, "delta", {cfg.deadline}, 1);
  write_output(report_csv(rows), spec.out_path);
  return 0;
}

int run_sweep(const ExperimentSpec& spec) {
  if (spec.axis.empty()) throw UsageError("sweep requires --axis");
  if (spec.values.empty()) throw UsageError("sweep requires --values");
  if (spec.threads < 1) throw UsageError("--threads must be at least 1");
  const QualityProfile prof = make_profile(spec);

  if (spec.axis == "delta" || spec.axis == "psi") {
    const ScenarioConfig cfg = make_scenario(spec);
    const auto plans = make_plans(spec, cfg, prof);
    const auto rows = sweep(plans, cfg, prof, spec.sim, spec.axis, spec.values,
                            spec.threads);
    write_output(report_csv(rows), spec.out_path);
    return 0;
  }

  if (spec.axis != "targets" && spec.axis != "uavs")
    throw UsageError("unknown sweep axis '" + spec.axis +
                     "' (expected delta, psi, targets, or uavs)");
  if (!spec.scenario_path.empty())
    throw UsageError("the " + spec.axis +
                     " axis regenerates scenarios; give generator knobs "
                     "(--template/--targets/--uavs) instead of --scenario");
  if (spec.axis == "uavs" && spec.targets < 1)
    throw UsageError("the uavs axis needs --targets >= 1");

  // Regenerate the scenario and replan at every swept value.
  std::vector<SweepRow> rows;
  std::string first_error;
  bool any_ok = false;
  for (double v : spec.values) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 1.0)
      throw UsageError("values on the " + spec.axis +
                       " axis must be positive integers");
    const int count = static_cast<int>(r);
    const int targets = spec.axis == "targets" ? count : spec.targets;
    const int uavs = spec.axis == "uavs" ? count : spec.uavs;
    const ScenarioConfig cfg =
        gen_scenario(spec.tmpl, targets, uavs, spec.gen_seed, spec.label);
    for (const auto& label : spec.planners) {
      try {
        std::map<std::string, Plan> one{{label, make_plan(label, cfg, prof, spec.alpha)}};
        auto batch = sweep(one, cfg, prof, spec.sim, "delta", {cfg.deadline}, 1);
        for (auto& row : batch) {
          row.axis = spec.axis;
          row.value = v;
          rows.push_back(row);
        }
        any_ok = true;
      } catch (const PlanningError& e) {
        std::cerr << "planner '" << label << "' failed at " << spec.axis << "="
                  << count << ": " << e.what() << "\n";
        if (first_error.empty()) first_error = e.what();
      }
    }
  }
  if (!any_ok)
    throw NoFeasibleAssignmentError("every planner failed; first error: " + first_error);
  write_output(report_csv(rows), spec.out_path);
  return 0;
}

int run_gen_scenario(const ExperimentSpec& spec) {
  if (spec.targets < 1) throw UsageError("gen-scenario requires --targets >= 1");
  const ScenarioConfig cfg =
      gen_scenario(spec.tmpl, spec.targets, spec.uavs, spec.gen_seed, spec.label);
  write_output(scenario_to_json(cfg) + "\n", spec.out_path);
  return 0;
}

int run_profile_check(const ExperimentSpec& spec) {
  if (spec.profile_path.empty()) throw UsageError("profile-check requires --profile");
  const QualityProfile prof = load_profile(spec.profile_path);
  std::string out = "profile OK: " + std::to_string(prof.table.size()) +
                    " scenarios, levels 1..100\n";
  char buf[160];
  for (const auto& [scenario, levels] : prof.table) {
    std::snprintf(buf, sizeof(buf),
                  "%s: accuracy %.6f..%.6f, size %.0f..%.0f bytes\n",
                  scenario.c_str(), levels.at(100).accuracy, levels.at(1).accuracy,
                  levels.at(100).size, levels.at(1).size);
    out += buf;
  }
  write_output(out, spec.out_path);
  return 0;
}

int run_gen_profile(const ExperimentSpec& spec) {
  if (spec.out_path.empty()) throw UsageError("gen-profile requires --out");
  save_profile(fixture_profile(), spec.out_path);
  return 0;
}

}  // namespace

ExperimentSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("spec file must hold a JSON object");

  static const char* const allowed[] = {
      "command", "scenario", "profile",  "out",     "planners", "alpha",
      "axis",    "values",   "threads",  "duration", "seed",    "retries",
      "overhead", "template", "targets", "uavs",    "gen_seed", "label"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError("unknown spec key '" + key + "'");
    (void)value;
  }

  ExperimentSpec s;
  try {
    if (j.count("command")) s.command = j.at("command").get<std::string>();
    if (j.count("scenario")) s.scenario_path = j.at("scenario").get<std::string>();
    if (j.count("profile")) s.profile_path = j.at("profile").get<std::string>();
    if (j.count("out")) s.out_path = j.at("out").get<std::string>();
    if (j.count("planners"))
      s.planners = j.at("planners").get<std::vector<std::string>>();
    if (j.count("alpha")) s.alpha = j.at("alpha").get<double>();
    if (j.count("axis")) s.axis = j.at("axis").get<std::string>();
    if (j.count("values")) s.values = j.at("values").get<std::vector<double>>();
    if (j.count("threads")) s.threads = j.at("threads").get<int>();
    if (j.count("duration")) s.sim.duration = j.at("duration").get<double>();
    if (j.count("seed")) s.sim.seed = j.at("seed").get<std::uint64_t>();
    if (j.count("retries")) s.sim.retry_limit = j.at("retries").get<int>();
    if (j.count("overhead")) s.sim.per_hop_overhead = j.at("overhead").get<double>();
    if (j.count("template")) s.tmpl = j.at("template").get<std::string>();
    if (j.count("targets")) s.targets = j.at("targets").get<int>();
    if (j.count("uavs")) s.uavs = j.at("uavs").get<int>();
    if (j.count("gen_seed")) s.gen_seed = j.at("gen_seed").get<std::uint64_t>();
    if (j.count("label")) s.label = j.at("label").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec field has the wrong type: ") + e.what());
  }
  return s;
}

int run(const ExperimentSpec& spec) {
  try {
    check_planner_labels(spec.planners);
    if (spec.command == "plan") return run_plan(spec);
    if (spec.command == "simulate") return run_simulate(spec);
    if (spec.command == "sweep") return run_sweep(spec);
    if (spec.command == "gen-scenario") return run_gen_scenario(spec);
    if (spec.command == "profile-check") return run_profile_check(spec);
    if (spec.command == "gen-profile") return run_gen_profile(spec);
    throw UsageError(spec.command.empty()
                         ? "no command given (expected plan, simulate, sweep, "
                           "gen-scenario, profile-check, or gen-profile)"
                         : "unknown command '" + spec.command + "'");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    if (e.line > 0)
      std::cerr << "input error (line " << e.line << "): " << e.what() << "\n";
    else
      std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const PlanningError& e) {
    std::cerr << "planning error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace uavplan

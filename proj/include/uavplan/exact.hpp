#pragma once

#include <string>
#include <vector>

#include "uavplan/core.hpp"
#include "uavplan/profile.hpp"

// Small-instance exact solver: exhaustive search over target subsets,
// coverage groupings, inspector placements, Steiner relay structures, and
// Pareto-frontier compression levels; doubles as a standalone feasibility
// checker and objective evaluator for any Plan.

namespace uavplan {

// Additional inspector placements to enumerate beyond the targets' own
// positions (a position is considered for a target only when it lies within
// the fleet's sensing radius of it).
struct CandidateSet {
  std::vector<Point2D> positions;
  std::string derivation;  // "target-anchored", "grid", "tst-nodes", free-form
};

struct ExactLimits {
  int max_targets = 3;
  int max_uavs = 6;
  double time_budget_s = 60.0;
};

struct ExactSolution {
  Plan plan;
  double objective = 0.0;
  bool optimal = false;  // true iff the enumeration finished in budget
};

// All planning constraints for a concrete Plan: energy round trips, sensing
// distances, at-most-one coverage, link lengths, tree structure, route/flow
// consistency, per-edge aggregate rate within nominal link capacity, and
// level ranges. Violation codes are stable identifiers, one entry per
// violated constraint instance. Empty result == feasible.
std::vector<Violation> feasibility_check(const Plan& plan, const ScenarioConfig& cfg,
                                         const QualityProfile& p);

// Weighted plan score: w0 * sum of delivered accuracy over covered targets
// + w1 * covered count - w2 * total assigned travel distance, with weights
// from cfg.objective_weights. Throws InfeasiblePlanError when
// feasibility_check reports violations.
double objective_value(const Plan& plan, const ScenarioConfig& cfg, const QualityProfile& p);

// Exhaustive optimum over the discretized search space. Throws
// InstanceTooLargeError past the limits. optimal=false with the best plan
// found so far when the time budget expires.
ExactSolution exact_plan(const ScenarioConfig& cfg, const QualityProfile& p,
                         const CandidateSet& cand = {}, const ExactLimits& limits = {});

}  // namespace uavplan

#pragma once

#include <cstdint>
#include <string>

#include "uavplan/core.hpp"

// Deterministic scenario generators for experiments and tests. All
// randomness comes from counter-based hashes of the seed, so a (template,
// targets, uavs, seed, label) tuple always produces the same scenario.

namespace uavplan {

// Templates:
//  - "urban": targets scattered uniformly over the whole 500x500 m area with
//    a 12.5 m minimum spacing; link rate 2.4e6 B/s. Stress-tests planner
//    invariants over sparse, far-flung layouts.
//  - "multi": a concentrated inspection zone near the edge server -- one
//    gateway target 11 m out, two isolated outpost targets 15 m out on the
//    flanks (each with a private single-hop link to the edge server), plus a
//    150-degree half-annulus of targets (r in [24 m, R], R sized to the
//    target count) all sharing the single gateway trunk; link rate 3.2e6
//    B/s. The workload for trend experiments.
//  - "scalability": the "multi" geometry without the outposts, used for
//    runtime and fleet-limited coverage studies.
//
// `targets` must be >= 1. `uavs` <= 0 selects the template default
// (targets+5 for urban, targets+10 otherwise). `label` stamps every target's
// scenario label; the special value "mixed" cycles through the six fixture
// labels (Maritime, Pets, SaR, Tools, Urban, Wildlife) by target id.
//
// Common elements: 500x500 m area, edge server at (250, 0), deadline 0.1 s,
// channel error 0, mission horizon 600 s, task rate 0.3 tasks/s, and a
// homogeneous fleet (comm 16 m, sense 1 m, speed 5 m/s, energy 2e4 J, move
// 2 J/m, hover 10 J/s) launched from points spread along the bottom border.
ScenarioConfig gen_scenario(const std::string& tmpl, int targets, int uavs,
                            std::uint64_t seed, const std::string& label = "mixed");

}  // namespace uavplan

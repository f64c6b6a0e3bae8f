#pragma once

#include "uavplan/core.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/profile.hpp"

// Steiner-tree-based baseline: pure coverage/connectivity planning with a
// fixed fleet bound, plus fixed-compression plan variants. No bandwidth or
// accuracy awareness anywhere.

namespace uavplan {

enum class StbaVariant { H, M, L };  // fixed levels 1 / 50 / 100

// Steiner tree over all targets; while it needs more UAVs than the fleet has,
// the target farthest from the edge server is dropped (ties: drop the higher
// id) and the tree rebuilt. Throws EmptyScenarioError when there are no
// targets.
CoverageTree stba(const ScenarioConfig& cfg);

// Wrap a coverage tree into a Plan with one uniform compression level for
// every covered target (H=1, M=50, L=100), tree-path routes, and the usual
// minimum-travel UAV matching.
Plan stba_variant(const CoverageTree& tree, StbaVariant variant,
                  const ScenarioConfig& cfg, const QualityProfile& p);

// Convenience: stba + stba_variant.
Plan stba_plan(const ScenarioConfig& cfg, const QualityProfile& p, StbaVariant variant);

int stba_level(StbaVariant variant);

}  // namespace uavplan

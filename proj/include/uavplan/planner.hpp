#pragma once

#include <map>
#include <vector>

#include "uavplan/core.hpp"
#include "uavplan/profile.hpp"
#include "uavplan/steiner.hpp"

// The polynomial planner: greedy tree growth scored by a convex combination
// of accuracy loss and fleet consumption, per-target compression levels fitted
// to shared bottleneck bandwidth, and a minimum-travel UAV-to-station
// matching under energy budgets.

namespace uavplan {

// Unique tree path between two nodes (BFS). Throws DisconnectedNodeError when
// either node is missing or unreachable.
std::vector<int> shortest_path(const CoverageTree& t, int from, int to);

// For each edge, how many of the given targets' base routes cross it.
// `flows` lists target ids that must be covered by t.
std::map<EdgeKey, int> flow_sharing(const CoverageTree& t, const std::vector<int>& flows);

// Minimum over the path's edges of residual-capacity / sharing-count.
// Edges absent from `sharing` count as shared by 1.
double bottleneck(const CoverageTree& t, const std::vector<int>& path,
                  const std::map<EdgeKey, int>& sharing);

// Bandwidth-aware per-target compression: covered targets are processed in
// ascending order of best-quality payload size (ties by target id); each gets
// the accuracy-maximal level whose payload fits min(bottleneck budget,
// best-quality size), where the bottleneck divides every edge's residual
// capacity by the number of still-unassigned flows crossing it; the chosen
// payload is then subtracted from the residuals along the route. Targets for
// which nothing fits get level 100 and are marked saturated. The tree's
// nominal weights are not modified.
CompressionAssignment compression_assignment(const CoverageTree& t,
                                             const ScenarioConfig& cfg,
                                             const QualityProfile& p);

// Candidate-tree score: alpha * (mean accuracy loss over covered targets)
// + (1-alpha) * ((new stations vs t_prev - 1) / (fleet - stations already
// committed across archived and t_prev)). Node identity is position identity
// (trees are rebuilt from scratch each round). Throws EmptyCoverageError when
// t_new covers nothing; returns +infinity when the fleet is exhausted.
double cost_alpha(const CoverageTree& t_new, const CoverageTree& t_prev,
                  const CoverageTree& archived, const CompressionAssignment& ca,
                  std::size_t fleet, double alpha);

// Greedy planner. Grows a partial tree by repeatedly adopting the cheapest
// single-target extension (rebuilt as a full Steiner tree over the base, the
// partial tree's targets, and the candidate); a direct base-to-target relay
// stripe is adopted instead - archiving the partial tree - when its cost
// beats the extension's marginal cost. Stops when all targets are covered or
// the fleet is exhausted; compression is recomputed over the merged forest,
// then UAVs are matched to stations. Ties in candidate cost break toward the
// lowest target id. Deterministic.
Plan greedy_plan(const ScenarioConfig& cfg, const QualityProfile& p, double alpha = 0.5);

// Minimum-total-travel injective matching of UAVs to non-base stations among
// pairs satisfying the energy round trip (exact rectangular assignment).
// Throws NoFeasibleAssignmentError when no complete matching exists.
std::map<int, int> uav_assignment(const CoverageTree& formation, const ScenarioConfig& cfg);

// Tree paths from every covered target's inspector to the base.
std::map<int, std::vector<int>> route_map(const CoverageTree& t);

// Union of trees that share only their base position: nodes are renumbered
// (base = 0, then each tree's non-base nodes in order), edges and coverage
// remapped. All trees must be anchored at the same base position.
CoverageTree merge_trees(const std::vector<CoverageTree>& trees);

}  // namespace uavplan

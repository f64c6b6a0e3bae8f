#include "uavplan/baselines.hpp"

#include <algorithm>
#include <limits>

#include "uavplan/steiner.hpp"

namespace uavplan {

namespace {
double fleet_min_comm(const ScenarioConfig& cfg) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& u : cfg.uavs) r = std::min(r, u.comm_radius);
  return r;
}
}  // namespace

CoverageTree stba(const ScenarioConfig& cfg) {
  if (cfg.targets.empty()) throw EmptyScenarioError("no targets to cover");
  if (cfg.uavs.empty()) throw NoFeasibleAssignmentError("no UAVs in the scenario");
  const double rcom = fleet_min_comm(cfg);

  std::vector<const Target*> kept;
  for (const auto& t : cfg.targets) kept.push_back(&t);
  std::sort(kept.begin(), kept.end(),
            [](const Target* a, const Target* b) { return a->id < b->id; });

  while (true) {
    TerminalSet ts;
    ts.base = cfg.edge;
    ts.comm_radius = rcom;
    for (const Target* t : kept) ts.terminals.push_back({t->id, t->position});
    CoverageTree tree = ts.terminals.empty() ? CoverageTree{} : tst(ts, cfg.link_rate);
    if (ts.terminals.empty()) {
      tree.nodes.push_back({0, cfg.edge, NodeRole::Base});
      return tree;
    }
    if (tree.nodes.size() - 1 <= cfg.uavs.size()) return tree;

    // Over the fleet: drop the target farthest from the edge server
    // (ties: the higher id) and rebuild.
    size_t drop = 0;
    for (size_t i = 1; i < kept.size(); ++i) {
      const double di = distance(kept[i]->position, cfg.edge);
      const double dd = distance(kept[drop]->position, cfg.edge);
      if (di > dd || (di == dd && kept[i]->id > kept[drop]->id)) drop = i;
    }
    kept.erase(kept.begin() + drop);
  }
}

int stba_level(StbaVariant variant) {
  switch (variant) {
    case StbaVariant::H: return 1;
    case StbaVariant::M: return 50;
    case StbaVariant::L: return 100;
  }
  return 50;
}

Plan stba_variant(const CoverageTree& tree, StbaVariant variant,
                  const ScenarioConfig& cfg, const QualityProfile& p) {
  std::map<int, const Target*> target_of;
  for (const auto& t : cfg.targets) target_of[t.id] = &t;

  Plan plan;
  plan.formation = tree;
  const int level = stba_level(variant);
  for (const auto& [node, target] : tree.covered) {
    const std::string& scenario = target_of.at(target)->scenario;
    plan.compression.levels[target] = level;
    plan.compression.losses[target] =
        query(p, scenario, 1).accuracy - query(p, scenario, level).accuracy;
  }
  plan.assignment = uav_assignment(tree, cfg);
  plan.routes = route_map(tree);
  return plan;
}

Plan stba_plan(const ScenarioConfig& cfg, const QualityProfile& p, StbaVariant variant) {
  return stba_variant(stba(cfg), variant, cfg, p);
}

}  // namespace uavplan

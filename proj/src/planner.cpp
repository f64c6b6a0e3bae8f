#include "uavplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace uavplan {

namespace {
constexpr double kBigCost = 1e15;  // matching cost for infeasible UAV/station pairs

std::map<int, std::vector<int>> adjacency(const CoverageTree& t) {
  std::map<int, std::vector<int>> adj;
  for (const auto& n : t.nodes) adj[n.id];
  for (const auto& e : t.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  return adj;
}
}  // namespace

std::vector<int> shortest_path(const CoverageTree& t, int from, int to) {
  if (!t.find_node(from) || !t.find_node(to))
    throw DisconnectedNodeError("path endpoint not in tree");
  auto adj = adjacency(t);
  std::map<int, int> parent;
  parent[from] = from;
  std::queue<int> q;
  q.push(from);
  while (!q.empty() && !parent.count(to)) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!parent.count(w)) {
        parent[w] = v;
        q.push(w);
      }
  }
  if (!parent.count(to))
    throw DisconnectedNodeError("node " + std::to_string(to) + " unreachable from " +
                                std::to_string(from));
  std::vector<int> path;
  for (int v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

std::map<EdgeKey, int> flow_sharing(const CoverageTree& t, const std::vector<int>& flows) {
  std::map<int, int> inspector_of;
  for (const auto& [node, target] : t.covered) inspector_of[target] = node;
  const int base = t.base_id();
  std::map<EdgeKey, int> sharing;
  for (int target : flows) {
    auto it = inspector_of.find(target);
    if (it == inspector_of.end())
      throw PlanningError("flow_sharing: target " + std::to_string(target) +
                          " is not covered by the tree");
    const auto path = shortest_path(t, it->second, base);
    for (size_t i = 0; i + 1 < path.size(); ++i)
      sharing[edge_key(path[i], path[i + 1])] += 1;
  }
  return sharing;
}

double bottleneck(const CoverageTree& t, const std::vector<int>& path,
                  const std::map<EdgeKey, int>& sharing) {
  double b = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const EdgeKey e = edge_key(path[i], path[i + 1]);
    auto wit = t.weights.find(e);
    if (wit == t.weights.end())
      throw PlanningError("bottleneck: path step is not a tree edge");
    auto sit = sharing.find(e);
    const int share = sit == sharing.end() ? 1 : std::max(1, sit->second);
    b = std::min(b, wit->second / share);
  }
  return b;
}

CompressionAssignment compression_assignment(const CoverageTree& t,
                                             const ScenarioConfig& cfg,
                                             const QualityProfile& p) {
  CompressionAssignment ca;
  if (t.covered.empty()) return ca;

  std::map<int, const Target*> target_of;
  for (const auto& tg : cfg.targets) target_of[tg.id] = &tg;

  const int base = t.base_id();
  struct Flow {
    int target;
    double full_size;  // payload at level 1
    std::vector<EdgeKey> path_edges;
  };
  std::vector<Flow> flows;
  for (const auto& [node, target] : t.covered) {
    auto it = target_of.find(target);
    if (it == target_of.end())
      throw PlanningError("compression: covered target " + std::to_string(target) +
                          " is not in the scenario");
    Flow f;
    f.target = target;
    f.full_size = query(p, it->second->scenario, 1).size;
    const auto path = shortest_path(t, node, base);
    for (size_t i = 0; i + 1 < path.size(); ++i)
      f.path_edges.push_back(edge_key(path[i], path[i + 1]));
    flows.push_back(std::move(f));
  }
  // Smallest full-quality payloads first; ties by target id.
  std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
    if (a.full_size != b.full_size) return a.full_size < b.full_size;
    return a.target < b.target;
  });

  std::map<EdgeKey, double> residual = t.weights;
  std::map<EdgeKey, int> unassigned;  // flows not yet assigned crossing each edge
  for (const auto& f : flows)
    for (const auto& e : f.path_edges) unassigned[e] += 1;

  for (const auto& f : flows) {
    const std::string& scenario = target_of.at(f.target)->scenario;
    double budget = f.full_size;
    for (const auto& e : f.path_edges)
      budget = std::min(budget, residual.at(e) / std::max(1, unassigned.at(e)));

    int level;
    auto fit = max_level_within_size(p, scenario, budget);
    if (fit) {
      level = *fit;
    } else {
      level = 100;  // nothing fits: send maximally compressed anyway
      ca.saturated.insert(f.target);
    }
    const QualityPoint chosen = query(p, scenario, level);
    ca.levels[f.target] = level;
    ca.losses[f.target] = query(p, scenario, 1).accuracy - chosen.accuracy;
    for (const auto& e : f.path_edges) {
      residual.at(e) -= chosen.size;
      unassigned.at(e) -= 1;
    }
  }
  return ca;
}

namespace {

using PosKey = std::pair<double, double>;

std::set<PosKey> position_set(const CoverageTree& t) {
  std::set<PosKey> s;
  for (const auto& n : t.nodes) s.insert({n.pos.x, n.pos.y});
  return s;
}

}  // namespace

double cost_alpha(const CoverageTree& t_new, const CoverageTree& t_prev,
                  const CoverageTree& archived, const CompressionAssignment& ca,
                  std::size_t fleet, double alpha) {
  const auto covered = t_new.covered_targets();
  if (covered.empty()) throw EmptyCoverageError("candidate tree covers no target");

  double loss_sum = 0.0;
  for (int target : covered) loss_sum += ca.losses.at(target);
  const double loss_term = loss_sum / double(covered.size());

  const auto prev_pos = position_set(t_prev);
  auto committed = position_set(archived);
  committed.insert(prev_pos.begin(), prev_pos.end());

  int new_nodes = 0;
  for (const auto& n : t_new.nodes)
    if (!prev_pos.count({n.pos.x, n.pos.y})) ++new_nodes;

  const double denom = double(fleet) - double(committed.size());
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  const double uav_term = double(new_nodes - 1) / denom;
  return alpha * loss_term + (1.0 - alpha) * uav_term;
}

std::map<int, std::vector<int>> route_map(const CoverageTree& t) {
  std::map<int, std::vector<int>> routes;
  const int base = t.base_id();
  for (const auto& [node, target] : t.covered) routes[target] = shortest_path(t, node, base);
  return routes;
}

CoverageTree merge_trees(const std::vector<CoverageTree>& trees) {
  CoverageTree out;
  if (trees.empty()) return out;
  const TreeNode* base0 = trees.front().find_node(trees.front().base_id());
  if (!base0) throw PlanningError("merge_trees: first tree has no base");
  out.nodes.push_back({0, base0->pos, NodeRole::Base});

  int next_id = 1;
  for (const auto& t : trees) {
    const int b = t.base_id();
    const TreeNode* tb = t.find_node(b);
    if (!tb) throw PlanningError("merge_trees: tree has no base");
    if (distance(tb->pos, base0->pos) > 1e-9)
      throw PlanningError("merge_trees: trees anchored at different bases");
    std::map<int, int> remap;
    remap[b] = 0;
    for (const auto& n : t.nodes) {
      if (n.id == b) continue;
      remap[n.id] = next_id;
      out.nodes.push_back({next_id, n.pos, n.role});
      ++next_id;
    }
    for (const auto& e : t.edges) {
      const EdgeKey ne = edge_key(remap.at(e.first), remap.at(e.second));
      out.edges.push_back(ne);
      out.weights[ne] = t.weights.at(edge_key(e.first, e.second));
    }
    for (const auto& [node, target] : t.covered) out.covered[remap.at(node)] = target;
  }
  return out;
}

// ---------------------------------------------------------------------------
// UAV-to-station matching

std::map<int, int> uav_assignment(const CoverageTree& formation, const ScenarioConfig& cfg) {
  std::vector<const TreeNode*> stations;
  for (const auto& n : formation.nodes)
    if (n.role != NodeRole::Base) stations.push_back(&n);
  std::sort(stations.begin(), stations.end(),
            [](const TreeNode* a, const TreeNode* b) { return a->id < b->id; });

  const int m = static_cast<int>(stations.size());
  const int n = static_cast<int>(cfg.uavs.size());
  if (m == 0) return {};
  if (m > n)
    throw NoFeasibleAssignmentError("tree needs " + std::to_string(m) +
                                    " UAVs but the fleet has " + std::to_string(n));

  // Longest link incident to each station: a UAV manning it must reach that far.
  std::map<int, double> reach_needed;
  for (const auto& e : formation.edges) {
    const TreeNode* a = formation.find_node(e.first);
    const TreeNode* b = formation.find_node(e.second);
    const double d = distance(a->pos, b->pos);
    for (const TreeNode* x : {a, b})
      if (x->role != NodeRole::Base)
        reach_needed[x->id] = std::max(reach_needed[x->id], d);
  }

  std::vector<std::vector<double>> cost(m, std::vector<double>(n, kBigCost));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const UavSpec& u = cfg.uavs[j];
      const bool ok = energy_feasible(u, stations[i]->pos, cfg.edge, cfg.mission_horizon) &&
                      reach_needed[stations[i]->id] <= u.comm_radius + 1e-9;
      if (ok) cost[i][j] = distance(u.start, stations[i]->pos);
    }
  }

  // Exact rectangular assignment (shortest augmenting paths with potentials),
  // rows = stations, columns = UAVs; deterministic for fixed input order.
  std::vector<double> pu(m + 1, 0.0), pv(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= m; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          pu[match[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::map<int, int> out;  // uav id -> node id
  for (int j = 1; j <= n; ++j) {
    if (match[j] == 0) continue;
    const int station_idx = match[j] - 1;
    if (cost[station_idx][j - 1] >= kBigCost / 2)
      throw NoFeasibleAssignmentError("station " + std::to_string(stations[station_idx]->id) +
                                      " has no energy-feasible UAV");
    out[cfg.uavs[j - 1].id] = stations[station_idx]->id;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Greedy planner

namespace {

CoverageTree base_only_tree(const Point2D& edge) {
  CoverageTree t;
  t.nodes.push_back({0, edge, NodeRole::Base});
  return t;
}

double fleet_min_comm(const ScenarioConfig& cfg) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& u : cfg.uavs) r = std::min(r, u.comm_radius);
  return r;
}

// Stations a tree commits beyond the shared base node.
std::size_t stations_of(const CoverageTree& t) { return t.nodes.size() - 1; }

}  // namespace

Plan greedy_plan(const ScenarioConfig& cfg, const QualityProfile& p, double alpha) {
  if (cfg.uavs.empty()) throw NoFeasibleAssignmentError("no UAVs in the scenario");
  if (alpha < 0.0 || alpha > 1.0) throw PlanningError("alpha must be in [0, 1]");
  const double rcom = fleet_min_comm(cfg);
  const std::size_t fleet = cfg.uavs.size();

  std::map<int, const Target*> target_of;
  std::set<int> uncovered;
  for (const auto& t : cfg.targets) {
    target_of[t.id] = &t;
    uncovered.insert(t.id);
  }

  std::vector<CoverageTree> archived;
  CoverageTree archived_merged = base_only_tree(cfg.edge);
  CoverageTree partial = base_only_tree(cfg.edge);
  double c_par = 0.0;

  auto terminals_for = [&](const std::set<int>& targets) {
    TerminalSet ts;
    ts.base = cfg.edge;
    ts.comm_radius = rcom;
    for (int id : targets) ts.terminals.push_back({id, target_of.at(id)->position});
    return ts;
  };
  auto archive_partial = [&]() {
    if (!partial.covered.empty()) {
      archived.push_back(partial);
      std::vector<CoverageTree> all = {base_only_tree(cfg.edge)};
      all.insert(all.end(), archived.begin(), archived.end());
      archived_merged = merge_trees(all);
    }
  };

  while (!uncovered.empty() && stations_of(archived_merged) + stations_of(partial) < fleet) {
    const std::size_t used_archived = stations_of(archived_merged);

    // Cheapest single-target extension of the partial tree.  A candidate
    // replaces the partial tree, so only the archived stations count against
    // it when checking the fleet bound.
    bool have_best = false;
    int t_best = -1;
    double c_best = std::numeric_limits<double>::infinity();
    CoverageTree tree_best;
    for (int t : uncovered) {
      std::set<int> grown = partial.covered_targets();
      grown.insert(t);
      CoverageTree cand = tst(terminals_for(grown), cfg.link_rate);
      if (used_archived + stations_of(cand) > fleet) continue;  // over the fleet
      const auto ca = compression_assignment(cand, cfg, p);
      const double c = cost_alpha(cand, partial, archived_merged, ca, fleet, alpha);
      // A candidate that fits the fleet is kept even at infinite cost (the
      // per-UAV term divides by remaining-fleet-minus-one, which is zero when
      // exactly one UAV is left); ascending iteration keeps the lowest id.
      if (!have_best || c < c_best) {
        c_best = c;
        t_best = t;
        tree_best = std::move(cand);
        have_best = true;
      }
    }
    if (!have_best) break;  // nothing fits the remaining fleet

    // Direct relay stripe to the chosen target, competing against the
    // extension's marginal cost; adopting it archives the partial tree, so
    // the stripe's stations add on top of both the archive and the partial.
    CoverageTree stripe = los_tree(cfg.edge, *target_of.at(t_best), rcom, cfg.link_rate);
    const bool stripe_fits =
        used_archived + stations_of(partial) + stations_of(stripe) <= fleet;
    bool adopt_stripe = false;
    if (stripe_fits) {
      const auto ca_los = compression_assignment(stripe, cfg, p);
      const double c_los = cost_alpha(stripe, partial, archived_merged, ca_los, fleet, alpha);
      adopt_stripe = c_los < c_best - c_par;
      if (adopt_stripe) {
        archive_partial();
        partial = std::move(stripe);
        c_par = c_los;
      }
    }
    if (!adopt_stripe) {
      partial = std::move(tree_best);
      c_par = c_best;
    }
    uncovered.erase(t_best);
  }
  archive_partial();

  std::vector<CoverageTree> all = {base_only_tree(cfg.edge)};
  all.insert(all.end(), archived.begin(), archived.end());
  Plan plan;
  plan.formation = merge_trees(all);
  plan.compression = compression_assignment(plan.formation, cfg, p);
  plan.assignment = uav_assignment(plan.formation, cfg);
  plan.routes = route_map(plan.formation);
  return plan;
}

}  // namespace uavplan

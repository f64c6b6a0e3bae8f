#include "uavplan/core.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace uavplan {

namespace {
constexpr double kGeomTol = 1e-9;

std::string fmt_point(const Point2D& p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}
}  // namespace

bool operator==(const Point2D& a, const Point2D& b) {
  return a.x == b.x && a.y == b.y;
}

double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

EdgeKey edge_key(int a, int b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

const TreeNode* CoverageTree::find_node(int id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

int CoverageTree::base_id() const {
  for (const auto& n : nodes)
    if (n.role == NodeRole::Base) return n.id;
  return -1;
}

std::set<int> CoverageTree::covered_targets() const {
  std::set<int> out;
  for (const auto& [node, target] : covered) out.insert(target);
  return out;
}

double uav_energy_spent(const UavSpec& u, const Point2D& station, double horizon) {
  return distance(u.start, station) * u.move_cost + horizon * u.hover_cost;
}

bool energy_feasible(const UavSpec& u, const Point2D& station, const Point2D& edge,
                     double horizon) {
  const double spent = uav_energy_spent(u, station, horizon);
  const double ret = distance(station, edge) * u.move_cost;
  return spent + ret <= u.energy + kGeomTol;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

double fleet_min_comm(const ScenarioConfig& cfg) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& u : cfg.uavs) r = std::min(r, u.comm_radius);
  return r;
}

double fleet_min_sense(const ScenarioConfig& cfg) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& u : cfg.uavs) r = std::min(r, u.sense_radius);
  return r;
}

bool inside_area(const Point2D& p, const ScenarioConfig& cfg) {
  return p.x >= -kGeomTol && p.y >= -kGeomTol && p.x <= cfg.area.x + kGeomTol &&
         p.y <= cfg.area.y + kGeomTol;
}

void check_structure(const CoverageTree& t, const ScenarioConfig& cfg,
                     std::vector<Violation>& out) {
  std::map<int, const TreeNode*> by_id;
  for (const auto& n : t.nodes) {
    if (!by_id.emplace(n.id, &n).second)
      out.push_back({"DuplicateNodeId", "node id " + std::to_string(n.id) + " appears twice"});
  }

  int bases = 0;
  for (const auto& n : t.nodes)
    if (n.role == NodeRole::Base) ++bases;
  if (bases == 0) {
    out.push_back({"BaseMissing", "tree has no base node"});
  } else if (bases > 1) {
    out.push_back({"MultipleBase", "tree has " + std::to_string(bases) + " base nodes"});
  } else {
    const TreeNode* b = t.find_node(t.base_id());
    if (distance(b->pos, cfg.edge) > kGeomTol)
      out.push_back({"BaseMismatch", "base node at " + fmt_point(b->pos) +
                                         " but edge server at " + fmt_point(cfg.edge)});
  }

  for (const auto& n : t.nodes) {
    if (!inside_area(n.pos, cfg))
      out.push_back({"NodeOutsideArea",
                     "node " + std::to_string(n.id) + " at " + fmt_point(n.pos)});
  }

  std::set<EdgeKey> seen;
  const double rcom = fleet_min_comm(cfg);
  for (const auto& e : t.edges) {
    if (e.first == e.second) {
      out.push_back({"BadEdge", "self loop at node " + std::to_string(e.first)});
      continue;
    }
    const TreeNode* a = t.find_node(e.first);
    const TreeNode* b = t.find_node(e.second);
    if (!a || !b) {
      out.push_back({"BadEdge", "edge (" + std::to_string(e.first) + "," +
                                    std::to_string(e.second) + ") references a missing node"});
      continue;
    }
    if (!seen.insert(edge_key(e.first, e.second)).second)
      out.push_back({"BadEdge", "duplicate edge (" + std::to_string(e.first) + "," +
                                    std::to_string(e.second) + ")"});
    const double d = distance(a->pos, b->pos);
    if (d > rcom + kGeomTol)
      out.push_back({"EdgeTooLong", "edge (" + std::to_string(e.first) + "," +
                                        std::to_string(e.second) + ") spans " +
                                        std::to_string(d) + " m"});
    auto w = t.weights.find(edge_key(e.first, e.second));
    if (w == t.weights.end() || w->second <= 0.0)
      out.push_back({"BadWeight", "edge (" + std::to_string(e.first) + "," +
                                      std::to_string(e.second) +
                                      ") lacks a positive capacity"});
  }

  // Connectivity + acyclicity: a tree has |V|-1 edges and is connected.
  if (t.nodes.size() > 0) {
    if (t.edges.size() != t.nodes.size() - 1) {
      out.push_back({"NotATree", "expected " + std::to_string(t.nodes.size() - 1) +
                                     " edges, found " + std::to_string(t.edges.size())});
    } else {
      std::map<int, std::vector<int>> adj;
      for (const auto& e : t.edges) {
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
      }
      std::set<int> reached;
      std::queue<int> q;
      if (!t.nodes.empty()) {
        q.push(t.nodes.front().id);
        reached.insert(t.nodes.front().id);
      }
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
          if (reached.insert(w).second) q.push(w);
      }
      if (reached.size() != by_id.size())
        out.push_back({"NotATree", "only " + std::to_string(reached.size()) + " of " +
                                       std::to_string(by_id.size()) +
                                       " nodes reachable from node " +
                                       std::to_string(t.nodes.front().id)});
    }
  }
}

void check_coverage(const CoverageTree& t, const ScenarioConfig& cfg,
                    std::vector<Violation>& out) {
  std::map<int, const Target*> targets;
  for (const auto& tg : cfg.targets) targets[tg.id] = &tg;

  const double rsens = fleet_min_sense(cfg);
  std::set<int> covered_ids;
  for (const auto& [node_id, target_id] : t.covered) {
    const TreeNode* n = t.find_node(node_id);
    if (!n) {
      out.push_back({"CoverageRole", "coverage references missing node " +
                                         std::to_string(node_id)});
      continue;
    }
    if (n->role != NodeRole::Inspector)
      out.push_back({"CoverageRole", "node " + std::to_string(node_id) +
                                         " covers a target but is not an inspector"});
    auto it = targets.find(target_id);
    if (it == targets.end()) {
      out.push_back({"UnknownTarget", "covered target " + std::to_string(target_id) +
                                          " is not in the scenario"});
      continue;
    }
    if (!covered_ids.insert(target_id).second)
      out.push_back({"DuplicateCoverage",
                     "target " + std::to_string(target_id) + " covered twice"});
    if (distance(n->pos, it->second->position) > rsens + kGeomTol)
      out.push_back({"InspectorTooFar", "node " + std::to_string(node_id) + " is " +
                                            std::to_string(distance(n->pos, it->second->position)) +
                                            " m from target " + std::to_string(target_id)});
  }
}

}  // namespace

std::vector<Violation> validate_tree(const CoverageTree& t, const ScenarioConfig& cfg) {
  std::vector<Violation> out;
  if (t.nodes.empty()) {
    out.push_back({"BaseMissing", "tree is empty"});
    return out;
  }
  check_structure(t, cfg, out);
  check_coverage(t, cfg, out);
  if (t.nodes.size() >= 1 && t.nodes.size() - 1 > cfg.uavs.size())
    out.push_back({"FleetExceeded", std::to_string(t.nodes.size() - 1) +
                                        " stations but only " +
                                        std::to_string(cfg.uavs.size()) + " UAVs"});
  return out;
}

std::vector<Violation> validate_plan(const Plan& plan, const ScenarioConfig& cfg) {
  std::vector<Violation> out = validate_tree(plan.formation, cfg);
  const CoverageTree& t = plan.formation;

  std::map<int, const UavSpec*> fleet;
  for (const auto& u : cfg.uavs) fleet[u.id] = &u;

  // Assignment: injective uav -> non-base node, all stations manned.
  std::set<int> used_nodes;
  for (const auto& [uav_id, node_id] : plan.assignment) {
    auto uit = fleet.find(uav_id);
    const TreeNode* n = t.find_node(node_id);
    if (uit == fleet.end()) {
      out.push_back({"BadAssignment", "unknown UAV id " + std::to_string(uav_id)});
      continue;
    }
    if (!n || n->role == NodeRole::Base) {
      out.push_back({"BadAssignment", "UAV " + std::to_string(uav_id) +
                                          " assigned to invalid node " +
                                          std::to_string(node_id)});
      continue;
    }
    if (!used_nodes.insert(node_id).second)
      out.push_back({"AssignmentNotInjective",
                     "node " + std::to_string(node_id) + " manned twice"});
    if (!energy_feasible(*uit->second, n->pos, cfg.edge, cfg.mission_horizon))
      out.push_back({"EnergyInfeasible", "UAV " + std::to_string(uav_id) +
                                             " cannot hover at node " +
                                             std::to_string(node_id) +
                                             " and return to the edge"});
  }
  for (const auto& n : t.nodes) {
    if (n.role == NodeRole::Base) continue;
    if (!used_nodes.count(n.id))
      out.push_back({"NodeUnassigned", "no UAV assigned to node " + std::to_string(n.id)});
  }

  // Per-UAV link radii, now that stations are manned by concrete UAVs.
  std::map<int, const UavSpec*> at_node;
  for (const auto& [uav_id, node_id] : plan.assignment) {
    auto uit = fleet.find(uav_id);
    if (uit != fleet.end()) at_node[node_id] = uit->second;
  }
  for (const auto& e : t.edges) {
    const TreeNode* a = t.find_node(e.first);
    const TreeNode* b = t.find_node(e.second);
    if (!a || !b) continue;
    double limit = std::numeric_limits<double>::infinity();
    for (const TreeNode* n : {a, b}) {
      if (n->role == NodeRole::Base) continue;  // edge server radios are not the bound
      auto it = at_node.find(n->id);
      if (it != at_node.end()) limit = std::min(limit, it->second->comm_radius);
    }
    const double d = distance(a->pos, b->pos);
    if (d > limit + kGeomTol)
      out.push_back({"EdgeTooLong", "edge (" + std::to_string(e.first) + "," +
                                        std::to_string(e.second) + ") spans " +
                                        std::to_string(d) +
                                        " m, over the assigned UAV's radius"});
  }

  // Routes: unique tree path from each covered target's inspector to the base.
  std::map<int, std::vector<int>> adj;
  for (const auto& e : t.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  std::map<int, int> inspector_of;  // target -> inspector node
  for (const auto& [node_id, target_id] : t.covered) inspector_of[target_id] = node_id;

  const int base = t.base_id();
  for (const auto& [target_id, node_id] : inspector_of) {
    auto rit = plan.routes.find(target_id);
    if (rit == plan.routes.end()) {
      out.push_back({"RouteMismatch", "no route for covered target " + std::to_string(target_id)});
      continue;
    }
    const auto& route = rit->second;
    bool ok = route.size() >= 1 && route.front() == node_id && route.back() == base;
    if (ok) {
      std::set<int> visited;
      for (size_t i = 0; ok && i < route.size(); ++i) {
        if (!visited.insert(route[i]).second) ok = false;  // a tree path never repeats
        if (i + 1 < route.size()) {
          const auto& nb = adj[route[i]];
          if (std::find(nb.begin(), nb.end(), route[i + 1]) == nb.end()) ok = false;
        }
      }
    }
    if (!ok)
      out.push_back({"RouteMismatch", "route for target " + std::to_string(target_id) +
                                          " is not the tree path to the base"});
  }
  for (const auto& [target_id, route] : plan.routes) {
    if (!inspector_of.count(target_id))
      out.push_back({"RouteMismatch", "route present for uncovered target " +
                                          std::to_string(target_id)});
  }

  // Compression levels for every covered target.
  for (const auto& [target_id, node_id] : inspector_of) {
    auto lit = plan.compression.levels.find(target_id);
    if (lit == plan.compression.levels.end())
      out.push_back({"MissingLevel", "no compression level for covered target " +
                                         std::to_string(target_id)});
    else if (lit->second < 1 || lit->second > 100)
      out.push_back({"MissingLevel", "level " + std::to_string(lit->second) +
                                         " for target " + std::to_string(target_id) +
                                         " outside 1..100"});
  }
  return out;
}

}  // namespace uavplan

#include "uavplan/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "uavplan/planner.hpp"
#include "uavplan/steiner.hpp"

namespace uavplan {

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

CoverageTree base_only_tree(const Point2D& edge) {
  CoverageTree t;
  t.nodes.push_back({0, edge, NodeRole::Base});
  return t;
}

}  // namespace

std::vector<Violation> feasibility_check(const Plan& plan, const ScenarioConfig& cfg,
                                         const QualityProfile& p) {
  // Structural, energy, assignment, route, and level checks.
  std::vector<Violation> out = validate_plan(plan, cfg);

  // Aggregate-rate cap: per edge, the summed payload of all flows routed
  // across it must fit the edge's nominal capacity.
  std::map<int, const Target*> target_of;
  for (const auto& t : cfg.targets) target_of[t.id] = &t;
  std::map<EdgeKey, double> load;
  for (const auto& [target, path] : plan.routes) {
    auto tit = target_of.find(target);
    auto lit = plan.compression.levels.find(target);
    if (tit == target_of.end() || lit == plan.compression.levels.end()) continue;
    if (lit->second < 1 || lit->second > 100) continue;  // already reported
    double size = 0.0;
    try {
      size = query(p, tit->second->scenario, lit->second).size;
    } catch (const PlanningError& e) {
      out.push_back({"RateCapViolation", std::string("profile lookup failed: ") + e.what()});
      continue;
    }
    for (size_t i = 0; i + 1 < path.size(); ++i) load[edge_key(path[i], path[i + 1])] += size;
  }
  for (const auto& [e, used] : load) {
    auto wit = plan.formation.weights.find(e);
    if (wit == plan.formation.weights.end()) continue;  // already reported
    if (used > wit->second + 1e-9)
      out.push_back({"RateCapViolation",
                     "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                         ") carries " + std::to_string(used) + " B/s over capacity " +
                         std::to_string(wit->second)});
  }
  return out;
}

double objective_value(const Plan& plan, const ScenarioConfig& cfg, const QualityProfile& p) {
  const auto violations = feasibility_check(plan, cfg, p);
  if (!violations.empty()) {
    std::string what = "plan infeasible:";
    for (size_t i = 0; i < violations.size() && i < 4; ++i)
      what += " [" + violations[i].code + "] " + violations[i].detail + ";";
    throw InfeasiblePlanError(what);
  }
  std::map<int, const Target*> target_of;
  for (const auto& t : cfg.targets) target_of[t.id] = &t;
  double acc_sum = 0.0;
  for (const auto& [node, target] : plan.formation.covered)
    acc_sum += query(p, target_of.at(target)->scenario,
                     plan.compression.levels.at(target)).accuracy;
  double travel = 0.0;
  std::map<int, const UavSpec*> fleet;
  for (const auto& u : cfg.uavs) fleet[u.id] = &u;
  for (const auto& [uav, node] : plan.assignment)
    travel += distance(fleet.at(uav)->start, plan.formation.find_node(node)->pos);
  const auto& w = cfg.objective_weights;
  return w[0] * acc_sum + w[1] * double(plan.formation.covered.size()) - w[2] * travel;
}

// ---------------------------------------------------------------------------
// Exhaustive solver

namespace {

struct FrontierPoint {
  int level;
  double accuracy;
  double size;
};

// Pareto frontier of a scenario's level table: keep levels where no other
// level has size <= and accuracy >= (strict somewhere); among duplicates of
// the same (accuracy, size), keep the lowest level. Sorted by size ascending.
std::vector<FrontierPoint> pareto_frontier(const QualityProfile& p,
                                           const std::string& scenario) {
  const auto& table = p.table.at(scenario);
  std::vector<FrontierPoint> pts;
  for (const auto& [level, q] : table) pts.push_back({level, q.accuracy, q.size});
  std::sort(pts.begin(), pts.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    if (a.size != b.size) return a.size < b.size;
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.level < b.level;
  });
  std::vector<FrontierPoint> frontier;
  double best_acc = -std::numeric_limits<double>::infinity();
  for (const auto& pt : pts) {
    if (pt.accuracy > best_acc) {
      frontier.push_back(pt);
      best_acc = pt.accuracy;
    }
  }
  return frontier;
}

// Enumerate set partitions of {0..k-1} as restricted-growth strings.
std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(k, 0);
  while (true) {
    out.push_back(a);
    // next restricted-growth string
    int i = k - 1;
    for (; i > 0; --i) {
      int mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, a[j]);
      if (a[i] <= mx) break;
    }
    if (i == 0) break;
    a[i] += 1;
    for (int j = i + 1; j < k; ++j) a[j] = 0;
  }
  return out;
}

struct StructureContext {
  Plan plan;                         // formation/assignment/routes filled
  double travel = 0.0;
  std::vector<int> subset;           // covered target ids, ascending
  std::vector<std::vector<EdgeKey>> flow_edges;  // per subset index
  std::map<EdgeKey, double> capacity;
};

}  // namespace

ExactSolution exact_plan(const ScenarioConfig& cfg, const QualityProfile& p,
                         const CandidateSet& cand, const ExactLimits& limits) {
  if (static_cast<int>(cfg.targets.size()) > limits.max_targets)
    throw InstanceTooLargeError("instance has " + std::to_string(cfg.targets.size()) +
                                " targets; exact solver caps at " +
                                std::to_string(limits.max_targets));
  if (static_cast<int>(cfg.uavs.size()) > limits.max_uavs)
    throw InstanceTooLargeError("instance has " + std::to_string(cfg.uavs.size()) +
                                " UAVs; exact solver caps at " +
                                std::to_string(limits.max_uavs));
  if (cfg.uavs.empty()) throw NoFeasibleAssignmentError("no UAVs in the scenario");

  const auto t_start = std::chrono::steady_clock::now();
  auto expired = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count() >
           limits.time_budget_s;
  };

  const double rcom = fleet_min_comm(cfg);
  const double rsens = fleet_min_sense(cfg);
  const auto& w = cfg.objective_weights;

  std::vector<Target> targets = cfg.targets;
  std::sort(targets.begin(), targets.end(),
            [](const Target& a, const Target& b) { return a.id < b.id; });
  const int n = static_cast<int>(targets.size());

  std::map<std::string, std::vector<FrontierPoint>> frontiers;
  for (const auto& t : targets)
    if (!frontiers.count(t.scenario)) {
      if (!p.table.count(t.scenario))
        throw UnknownScenarioError("no profile row for scenario '" + t.scenario + "'");
      frontiers[t.scenario] = pareto_frontier(p, t.scenario);
    }

  // Inspector placements per target: its own position plus any candidate
  // position within sensing range.
  std::vector<std::vector<Point2D>> placements(n);
  for (int i = 0; i < n; ++i) {
    placements[i].push_back(targets[i].position);
    for (const auto& c : cand.positions)
      if (distance(c, targets[i].position) <= rsens + 1e-9 &&
          !(c == targets[i].position))
        placements[i].push_back(c);
  }

  // Baseline: cover nothing.
  ExactSolution best;
  best.plan.formation = base_only_tree(cfg.edge);
  best.objective = 0.0;
  bool ran_out = false;

  // Evaluate all compression-level combinations for a fixed structure,
  // updating `best`. Recursion over subset index with per-edge load pruning.
  auto search_levels = [&](const StructureContext& sc) {
    const int k = static_cast<int>(sc.subset.size());
    std::vector<const std::vector<FrontierPoint>*> fr(k);
    std::map<int, const Target*> target_of;
    for (const auto& t : targets) target_of[t.id] = &t;
    for (int i = 0; i < k; ++i)
      fr[i] = &frontiers.at(target_of.at(sc.subset[i])->scenario);

    // Fast path: if every target can take its accuracy-maximal frontier point
    // simultaneously, that combination is optimal for this structure.
    {
      std::map<EdgeKey, double> load;
      double acc_sum = 0.0;
      std::vector<int> levels(k);
      for (int i = 0; i < k; ++i) {
        const FrontierPoint& top = fr[i]->back();  // frontier sorted by size asc
        levels[i] = top.level;
        acc_sum += top.accuracy;
        for (const auto& e : sc.flow_edges[i]) load[e] += top.size;
      }
      bool ok = true;
      for (const auto& [e, used] : load)
        if (used > sc.capacity.at(e) + 1e-9) ok = false;
      if (ok) {
        const double obj = w[0] * acc_sum + w[1] * k - w[2] * sc.travel;
        if (obj > best.objective) {
          best.objective = obj;
          best.plan = sc.plan;
          for (int i = 0; i < k; ++i) {
            best.plan.compression.levels[sc.subset[i]] = levels[i];
            const auto& s = target_of.at(sc.subset[i])->scenario;
            best.plan.compression.losses[sc.subset[i]] =
                query(p, s, 1).accuracy - query(p, s, levels[i]).accuracy;
          }
        }
        return;
      }
    }

    std::map<EdgeKey, double> load;
    std::vector<int> choice(k, 0);

    std::function<void(int, double)> rec = [&](int i, double acc) {
      if (expired()) {
        ran_out = true;
        return;
      }
      if (i == k) {
        const double obj = w[0] * acc + w[1] * k - w[2] * sc.travel;
        if (obj > best.objective) {
          best.objective = obj;
          best.plan = sc.plan;
          for (int j = 0; j < k; ++j) {
            const FrontierPoint& fp = (*fr[j])[choice[j]];
            best.plan.compression.levels[sc.subset[j]] = fp.level;
            const auto& s = target_of.at(sc.subset[j])->scenario;
            best.plan.compression.losses[sc.subset[j]] =
                query(p, s, 1).accuracy - fp.accuracy;
          }
        }
        return;
      }
      for (size_t c = 0; c < fr[i]->size(); ++c) {
        const FrontierPoint& fp = (*fr[i])[c];
        bool ok = true;
        for (const auto& e : sc.flow_edges[i])
          if (load[e] + fp.size > sc.capacity.at(e) + 1e-9) {
            ok = false;
            break;
          }
        if (!ok) break;  // frontier sorted by size ascending: larger won't fit
        for (const auto& e : sc.flow_edges[i]) load[e] += fp.size;
        choice[i] = static_cast<int>(c);
        rec(i + 1, acc + fp.accuracy);
        for (const auto& e : sc.flow_edges[i]) load[e] -= fp.size;
        if (ran_out) return;
      }
    };
    rec(0, 0.0);
  };

  // Enumerate subsets (bitmask ascending), partitions, and placements.
  for (int mask = 1; mask < (1 << n) && !ran_out; ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) idx.push_back(i);
    const int k = static_cast<int>(idx.size());

    for (const auto& part : set_partitions(k)) {
      if (expired()) {
        ran_out = true;
        break;
      }
      const int groups = *std::max_element(part.begin(), part.end()) + 1;

      // Odometer over inspector placements for the subset.
      std::vector<size_t> pick(k, 0);
      while (true) {
        // Build one tree per partition group over the picked placements.
        std::vector<CoverageTree> parts = {base_only_tree(cfg.edge)};
        for (int g = 0; g < groups; ++g) {
          TerminalSet ts;
          ts.base = cfg.edge;
          ts.comm_radius = rcom;
          for (int j = 0; j < k; ++j)
            if (part[j] == g)
              ts.terminals.push_back({targets[idx[j]].id, placements[idx[j]][pick[j]]});
          parts.push_back(tst(ts, cfg.link_rate));
        }
        CoverageTree merged = merge_trees(parts);

        if (merged.nodes.size() - 1 <= cfg.uavs.size()) {
          StructureContext sc;
          sc.plan.formation = std::move(merged);
          bool assignable = true;
          try {
            sc.plan.assignment = uav_assignment(sc.plan.formation, cfg);
          } catch (const NoFeasibleAssignmentError&) {
            assignable = false;
          }
          if (assignable) {
            sc.plan.routes = route_map(sc.plan.formation);
            std::map<int, const UavSpec*> fleet_of;
            for (const auto& u : cfg.uavs) fleet_of[u.id] = &u;
            sc.travel = 0.0;
            for (const auto& [uav, node] : sc.plan.assignment)
              sc.travel += distance(fleet_of.at(uav)->start,
                                    sc.plan.formation.find_node(node)->pos);
            for (int j = 0; j < k; ++j) sc.subset.push_back(targets[idx[j]].id);
            std::map<int, int> inspector_of;
            for (const auto& [node, target] : sc.plan.formation.covered)
              inspector_of[target] = node;
            const int base = sc.plan.formation.base_id();
            for (int j = 0; j < k; ++j) {
              const auto path =
                  shortest_path(sc.plan.formation, inspector_of.at(sc.subset[j]), base);
              std::vector<EdgeKey> edges;
              for (size_t q = 0; q + 1 < path.size(); ++q)
                edges.push_back(edge_key(path[q], path[q + 1]));
              sc.flow_edges.push_back(std::move(edges));
            }
            sc.capacity = sc.plan.formation.weights;
            search_levels(sc);
          }
        }

        // Advance the placement odometer.
        int pos = k - 1;
        while (pos >= 0) {
          if (++pick[pos] < placements[idx[pos]].size()) break;
          pick[pos] = 0;
          --pos;
        }
        if (pos < 0 || ran_out) break;
      }
      if (ran_out) break;
    }
  }

  best.optimal = !ran_out;
  return best;
}

}  // namespace uavplan

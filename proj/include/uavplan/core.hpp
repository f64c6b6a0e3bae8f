#pragma once

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core domain model: scenario description, coverage trees, plans, and the
// structural/energy invariants every planner output must satisfy.

namespace uavplan {

// ---------------------------------------------------------------------------
// Errors

// Base class for all planning-domain errors.
struct PlanningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quality profile has no row for the requested scenario label.
struct UnknownScenarioError : PlanningError {
  using PlanningError::PlanningError;
};

// Compression level outside 1..100.
struct LevelOutOfRangeError : PlanningError {
  using PlanningError::PlanningError;
};

// Scenario has no targets (nothing to plan for).
struct EmptyScenarioError : PlanningError {
  using PlanningError::PlanningError;
};

// Candidate tree covers no target, so its per-target cost is undefined.
struct EmptyCoverageError : PlanningError {
  using PlanningError::PlanningError;
};

// A tree node cannot be reached from the base within communication range.
struct DisconnectedNodeError : PlanningError {
  using PlanningError::PlanningError;
};

// No injective UAV->node assignment satisfies the energy budgets.
struct NoFeasibleAssignmentError : PlanningError {
  using PlanningError::PlanningError;
};

// A plan handed to a consumer that requires feasibility has violations.
struct InfeasiblePlanError : PlanningError {
  using PlanningError::PlanningError;
};

// Instance exceeds the exact solver's enumeration limits.
struct InstanceTooLargeError : PlanningError {
  using PlanningError::PlanningError;
};

// Malformed input file (CSV/JSON); carries a 1-based line where known.
struct ParseError : PlanningError {
  explicit ParseError(const std::string& msg, int line_number = 0)
      : PlanningError(msg), line(line_number) {}
  int line = 0;
};

// ---------------------------------------------------------------------------
// Geometry & scenario data

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

bool operator==(const Point2D& a, const Point2D& b);

double distance(const Point2D& a, const Point2D& b);

struct UavSpec {
  int id = 0;
  Point2D start;              // launch position
  double comm_radius = 0.0;   // m, max link length to a neighbor
  double sense_radius = 0.0;  // m, max distance to an inspected target
  double speed = 0.0;         // m/s
  double energy = 0.0;        // J, battery budget
  double move_cost = 0.0;     // J/m
  double hover_cost = 0.0;    // J/s
};

struct Target {
  int id = 0;
  Point2D position;
  std::string scenario;   // quality-profile row this target's imagery follows
  double task_rate = 0.0; // tasks/s generated while covered
};

struct ScenarioConfig {
  Point2D area;                 // width x height, origin at (0,0)
  Point2D edge;                 // ground edge-server position
  std::vector<UavSpec> uavs;
  std::vector<Target> targets;
  double deadline = 0.1;        // s, per-task latency bound
  double channel_error = 0.0;   // per-hop transmission failure probability
  double link_rate = 2.0e6;     // bytes/s per link
  double mission_horizon = 600; // s, hover duration budgeted per UAV
  std::array<double, 3> objective_weights{1.0, 1000.0, 0.001};
};

// ---------------------------------------------------------------------------
// Coverage trees & plans

enum class NodeRole { Base, Relay, Inspector };

struct TreeNode {
  int id = 0;
  Point2D pos;
  NodeRole role = NodeRole::Relay;
};

// Undirected edge key, normalized to (min id, max id).
using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b);

struct CoverageTree {
  std::vector<TreeNode> nodes;        // node 0 convention: the base
  std::vector<EdgeKey> edges;
  std::map<EdgeKey, double> weights;  // bytes/s capacity per edge
  std::map<int, int> covered;         // inspector node id -> target id

  const TreeNode* find_node(int id) const;
  int base_id() const;                // id of the unique Base node (-1 if none)
  std::set<int> covered_targets() const;
};

struct CompressionAssignment {
  std::map<int, int> levels;      // target id -> level in 1..100
  std::map<int, double> losses;   // target id -> accuracy lost vs level 1
  std::set<int> saturated;        // targets forced to level 100 over budget
};

struct Plan {
  CoverageTree formation;
  CompressionAssignment compression;
  std::map<int, int> assignment;           // uav id -> non-base node id
  std::map<int, std::vector<int>> routes;  // target id -> node path, inspector..base
};

struct Violation {
  std::string code;    // stable machine-readable identifier
  std::string detail;  // human-readable context
};

// ---------------------------------------------------------------------------
// Energy model

// Energy a UAV spends flying from its start to `station` and hovering there
// for `horizon` seconds.
double uav_energy_spent(const UavSpec& u, const Point2D& station, double horizon);

// True when the UAV can reach `station`, hover for `horizon` seconds, and
// still reach the edge server at `edge` on the remaining battery
// (non-strict: exactly exhausting the battery is feasible).
bool energy_feasible(const UavSpec& u, const Point2D& station, const Point2D& edge,
                     double horizon);

// ---------------------------------------------------------------------------
// Validation

// Structural checks on a bare tree: unique ids, exactly one base anchored at
// the edge server, edges form a spanning tree, link lengths within the
// fleet-wide minimum comm radius, nodes inside the area, inspectors within
// the fleet-wide minimum sense radius of their targets, positive capacities,
// and node count within fleet size. Returns all violations found.
std::vector<Violation> validate_tree(const CoverageTree& t, const ScenarioConfig& cfg);

// validate_tree plus plan-level checks: a complete injective UAV assignment
// honoring per-UAV radii and energy budgets, routes that match the unique
// tree paths, and a compression level in 1..100 for every covered target.
std::vector<Violation> validate_plan(const Plan& plan, const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Scenario serialization (strict JSON; unknown keys rejected)

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

// Plan serialization (used by the CLI for plan dumps; lossless round-trip).
std::string plan_to_json(const Plan& plan);
Plan plan_from_json(const std::string& text);

}  // namespace uavplan

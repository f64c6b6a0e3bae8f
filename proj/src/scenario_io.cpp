#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uavplan/core.hpp"

// Strict JSON I/O for scenarios and plans. Unknown keys are rejected so that
// typos in hand-written scenario files fail loudly instead of silently
// falling back to defaults.

namespace uavplan {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  }
}

Point2D point_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to(const Point2D& p) { return json::array({p.x, p.y}); }

double number_from(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

int int_from(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

UavSpec uav_from(const json& j, const std::string& where) {
  require_keys(j,
               {"id", "start", "comm_radius", "sense_radius", "speed", "energy",
                "move_cost", "hover_cost"},
               {"id", "start", "comm_radius", "sense_radius", "speed", "energy",
                "move_cost", "hover_cost"},
               where);
  UavSpec u;
  u.id = int_from(j["id"], where + ".id");
  u.start = point_from(j["start"], where + ".start");
  u.comm_radius = number_from(j["comm_radius"], where + ".comm_radius");
  u.sense_radius = number_from(j["sense_radius"], where + ".sense_radius");
  u.speed = number_from(j["speed"], where + ".speed");
  u.energy = number_from(j["energy"], where + ".energy");
  u.move_cost = number_from(j["move_cost"], where + ".move_cost");
  u.hover_cost = number_from(j["hover_cost"], where + ".hover_cost");
  return u;
}

Target target_from(const json& j, const std::string& where) {
  require_keys(j, {"id", "position", "scenario", "task_rate"},
               {"id", "position", "scenario", "task_rate"}, where);
  Target t;
  t.id = int_from(j["id"], where + ".id");
  t.position = point_from(j["position"], where + ".position");
  if (!j["scenario"].is_string()) throw ParseError(where + ".scenario: expected a string");
  t.scenario = j["scenario"].get<std::string>();
  t.task_rate = number_from(j["task_rate"], where + ".task_rate");
  return t;
}

void validate_config(const ScenarioConfig& cfg) {
  if (cfg.area.x <= 0 || cfg.area.y <= 0) throw ParseError("area: must be positive");
  if (cfg.edge.x < 0 || cfg.edge.y < 0 || cfg.edge.x > cfg.area.x || cfg.edge.y > cfg.area.y)
    throw ParseError("edge: outside the area");
  if (cfg.deadline <= 0) throw ParseError("deadline: must be positive");
  if (cfg.channel_error < 0 || cfg.channel_error >= 1)
    throw ParseError("channel_error: must be in [0, 1)");
  if (cfg.link_rate <= 0) throw ParseError("link_rate: must be positive");
  if (cfg.mission_horizon <= 0) throw ParseError("mission_horizon: must be positive");
  for (double w : cfg.objective_weights)
    if (w < 0) throw ParseError("objective_weights: must be non-negative");

  std::set<int> uav_ids;
  for (const auto& u : cfg.uavs) {
    const std::string where = "uavs[" + std::to_string(u.id) + "]";
    if (!uav_ids.insert(u.id).second) throw ParseError(where + ": duplicate id");
    if (u.id < 0) throw ParseError(where + ": negative id");
    if (u.comm_radius <= 0) throw ParseError(where + ": comm_radius must be positive");
    if (u.sense_radius <= 0) throw ParseError(where + ": sense_radius must be positive");
    if (u.speed <= 0) throw ParseError(where + ": speed must be positive");
    if (u.energy < 0 || u.move_cost < 0 || u.hover_cost < 0)
      throw ParseError(where + ": energy terms must be non-negative");
  }
  std::set<int> target_ids;
  for (const auto& t : cfg.targets) {
    const std::string where = "targets[" + std::to_string(t.id) + "]";
    if (!target_ids.insert(t.id).second) throw ParseError(where + ": duplicate id");
    if (t.id < 0) throw ParseError(where + ": negative id");
    if (t.position.x < 0 || t.position.y < 0 || t.position.x > cfg.area.x ||
        t.position.y > cfg.area.y)
      throw ParseError(where + ": position outside the area");
    if (t.scenario.empty()) throw ParseError(where + ": empty scenario label");
    if (t.task_rate <= 0) throw ParseError(where + ": task_rate must be positive");
  }
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  require_keys(j,
               {"area", "edge", "uavs", "targets", "deadline", "channel_error",
                "link_rate", "mission_horizon", "objective_weights"},
               {"area", "edge", "uavs", "targets"}, "scenario");
  ScenarioConfig cfg;
  cfg.area = point_from(j["area"], "area");
  cfg.edge = point_from(j["edge"], "edge");
  if (!j["uavs"].is_array()) throw ParseError("uavs: expected an array");
  int idx = 0;
  for (const auto& ju : j["uavs"])
    cfg.uavs.push_back(uav_from(ju, "uavs[" + std::to_string(idx++) + "]"));
  if (!j["targets"].is_array()) throw ParseError("targets: expected an array");
  idx = 0;
  for (const auto& jt : j["targets"])
    cfg.targets.push_back(target_from(jt, "targets[" + std::to_string(idx++) + "]"));
  if (j.contains("deadline")) cfg.deadline = number_from(j["deadline"], "deadline");
  if (j.contains("channel_error"))
    cfg.channel_error = number_from(j["channel_error"], "channel_error");
  if (j.contains("link_rate")) cfg.link_rate = number_from(j["link_rate"], "link_rate");
  if (j.contains("mission_horizon"))
    cfg.mission_horizon = number_from(j["mission_horizon"], "mission_horizon");
  if (j.contains("objective_weights")) {
    const auto& jw = j["objective_weights"];
    if (!jw.is_array() || jw.size() != 3)
      throw ParseError("objective_weights: expected [alpha, beta, eta]");
    for (int i = 0; i < 3; ++i)
      cfg.objective_weights[i] =
          number_from(jw[i], "objective_weights[" + std::to_string(i) + "]");
  }
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["area"] = point_to(cfg.area);
  j["edge"] = point_to(cfg.edge);
  j["deadline"] = cfg.deadline;
  j["channel_error"] = cfg.channel_error;
  j["link_rate"] = cfg.link_rate;
  j["mission_horizon"] = cfg.mission_horizon;
  j["objective_weights"] = json::array(
      {cfg.objective_weights[0], cfg.objective_weights[1], cfg.objective_weights[2]});
  j["uavs"] = json::array();
  for (const auto& u : cfg.uavs) {
    json ju;
    ju["id"] = u.id;
    ju["start"] = point_to(u.start);
    ju["comm_radius"] = u.comm_radius;
    ju["sense_radius"] = u.sense_radius;
    ju["speed"] = u.speed;
    ju["energy"] = u.energy;
    ju["move_cost"] = u.move_cost;
    ju["hover_cost"] = u.hover_cost;
    j["uavs"].push_back(ju);
  }
  j["targets"] = json::array();
  for (const auto& t : cfg.targets) {
    json jt;
    jt["id"] = t.id;
    jt["position"] = point_to(t.position);
    jt["scenario"] = t.scenario;
    jt["task_rate"] = t.task_rate;
    j["targets"].push_back(jt);
  }
  return j.dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write scenario file: " + path);
  out << scenario_to_json(cfg);
}

// ---------------------------------------------------------------------------
// Plan serialization

namespace {

const char* role_name(NodeRole r) {
  switch (r) {
    case NodeRole::Base: return "base";
    case NodeRole::Relay: return "relay";
    case NodeRole::Inspector: return "inspector";
  }
  return "relay";
}

NodeRole role_from(const std::string& s, const std::string& where) {
  if (s == "base") return NodeRole::Base;
  if (s == "relay") return NodeRole::Relay;
  if (s == "inspector") return NodeRole::Inspector;
  throw ParseError(where + ": unknown role '" + s + "'");
}

}  // namespace

std::string plan_to_json(const Plan& plan) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : plan.formation.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["pos"] = point_to(n.pos);
    jn["role"] = role_name(n.role);
    j["nodes"].push_back(jn);
  }
  j["edges"] = json::array();
  for (const auto& e : plan.formation.edges) {
    json je;
    je["a"] = e.first;
    je["b"] = e.second;
    je["capacity"] = plan.formation.weights.at(edge_key(e.first, e.second));
    j["edges"].push_back(je);
  }
  j["covered"] = json::array();
  for (const auto& [node, target] : plan.formation.covered)
    j["covered"].push_back(json{{"node", node}, {"target", target}});
  j["levels"] = json::array();
  for (const auto& [target, level] : plan.compression.levels)
    j["levels"].push_back(json{{"target", target}, {"level", level}});
  j["losses"] = json::array();
  for (const auto& [target, loss] : plan.compression.losses)
    j["losses"].push_back(json{{"target", target}, {"loss", loss}});
  j["saturated"] = json(plan.compression.saturated);
  j["assignment"] = json::array();
  for (const auto& [uav, node] : plan.assignment)
    j["assignment"].push_back(json{{"uav", uav}, {"node", node}});
  j["routes"] = json::array();
  for (const auto& [target, path] : plan.routes)
    j["routes"].push_back(json{{"target", target}, {"path", path}});
  return j.dump(2) + "\n";
}

Plan plan_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("plan JSON: ") + e.what());
  }
  require_keys(j, {"nodes", "edges", "covered", "levels", "losses", "saturated",
                   "assignment", "routes"},
               {"nodes", "edges", "covered", "levels", "assignment", "routes"}, "plan");
  Plan plan;
  for (const auto& jn : j["nodes"]) {
    require_keys(jn, {"id", "pos", "role"}, {"id", "pos", "role"}, "plan.nodes[]");
    TreeNode n;
    n.id = int_from(jn["id"], "plan.nodes[].id");
    n.pos = point_from(jn["pos"], "plan.nodes[].pos");
    n.role = role_from(jn["role"].get<std::string>(), "plan.nodes[].role");
    plan.formation.nodes.push_back(n);
  }
  for (const auto& je : j["edges"]) {
    require_keys(je, {"a", "b", "capacity"}, {"a", "b", "capacity"}, "plan.edges[]");
    int a = int_from(je["a"], "plan.edges[].a");
    int b = int_from(je["b"], "plan.edges[].b");
    plan.formation.edges.push_back(edge_key(a, b));
    plan.formation.weights[edge_key(a, b)] =
        number_from(je["capacity"], "plan.edges[].capacity");
  }
  for (const auto& jc : j["covered"]) {
    require_keys(jc, {"node", "target"}, {"node", "target"}, "plan.covered[]");
    plan.formation.covered[int_from(jc["node"], "plan.covered[].node")] =
        int_from(jc["target"], "plan.covered[].target");
  }
  for (const auto& jl : j["levels"]) {
    require_keys(jl, {"target", "level"}, {"target", "level"}, "plan.levels[]");
    plan.compression.levels[int_from(jl["target"], "plan.levels[].target")] =
        int_from(jl["level"], "plan.levels[].level");
  }
  if (j.contains("losses"))
    for (const auto& jl : j["losses"]) {
      require_keys(jl, {"target", "loss"}, {"target", "loss"}, "plan.losses[]");
      plan.compression.losses[int_from(jl["target"], "plan.losses[].target")] =
          number_from(jl["loss"], "plan.losses[].loss");
    }
  if (j.contains("saturated"))
    for (const auto& js : j["saturated"])
      plan.compression.saturated.insert(int_from(js, "plan.saturated[]"));
  for (const auto& ja : j["assignment"]) {
    require_keys(ja, {"uav", "node"}, {"uav", "node"}, "plan.assignment[]");
    plan.assignment[int_from(ja["uav"], "plan.assignment[].uav")] =
        int_from(ja["node"], "plan.assignment[].node");
  }
  for (const auto& jr : j["routes"]) {
    require_keys(jr, {"target", "path"}, {"target", "path"}, "plan.routes[]");
    std::vector<int> path;
    for (const auto& jp : jr["path"]) path.push_back(int_from(jp, "plan.routes[].path[]"));
    plan.routes[int_from(jr["target"], "plan.routes[].target")] = std::move(path);
  }
  return plan;
}

}  // namespace uavplan

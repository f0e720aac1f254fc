#include "marrt/solution_io.hpp"

#include <cmath>

#include <json.hpp>

#include "marrt/errors.hpp"

namespace marrt {

std::string save_solution(const SolutionDocument& document) {
  nlohmann::ordered_json doc;
  doc["instance_seed"] = document.instance_seed;
  doc["algorithm"] = document.algorithm;
  doc["cost"] = document.solution.total_cost;
  auto agents = nlohmann::ordered_json::array();
  for (const auto& path : document.solution.paths) {
    nlohmann::ordered_json agent;
    agent["waypoints"] = path;
    agent["t0"] = 0;
    agent["dt"] = document.solution.dt;
    agents.push_back(std::move(agent));
  }
  doc["agents"] = std::move(agents);
  return doc.dump(2) + "\n";
}

SolutionDocument load_solution(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(std::string("solution parse error: ") + e.what(), line, column);
  }
  if (!doc.is_object()) throw SchemaViolation("(root)", "expected an object");
  for (const char* key : {"instance_seed", "algorithm", "cost", "agents"})
    if (!doc.contains(key)) throw SchemaViolation(key, "missing");

  SolutionDocument out;
  if (!doc["instance_seed"].is_number_unsigned())
    throw SchemaViolation("instance_seed", "expected a non-negative integer");
  out.instance_seed = doc["instance_seed"].get<std::uint64_t>();
  if (!doc["algorithm"].is_string()) throw SchemaViolation("algorithm", "expected a string");
  out.algorithm = doc["algorithm"].get<std::string>();
  if (!doc["cost"].is_number()) throw SchemaViolation("cost", "expected a number");
  out.solution.total_cost = doc["cost"].get<double>();
  if (!doc["agents"].is_array()) throw SchemaViolation("agents", "expected an array");

  bool have_dt = false;
  for (std::size_t i = 0; i < doc["agents"].size(); ++i) {
    const auto& agent = doc["agents"][i];
    const std::string path = "agents[" + std::to_string(i) + "]";
    if (!agent.is_object() || !agent.contains("waypoints") || !agent["waypoints"].is_array())
      throw SchemaViolation(path + ".waypoints", "expected an array of waypoint ids");
    std::vector<WaypointId> waypoints;
    for (const auto& w : agent["waypoints"]) {
      if (!w.is_number_unsigned() || w.get<std::uint64_t>() > UINT32_MAX)
        throw SchemaViolation(path + ".waypoints", "expected waypoint ids");
      waypoints.push_back(w.get<WaypointId>());
    }
    if (!agent.contains("t0") || !agent["t0"].is_number() || agent["t0"].get<double>() != 0.0)
      throw SchemaViolation(path + ".t0", "expected 0");
    if (!agent.contains("dt") || !agent["dt"].is_number())
      throw SchemaViolation(path + ".dt", "expected a number");
    const double dt = agent["dt"].get<double>();
    if (have_dt && dt != out.solution.dt)
      throw SchemaViolation(path + ".dt", "all agents must share one time step");
    out.solution.dt = dt;
    have_dt = true;
    out.solution.paths.push_back(std::move(waypoints));
  }
  return out;
}

}  // namespace marrt

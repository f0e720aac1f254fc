#include "marrt/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace marrt {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr int kFormatVersion = 1;

ParseError make_parse_error(std::string_view document, const nlohmann::json::parse_error& e) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, document.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (document[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return ParseError("parse error at line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + e.what(),
                    line, column);
}

const json& require(const json& object, const char* key, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) throw SchemaViolation(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::uint64_t as_unsigned(const json& value, const std::string& field) {
  if (!value.is_number_integer() || (value.is_number_integer() && !value.is_number_unsigned() &&
                                     value.get<std::int64_t>() < 0))
    throw SchemaViolation(field, "expected a non-negative integer");
  return value.get<std::uint64_t>();
}

WaypointId as_waypoint(const json& value, const std::string& field) {
  const auto v = as_unsigned(value, field);
  if (v > UINT32_MAX) throw SchemaViolation(field, "waypoint id out of range");
  return static_cast<WaypointId>(v);
}

double as_real(const json& value, const std::string& field) {
  if (!value.is_number()) throw SchemaViolation(field, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw SchemaViolation(field, "expected a finite number");
  return v;
}

const json& as_array(const json& value, const std::string& field) {
  if (!value.is_array()) throw SchemaViolation(field, "expected an array");
  return value;
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) throw SchemaViolation(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

MotionGraph parse_graph(const json& node) {
  if (!node.is_object()) throw SchemaViolation("graph", "expected an object");
  reject_unknown_keys(node, {"waypoints", "primitives"}, "graph");
  std::vector<Waypoint> waypoints;
  std::set<WaypointId> ids;
  const auto& wps = as_array(require(node, "waypoints", "graph"), "graph.waypoints");
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string path = "graph.waypoints[" + std::to_string(i) + "]";
    if (!wps[i].is_object()) throw SchemaViolation(path, "expected an object");
    Waypoint w;
    w.id = as_waypoint(require(wps[i], "id", path), path + ".id");
    w.position.x = as_real(require(wps[i], "x", path), path + ".x");
    w.position.y = as_real(require(wps[i], "y", path), path + ".y");
    if (!ids.insert(w.id).second) throw SchemaViolation(path + ".id", "waypoint ids must be unique");
    waypoints.push_back(w);
  }
  std::vector<MotionPrimitive> primitives;
  const auto& prims = as_array(require(node, "primitives", "graph"), "graph.primitives");
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const std::string path = "graph.primitives[" + std::to_string(i) + "]";
    if (!prims[i].is_object()) throw SchemaViolation(path, "expected an object");
    MotionPrimitive p;
    p.from = as_waypoint(require(prims[i], "from", path), path + ".from");
    p.to = as_waypoint(require(prims[i], "to", path), path + ".to");
    p.duration = as_real(require(prims[i], "duration", path), path + ".duration");
    const auto& kind = require(prims[i], "kind", path);
    if (kind == "move") {
      p.kind = PrimitiveKind::move;
    } else if (kind == "wait") {
      p.kind = PrimitiveKind::wait;
    } else {
      throw SchemaViolation(path + ".kind", "expected \"move\" or \"wait\"");
    }
    if (!ids.count(p.from)) throw SchemaViolation(path + ".from", "unknown waypoint");
    if (!ids.count(p.to)) throw SchemaViolation(path + ".to", "unknown waypoint");
    if (!(p.duration > 0.0)) throw SchemaViolation(path + ".duration", "must be positive");
    if ((p.kind == PrimitiveKind::wait) != (p.from == p.to))
      throw SchemaViolation(path + ".kind", "wait primitives are exactly the self-loops");
    primitives.push_back(p);
  }
  return MotionGraph(std::move(waypoints), std::move(primitives));
}

GridSpec parse_grid(const json& node) {
  if (!node.is_object()) throw SchemaViolation("grid", "expected an object");
  reject_unknown_keys(node, {"size", "removed"}, "grid");
  GridSpec grid;
  const auto size = as_unsigned(require(node, "size", "grid"), "grid.size");
  if (size < 1 || size > 65535) throw SchemaViolation("grid.size", "out of range");
  grid.size = static_cast<int>(size);
  const auto& removed = as_array(require(node, "removed", "grid"), "grid.removed");
  for (std::size_t i = 0; i < removed.size(); ++i) {
    const std::string path = "grid.removed[" + std::to_string(i) + "]";
    if (!removed[i].is_array() || removed[i].size() != 2)
      throw SchemaViolation(path, "expected an [x, y] pair");
    const auto x = as_unsigned(removed[i][0], path);
    const auto y = as_unsigned(removed[i][1], path);
    if (x >= size || y >= size) throw SchemaViolation(path, "cell outside the grid");
    GridCell cell{static_cast<int>(x), static_cast<int>(y)};
    if (!grid.removed.empty()) {
      const auto& prev = grid.removed.back();
      if (std::pair(prev.y, prev.x) >= std::pair(cell.y, cell.x))
        throw SchemaViolation(path, "removed cells must be sorted and unique");
    }
    grid.removed.push_back(cell);
  }
  return grid;
}

std::string violation_field(const std::string& message) {
  if (message.find("start") != std::string::npos) return "agents.start";
  if (message.find("destination") != std::string::npos) return "agents.destination";
  if (message.find("separation") != std::string::npos) return "separation";
  if (message.find("duration") != std::string::npos) return "graph.primitives";
  return "agents";
}

}  // namespace

std::string save_instance(const ProblemInstance& instance) {
  if (!instance.grid && !instance.shares_graph())
    throw InvalidParameters("the instance format stores a single motion graph shared by all agents");
  ordered_json doc;
  doc["version"] = kFormatVersion;
  doc["seed"] = instance.seed;
  doc["separation"] = instance.separation;
  if (instance.grid) {
    ordered_json grid;
    grid["size"] = instance.grid->size;
    ordered_json removed = ordered_json::array();
    for (const auto& cell : instance.grid->removed) removed.push_back({cell.x, cell.y});
    grid["removed"] = std::move(removed);
    doc["grid"] = std::move(grid);
  } else {
    const MotionGraph& g = instance.graph(0);
    ordered_json graph;
    ordered_json waypoints = ordered_json::array();
    for (const auto& w : g.waypoints()) {
      ordered_json item;
      item["id"] = w.id;
      item["x"] = w.position.x;
      item["y"] = w.position.y;
      waypoints.push_back(std::move(item));
    }
    ordered_json primitives = ordered_json::array();
    for (const auto& p : g.all_primitives()) {
      ordered_json item;
      item["from"] = p.from;
      item["to"] = p.to;
      item["duration"] = p.duration;
      item["kind"] = p.kind == PrimitiveKind::wait ? "wait" : "move";
      primitives.push_back(std::move(item));
    }
    graph["waypoints"] = std::move(waypoints);
    graph["primitives"] = std::move(primitives);
    doc["graph"] = std::move(graph);
  }
  ordered_json agents = ordered_json::array();
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    ordered_json agent;
    agent["start"] = instance.starts[i];
    agent["destination"] = instance.destinations[i];
    agents.push_back(std::move(agent));
  }
  doc["agents"] = std::move(agents);
  return doc.dump(2) + "\n";
}

ProblemInstance load_instance(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw make_parse_error(document, e);
  }
  if (!doc.is_object()) throw SchemaViolation("(root)", "expected an object");
  reject_unknown_keys(doc, {"version", "seed", "separation", "grid", "graph", "agents"}, "");

  if (as_unsigned(require(doc, "version", ""), "version") != kFormatVersion)
    throw SchemaViolation("version", "unsupported version");
  ProblemInstance instance;
  instance.seed = as_unsigned(require(doc, "seed", ""), "seed");
  instance.separation = as_real(require(doc, "separation", ""), "separation");
  if (!(instance.separation > 0.0)) throw SchemaViolation("separation", "must be positive");

  const bool has_grid = doc.contains("grid");
  const bool has_graph = doc.contains("graph");
  if (has_grid == has_graph) throw SchemaViolation("grid", "exactly one of 'grid' or 'graph' is required");

  std::shared_ptr<const MotionGraph> graph;
  try {
    if (has_grid) {
      instance.grid = parse_grid(doc["grid"]);
      graph = std::make_shared<const MotionGraph>(make_grid_graph(*instance.grid));
    } else {
      graph = std::make_shared<const MotionGraph>(parse_graph(doc["graph"]));
    }
  } catch (const InvalidParameters& e) {
    throw SchemaViolation(has_grid ? "grid" : "graph", e.what());
  }

  const auto& agents = as_array(require(doc, "agents", ""), "agents");
  if (agents.empty()) throw SchemaViolation("agents", "at least one agent is required");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    if (!agents[i].is_object()) throw SchemaViolation(path, "expected an object");
    reject_unknown_keys(agents[i], {"start", "destination"}, path);
    instance.starts.push_back(as_waypoint(require(agents[i], "start", path), path + ".start"));
    instance.destinations.push_back(
        as_waypoint(require(agents[i], "destination", path), path + ".destination"));
  }
  instance.graphs.assign(agents.size(), graph);

  auto violations = instance_violations(instance);
  if (!violations.empty()) throw SchemaViolation(violation_field(violations.front()), violations.front());
  return instance;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + temp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) throw IoError("cannot rename " + temp.string() + ": " + ec.message());
}

}  // namespace marrt

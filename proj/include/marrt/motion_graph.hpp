#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "marrt/errors.hpp"

namespace marrt {

using WaypointId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Waypoint {
  WaypointId id = 0;
  Point position;
  bool operator==(const Waypoint&) const = default;
};

enum class PrimitiveKind { move, wait };

struct MotionPrimitive {
  WaypointId from = 0;
  WaypointId to = 0;
  double duration = 1.0;
  PrimitiveKind kind = PrimitiveKind::move;
  bool operator==(const MotionPrimitive&) const = default;
};

/// Waypoints and the motion primitives executable between them.
///
/// Waypoints are kept sorted by id. The primitives leaving each waypoint are
/// stored in canonical order (target id ascending, wait last), which every
/// tie-breaking rule downstream relies on. Immutable after construction.
class MotionGraph {
 public:
  MotionGraph(std::vector<Waypoint> waypoints, std::vector<MotionPrimitive> primitives);

  std::size_t size() const { return waypoints_.size(); }
  std::span<const Waypoint> waypoints() const { return waypoints_; }
  std::size_t primitive_count() const { return primitives_.size(); }

  bool contains(WaypointId id) const { return find(id).has_value(); }
  std::optional<std::size_t> find(WaypointId id) const;
  // Throws UnknownWaypoint.
  std::size_t index_of(WaypointId id) const;

  const Point& position(WaypointId id) const { return waypoints_[index_of(id)].position; }
  std::span<const MotionPrimitive> primitives(WaypointId id) const {
    return primitives_at(index_of(id));
  }

  // Dense-index accessors used by the search code.
  WaypointId id_at(std::size_t index) const { return waypoints_[index].id; }
  const Point& position_at(std::size_t index) const { return waypoints_[index].position; }
  std::span<const MotionPrimitive> primitives_at(std::size_t index) const {
    return {primitives_.data() + offsets_[index], offsets_[index + 1] - offsets_[index]};
  }
  // Target waypoint indices, parallel to primitives_at(index).
  std::span<const std::uint32_t> targets_at(std::size_t index) const {
    return {targets_.data() + offsets_[index], offsets_[index + 1] - offsets_[index]};
  }

  // All primitives in canonical order (grouped by source id ascending).
  std::span<const MotionPrimitive> all_primitives() const { return primitives_; }

  bool operator==(const MotionGraph& other) const {
    return waypoints_ == other.waypoints_ && primitives_ == other.primitives_;
  }

 private:
  std::vector<Waypoint> waypoints_;
  std::vector<MotionPrimitive> primitives_;
  std::vector<std::uint32_t> targets_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int32_t> dense_lookup_;
  std::unordered_map<WaypointId, std::size_t> sparse_lookup_;
};

struct GridCell {
  int x = 0;
  int y = 0;
  auto operator<=>(const GridCell&) const = default;
};

// A square grid with 1 m spacing; waypoint id of cell (x, y) is y * size + x.
struct GridSpec {
  int size = 0;
  std::vector<GridCell> removed;  // sorted
  bool operator==(const GridSpec&) const = default;
};

inline WaypointId grid_id(int size, int x, int y) {
  return static_cast<WaypointId>(y * size + x);
}

// 4-neighborhood moves and a wait at every free cell, all of 1 s.
MotionGraph make_grid_graph(const GridSpec& grid);

struct ProblemInstance {
  std::vector<std::shared_ptr<const MotionGraph>> graphs;  // one per agent
  std::vector<WaypointId> starts;
  std::vector<WaypointId> destinations;
  double separation = 0.8;
  std::uint64_t seed = 0;
  std::optional<GridSpec> grid;  // set when the graphs were built from a grid

  std::size_t agent_count() const { return starts.size(); }
  const MotionGraph& graph(std::size_t agent) const { return *graphs[agent]; }
  bool shares_graph() const;
  // The common duration of all primitives (the synchronized timestep).
  double timestep() const;

  bool operator==(const ProblemInstance& other) const;
};

/// Standalone validator: lists every violated instance invariant.
std::vector<std::string> instance_violations(const ProblemInstance& instance);

// Throws InvalidInstance naming the first violation.
void require_valid(const ProblemInstance& instance);

ProblemInstance generate_grid_instance(int size, int n_agents, double obstacle_ratio,
                                       double separation, std::uint64_t seed);

constexpr int kGenerationRetryBudget = 100;

class DistanceTable {
 public:
  DistanceTable(std::shared_ptr<const MotionGraph> graph, WaypointId goal,
                std::vector<double> cost_by_index)
      : graph_(std::move(graph)), goal_(goal), cost_(std::move(cost_by_index)) {}

  WaypointId goal() const { return goal_; }
  // Infinity for waypoints that cannot reach the goal.
  double cost_to_goal(WaypointId id) const { return cost_[graph_->index_of(id)]; }
  double at_index(std::size_t index) const { return cost_[index]; }
  std::span<const double> costs() const { return cost_; }

 private:
  std::shared_ptr<const MotionGraph> graph_;
  WaypointId goal_;
  std::vector<double> cost_;
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Backward uniform-cost search from goal.
DistanceTable distance_table(std::shared_ptr<const MotionGraph> graph, WaypointId goal);

bool is_reachable(const MotionGraph& graph, WaypointId from, WaypointId to);

}  // namespace marrt

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "marrt/detail/joint_kernel.hpp"

namespace marrt {

using VertexId = std::uint32_t;

enum class JointMetric { sum, max };

// Distance between two joint configurations given as interleaved per-agent
// coordinates (x0, y0, x1, y1, ...): the sum (or max) over agents of the
// Euclidean distance between their positions.
double joint_distance(JointMetric metric, std::span<const double> a, std::span<const double> b);

struct VectorHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const;
};

/// RRT* tree over joint states expressed as per-agent waypoint indices.
///
/// Each vertex stores the joint path of its incoming edge (states only; the
/// primitives are implied by consecutive states), its cost from the root and
/// its arrival time. An incremental kd-tree over the 2n joint coordinates
/// answers nearest and radius queries; both agree exactly with a linear scan
/// under joint_distance.
class SearchTree {
 public:
  SearchTree(const detail::JointKernel& kernel, const detail::IndexState& root, JointMetric metric,
             double eta_meters, double gamma);

  std::size_t size() const { return vertices_.size(); }
  VertexId root() const { return 0; }

  std::span<const std::uint32_t> state(VertexId v) const;
  std::span<const double> coordinates(VertexId v) const;
  std::optional<VertexId> parent(VertexId v) const;
  double cost(VertexId v) const { return vertices_.at(v).cost; }
  double arrival_time(VertexId v) const { return vertices_.at(v).arrival; }
  double edge_cost(VertexId v) const { return vertices_.at(v).edge_cost; }
  // Flattened edge states (steps + 1 joint states, parent first).
  std::span<const std::uint32_t> edge_states(VertexId v) const { return vertices_.at(v).edge; }
  std::span<const VertexId> children(VertexId v) const { return vertices_.at(v).children; }

  std::optional<VertexId> find(std::span<const std::uint32_t> state) const;

  // `edge` holds the flattened joint states from parent to the new vertex.
  VertexId add_vertex(VertexId parent, std::vector<std::uint32_t> edge, double edge_cost);

  // Moves v under new_parent and shifts the cost of v's subtree accordingly.
  // Throws UnknownVertex.
  void reparent(VertexId v, VertexId new_parent, std::vector<std::uint32_t> edge, double edge_cost);

  // Adds delta to the cost of v and of every descendant. Throws UnknownVertex.
  void rewire_cost_propagation(VertexId v, double delta);

  // Throws EmptyTree (never for a constructed tree; kept for the contract).
  VertexId nearest(std::span<const std::uint32_t> state) const;
  VertexId nearest_to(std::span<const double> coordinates) const;
  // Vertices within near_radius(m), ascending by id.
  std::vector<VertexId> near(std::span<const std::uint32_t> state, std::size_t m) const;
  std::vector<VertexId> within(std::span<const double> coordinates, double radius) const;

  // r(m) = min(eta, gamma * (log m / m)^(1 / 2n)).
  double near_radius(std::size_t m) const;

  std::vector<double> coordinates_of(std::span<const std::uint32_t> state) const;
  JointMetric metric() const { return metric_; }

  // Empty when all structural invariants hold.
  std::vector<std::string> check_invariants() const;

 private:
  struct Vertex {
    std::int64_t parent = -1;
    double cost = 0.0;
    double edge_cost = 0.0;
    double arrival = 0.0;
    std::vector<std::uint32_t> edge;
    std::vector<VertexId> children;
  };
  struct KdNode {
    VertexId vertex;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t dim = 0;
  };

  void index_insert(VertexId v);
  double lower_bound(std::span<const double> offsets) const;
  void nearest_search(std::int32_t node, std::span<const double> q, std::vector<double>& offsets,
                      VertexId& best, double& best_distance) const;
  void radius_search(std::int32_t node, std::span<const double> q, std::vector<double>& offsets,
                     double radius, std::vector<VertexId>& out) const;
  void shift_subtree(VertexId v, double cost_delta, double arrival_delta);

  const detail::JointKernel* kernel_;
  std::size_t agents_;
  JointMetric metric_;
  double eta_meters_;
  double gamma_;
  std::vector<Vertex> vertices_;
  std::vector<std::uint32_t> states_;  // agents_ entries per vertex
  std::vector<double> coords_;         // 2 * agents_ entries per vertex
  std::unordered_map<std::vector<std::uint32_t>, VertexId, VectorHash> lookup_;
  std::vector<KdNode> kd_;
};

}  // namespace marrt

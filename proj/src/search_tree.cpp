#include "marrt/search_tree.hpp"

#include <algorithm>
#include <cmath>

#include "marrt/errors.hpp"

namespace marrt {

namespace {
// Slack on kd-tree pruning so that rounding in the box bound never hides a
// point the linear scan would report.
constexpr double kPruneSlack = 1e-9;
}  // namespace

double joint_distance(JointMetric metric, std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < a.size(); k += 2) {
    const double dx = a[k] - b[k];
    const double dy = a[k + 1] - b[k + 1];
    const double d = std::sqrt(dx * dx + dy * dy);
    total = metric == JointMetric::sum ? total + d : std::max(total, d);
  }
  return total;
}

std::size_t VectorHash::operator()(const std::vector<std::uint32_t>& v) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto x : v) {
    h ^= x;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

SearchTree::SearchTree(const detail::JointKernel& kernel, const detail::IndexState& root,
                       JointMetric metric, double eta_meters, double gamma)
    : kernel_(&kernel),
      agents_(kernel.agents()),
      metric_(metric),
      eta_meters_(eta_meters),
      gamma_(gamma) {
  vertices_.push_back(Vertex{});
  vertices_.back().edge = root;
  states_.insert(states_.end(), root.begin(), root.end());
  auto c = coordinates_of(root);
  coords_.insert(coords_.end(), c.begin(), c.end());
  lookup_.emplace(root, 0);
  index_insert(0);
}

std::span<const std::uint32_t> SearchTree::state(VertexId v) const {
  if (v >= vertices_.size()) throw UnknownVertex("unknown vertex " + std::to_string(v));
  return {states_.data() + static_cast<std::size_t>(v) * agents_, agents_};
}

std::span<const double> SearchTree::coordinates(VertexId v) const {
  return {coords_.data() + static_cast<std::size_t>(v) * 2 * agents_, 2 * agents_};
}

std::optional<VertexId> SearchTree::parent(VertexId v) const {
  const auto p = vertices_.at(v).parent;
  if (p < 0) return std::nullopt;
  return static_cast<VertexId>(p);
}

std::vector<double> SearchTree::coordinates_of(std::span<const std::uint32_t> s) const {
  std::vector<double> c(2 * agents_);
  for (std::size_t i = 0; i < agents_; ++i) {
    const Point& p = kernel_->position(i, s[i]);
    c[2 * i] = p.x;
    c[2 * i + 1] = p.y;
  }
  return c;
}

std::optional<VertexId> SearchTree::find(std::span<const std::uint32_t> s) const {
  auto it = lookup_.find(std::vector<std::uint32_t>(s.begin(), s.end()));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

VertexId SearchTree::add_vertex(VertexId parent_id, std::vector<std::uint32_t> edge,
                                double edge_cost) {
  if (parent_id >= vertices_.size()) throw UnknownVertex("unknown vertex " + std::to_string(parent_id));
  const auto id = static_cast<VertexId>(vertices_.size());
  std::vector<std::uint32_t> s(edge.end() - static_cast<std::ptrdiff_t>(agents_), edge.end());
  const std::size_t steps = edge.size() / agents_ - 1;

  Vertex v;
  v.parent = parent_id;
  v.edge_cost = edge_cost;
  v.cost = vertices_[parent_id].cost + edge_cost;
  v.arrival = vertices_[parent_id].arrival + static_cast<double>(steps) * kernel_->timestep();
  v.edge = std::move(edge);
  vertices_.push_back(std::move(v));
  vertices_[parent_id].children.push_back(id);

  states_.insert(states_.end(), s.begin(), s.end());
  auto c = coordinates_of(s);
  coords_.insert(coords_.end(), c.begin(), c.end());
  lookup_.emplace(std::move(s), id);
  index_insert(id);
  return id;
}

void SearchTree::reparent(VertexId v, VertexId new_parent, std::vector<std::uint32_t> edge,
                          double edge_cost) {
  if (v >= vertices_.size() || v == root())
    throw UnknownVertex("cannot reparent vertex " + std::to_string(v));
  if (new_parent >= vertices_.size())
    throw UnknownVertex("unknown vertex " + std::to_string(new_parent));
  Vertex& vertex = vertices_[v];
  auto& siblings = vertices_[static_cast<std::size_t>(vertex.parent)].children;
  siblings.erase(std::find(siblings.begin(), siblings.end(), v));
  vertices_[new_parent].children.push_back(v);

  const std::size_t steps = edge.size() / agents_ - 1;
  const double new_cost = vertices_[new_parent].cost + edge_cost;
  const double new_arrival =
      vertices_[new_parent].arrival + static_cast<double>(steps) * kernel_->timestep();
  const double cost_delta = new_cost - vertex.cost;
  const double arrival_delta = new_arrival - vertex.arrival;
  vertex.parent = new_parent;
  vertex.edge = std::move(edge);
  vertex.edge_cost = edge_cost;
  shift_subtree(v, cost_delta, arrival_delta);
  // Pin the rewired vertex to the exact sum so rounding cannot accumulate.
  vertices_[v].cost = new_cost;
  vertices_[v].arrival = new_arrival;
}

void SearchTree::rewire_cost_propagation(VertexId v, double delta) {
  if (v >= vertices_.size()) throw UnknownVertex("unknown vertex " + std::to_string(v));
  shift_subtree(v, delta, 0.0);
}

void SearchTree::shift_subtree(VertexId v, double cost_delta, double arrival_delta) {
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    vertices_[u].cost += cost_delta;
    vertices_[u].arrival += arrival_delta;
    for (VertexId c : vertices_[u].children) stack.push_back(c);
  }
}

double SearchTree::near_radius(std::size_t m) const {
  if (m <= 1) return 0.0;
  const double mm = static_cast<double>(m);
  const double dimension = 2.0 * static_cast<double>(agents_);
  return std::min(eta_meters_, gamma_ * std::pow(std::log(mm) / mm, 1.0 / dimension));
}

void SearchTree::index_insert(VertexId v) {
  const std::size_t dims = 2 * agents_;
  if (kd_.empty()) {
    kd_.push_back({v, -1, -1, 0});
    return;
  }
  const auto q = coordinates(v);
  std::int32_t node = 0;
  while (true) {
    KdNode& k = kd_[static_cast<std::size_t>(node)];
    const double split = coordinates(k.vertex)[k.dim];
    const bool go_left = q[k.dim] < split;
    std::int32_t& child = go_left ? k.left : k.right;
    if (child < 0) {
      const auto next_dim = static_cast<std::uint32_t>((k.dim + 1) % dims);
      child = static_cast<std::int32_t>(kd_.size());
      kd_.push_back({v, -1, -1, next_dim});
      return;
    }
    node = child;
  }
}

double SearchTree::lower_bound(std::span<const double> offsets) const {
  double total = 0.0;
  for (std::size_t i = 0; i < agents_; ++i) {
    const double d = std::sqrt(offsets[2 * i] * offsets[2 * i] + offsets[2 * i + 1] * offsets[2 * i + 1]);
    total = metric_ == JointMetric::sum ? total + d : std::max(total, d);
  }
  return total;
}

VertexId SearchTree::nearest(std::span<const std::uint32_t> s) const {
  if (vertices_.empty()) throw EmptyTree("nearest on an empty tree");
  const auto q = coordinates_of(s);
  return nearest_to(q);
}

VertexId SearchTree::nearest_to(std::span<const double> q) const {
  if (vertices_.empty()) throw EmptyTree("nearest on an empty tree");
  std::vector<double> offsets(2 * agents_, 0.0);
  VertexId best = 0;
  double best_distance = kInfinity;
  nearest_search(0, q, offsets, best, best_distance);
  return best;
}

std::vector<VertexId> SearchTree::near(std::span<const std::uint32_t> s, std::size_t m) const {
  const auto q = coordinates_of(s);
  return within(q, near_radius(m));
}

std::vector<VertexId> SearchTree::within(std::span<const double> q, double radius) const {
  std::vector<VertexId> out;
  if (kd_.empty()) return out;
  std::vector<double> offsets(2 * agents_, 0.0);
  radius_search(0, q, offsets, radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

// The kd-tree is not rebalanced, so both searches use an explicit stack; each
// frame carries its own copy of the per-dimension offsets to the cell.
void SearchTree::nearest_search(std::int32_t start, std::span<const double> q,
                                std::vector<double>& offsets, VertexId& best,
                                double& best_distance) const {
  const std::size_t dims = 2 * agents_;
  std::vector<std::pair<std::int32_t, double>> stack{{start, 0.0}};
  std::vector<double> pool(offsets);
  while (!stack.empty()) {
    auto [node, bound] = stack.back();
    stack.pop_back();
    std::copy(pool.end() - static_cast<std::ptrdiff_t>(dims), pool.end(), offsets.begin());
    pool.resize(pool.size() - dims);
    if (bound > best_distance + kPruneSlack) continue;

    const KdNode& k = kd_[static_cast<std::size_t>(node)];
    const auto point = coordinates(k.vertex);
    const double d = joint_distance(metric_, q, point);
    if (d < best_distance || (d == best_distance && k.vertex < best)) {
      best_distance = d;
      best = k.vertex;
    }
    const double diff = q[k.dim] - point[k.dim];
    const std::int32_t near_child = diff < 0 ? k.left : k.right;
    const std::int32_t far_child = diff < 0 ? k.right : k.left;
    if (far_child >= 0) {
      const double saved = offsets[k.dim];
      offsets[k.dim] = std::abs(diff);
      const double far_bound = lower_bound(offsets);
      if (far_bound <= best_distance + kPruneSlack) {
        stack.push_back({far_child, far_bound});
        pool.insert(pool.end(), offsets.begin(), offsets.end());
      }
      offsets[k.dim] = saved;
    }
    if (near_child >= 0) {
      stack.push_back({near_child, bound});
      pool.insert(pool.end(), offsets.begin(), offsets.end());
    }
  }
}

void SearchTree::radius_search(std::int32_t start, std::span<const double> q,
                               std::vector<double>& offsets, double radius,
                               std::vector<VertexId>& out) const {
  const std::size_t dims = 2 * agents_;
  std::vector<std::int32_t> stack{start};
  std::vector<double> pool(offsets);
  while (!stack.empty()) {
    const std::int32_t node = stack.back();
    stack.pop_back();
    std::copy(pool.end() - static_cast<std::ptrdiff_t>(dims), pool.end(), offsets.begin());
    pool.resize(pool.size() - dims);

    const KdNode& k = kd_[static_cast<std::size_t>(node)];
    const auto point = coordinates(k.vertex);
    if (joint_distance(metric_, q, point) <= radius) out.push_back(k.vertex);
    const double diff = q[k.dim] - point[k.dim];
    const std::int32_t near_child = diff < 0 ? k.left : k.right;
    const std::int32_t far_child = diff < 0 ? k.right : k.left;
    if (far_child >= 0) {
      const double saved = offsets[k.dim];
      offsets[k.dim] = std::abs(diff);
      if (lower_bound(offsets) <= radius + kPruneSlack) {
        stack.push_back(far_child);
        pool.insert(pool.end(), offsets.begin(), offsets.end());
      }
      offsets[k.dim] = saved;
    }
    if (near_child >= 0) {
      stack.push_back(near_child);
      pool.insert(pool.end(), offsets.begin(), offsets.end());
    }
  }
}

std::vector<std::string> SearchTree::check_invariants() const {
  std::vector<std::string> problems;
  const auto fail = [&](VertexId v, const std::string& what) {
    problems.push_back("vertex " + std::to_string(v) + ": " + what);
  };
  if (vertices_.empty()) return {"tree has no root"};
  if (vertices_[0].parent >= 0) fail(0, "root has a parent");
  if (vertices_[0].cost != 0.0) fail(0, "root cost is not zero");

  for (VertexId v = 1; v < vertices_.size(); ++v) {
    const Vertex& vertex = vertices_[v];
    if (vertex.parent < 0 || static_cast<std::size_t>(vertex.parent) >= vertices_.size()) {
      fail(v, "invalid parent");
      continue;
    }
    const auto p = static_cast<VertexId>(vertex.parent);
    if (std::abs(vertex.cost - (vertices_[p].cost + vertex.edge_cost)) > 1e-9)
      fail(v, "cost differs from parent cost plus edge cost");
    const auto& siblings = vertices_[p].children;
    if (std::count(siblings.begin(), siblings.end(), v) != 1) fail(v, "missing from parent's children");

    const std::size_t steps = vertex.edge.size() / agents_;
    if (steps < 2 || vertex.edge.size() % agents_ != 0) {
      fail(v, "malformed edge");
      continue;
    }
    const auto ps = state(p);
    const auto vs = state(v);
    if (!std::equal(ps.begin(), ps.end(), vertex.edge.begin())) fail(v, "edge does not start at parent");
    if (!std::equal(vs.begin(), vs.end(), vertex.edge.end() - static_cast<std::ptrdiff_t>(agents_)))
      fail(v, "edge does not end at vertex");
    double edge_cost = 0.0;
    for (std::size_t s = 0; s + 1 < steps; ++s) {
      std::span<const std::uint32_t> a(vertex.edge.data() + s * agents_, agents_);
      std::span<const std::uint32_t> b(vertex.edge.data() + (s + 1) * agents_, agents_);
      edge_cost += kernel_->step_cost(a, b);
    }
    if (std::abs(edge_cost - vertex.edge_cost) > 1e-9) fail(v, "stored edge cost is stale");

    std::size_t hops = 0;
    std::int64_t u = v;
    while (u > 0 && hops <= vertices_.size()) {
      u = vertices_[static_cast<std::size_t>(u)].parent;
      ++hops;
    }
    if (u != 0) fail(v, "parent chain does not reach the root");
  }

  std::vector<int> seen(vertices_.size(), 0);
  for (const auto& k : kd_) {
    if (k.vertex >= vertices_.size()) {
      problems.push_back("spatial index references a missing vertex");
      continue;
    }
    ++seen[k.vertex];
  }
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (seen[v] != 1) fail(v, "indexed " + std::to_string(seen[v]) + " times");
  if (lookup_.size() != vertices_.size()) problems.push_back("duplicate-state lookup out of sync");
  return problems;
}

}  // namespace marrt

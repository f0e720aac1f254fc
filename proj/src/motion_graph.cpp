#include "marrt/motion_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "marrt/rng.hpp"

namespace marrt {

namespace {

bool canonical_less(const MotionPrimitive& a, const MotionPrimitive& b) {
  if (a.from != b.from) return a.from < b.from;
  const bool a_wait = a.kind == PrimitiveKind::wait;
  const bool b_wait = b.kind == PrimitiveKind::wait;
  if (a_wait != b_wait) return b_wait;
  if (a.to != b.to) return a.to < b.to;
  return a.duration < b.duration;
}

std::string describe(const MotionPrimitive& p) {
  std::ostringstream out;
  out << p.from << "->" << p.to << " (" << p.duration << " s)";
  return out.str();
}

}  // namespace

MotionGraph::MotionGraph(std::vector<Waypoint> waypoints, std::vector<MotionPrimitive> primitives)
    : waypoints_(std::move(waypoints)), primitives_(std::move(primitives)) {
  std::sort(waypoints_.begin(), waypoints_.end(),
            [](const Waypoint& a, const Waypoint& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < waypoints_.size(); ++i) {
    const auto& w = waypoints_[i];
    if (i > 0 && waypoints_[i - 1].id == w.id)
      throw InvalidParameters("duplicate waypoint id " + std::to_string(w.id));
    if (!std::isfinite(w.position.x) || !std::isfinite(w.position.y))
      throw InvalidParameters("waypoint " + std::to_string(w.id) + " has a non-finite position");
  }

  const WaypointId max_id = waypoints_.empty() ? 0 : waypoints_.back().id;
  if (static_cast<std::uint64_t>(max_id) < 4 * waypoints_.size() + 64) {
    dense_lookup_.assign(static_cast<std::size_t>(max_id) + 1, -1);
    for (std::size_t i = 0; i < waypoints_.size(); ++i)
      dense_lookup_[waypoints_[i].id] = static_cast<std::int32_t>(i);
  } else {
    for (std::size_t i = 0; i < waypoints_.size(); ++i) sparse_lookup_[waypoints_[i].id] = i;
  }

  for (const auto& p : primitives_) {
    if (!contains(p.from) || !contains(p.to))
      throw InvalidParameters("primitive " + describe(p) + " references an unknown waypoint");
    if (!(p.duration > 0.0) || !std::isfinite(p.duration))
      throw InvalidParameters("primitive " + describe(p) + " has a non-positive duration");
    if ((p.kind == PrimitiveKind::wait) != (p.from == p.to))
      throw InvalidParameters("primitive " + describe(p) + " is a wait iff it is a self-loop");
  }
  std::sort(primitives_.begin(), primitives_.end(), canonical_less);

  offsets_.assign(waypoints_.size() + 1, 0);
  targets_.reserve(primitives_.size());
  for (const auto& p : primitives_) {
    ++offsets_[index_of(p.from) + 1];
    targets_.push_back(static_cast<std::uint32_t>(index_of(p.to)));
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

std::optional<std::size_t> MotionGraph::find(WaypointId id) const {
  if (!dense_lookup_.empty() || sparse_lookup_.empty()) {
    if (id >= dense_lookup_.size() || dense_lookup_[id] < 0) return std::nullopt;
    return static_cast<std::size_t>(dense_lookup_[id]);
  }
  auto it = sparse_lookup_.find(id);
  if (it == sparse_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t MotionGraph::index_of(WaypointId id) const {
  auto index = find(id);
  if (!index) throw UnknownWaypoint("unknown waypoint " + std::to_string(id));
  return *index;
}

MotionGraph make_grid_graph(const GridSpec& grid) {
  const int size = grid.size;
  if (size < 1) throw InvalidParameters("grid size must be positive");
  std::vector<char> blocked(static_cast<std::size_t>(size) * size, 0);
  for (const auto& cell : grid.removed) {
    if (cell.x < 0 || cell.y < 0 || cell.x >= size || cell.y >= size)
      throw InvalidParameters("removed cell outside the grid");
    blocked[grid_id(size, cell.x, cell.y)] = 1;
  }

  std::vector<Waypoint> waypoints;
  std::vector<MotionPrimitive> primitives;
  constexpr int dx[] = {1, -1, 0, 0};
  constexpr int dy[] = {0, 0, 1, -1};
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const WaypointId id = grid_id(size, x, y);
      if (blocked[id]) continue;
      waypoints.push_back({id, {static_cast<double>(x), static_cast<double>(y)}});
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k];
        const int ny = y + dy[k];
        if (nx < 0 || ny < 0 || nx >= size || ny >= size) continue;
        const WaypointId to = grid_id(size, nx, ny);
        if (blocked[to]) continue;
        primitives.push_back({id, to, 1.0, PrimitiveKind::move});
      }
      primitives.push_back({id, id, 1.0, PrimitiveKind::wait});
    }
  }
  return MotionGraph(std::move(waypoints), std::move(primitives));
}

bool ProblemInstance::shares_graph() const {
  for (const auto& g : graphs)
    if (g != graphs.front() && !(*g == *graphs.front())) return false;
  return true;
}

double ProblemInstance::timestep() const {
  for (const auto& g : graphs)
    if (g && g->primitive_count() > 0) return g->all_primitives().front().duration;
  return 1.0;
}

bool ProblemInstance::operator==(const ProblemInstance& other) const {
  if (graphs.size() != other.graphs.size()) return false;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i] == other.graphs[i]) continue;
    if (!graphs[i] || !other.graphs[i] || !(*graphs[i] == *other.graphs[i])) return false;
  }
  return starts == other.starts && destinations == other.destinations &&
         separation == other.separation && seed == other.seed && grid == other.grid;
}

std::vector<std::string> instance_violations(const ProblemInstance& instance) {
  std::vector<std::string> out;
  const std::size_t n = instance.starts.size();
  if (n == 0) out.push_back("instance has no agents");
  if (instance.destinations.size() != n)
    out.push_back("starts and destinations differ in length");
  if (instance.graphs.size() != n) out.push_back("expected one motion graph per agent");
  if (!(instance.separation > 0.0) || !std::isfinite(instance.separation))
    out.push_back("separation must be a positive finite distance");
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < n; ++i)
    if (!instance.graphs[i]) out.push_back("agent " + std::to_string(i) + " has no motion graph");
  if (!out.empty()) return out;

  std::set<WaypointId> seen_starts;
  std::set<WaypointId> seen_destinations;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen_starts.insert(instance.starts[i]).second)
      out.push_back("start waypoints must be unique (agent " + std::to_string(i) + ")");
    if (!seen_destinations.insert(instance.destinations[i]).second)
      out.push_back("destination waypoints must be unique (agent " + std::to_string(i) + ")");
  }

  std::optional<double> step;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = instance.graph(i);
    const bool has_start = g.contains(instance.starts[i]);
    const bool has_destination = g.contains(instance.destinations[i]);
    if (!has_start) out.push_back("start of agent " + std::to_string(i) + " is not in its graph");
    if (!has_destination)
      out.push_back("destination of agent " + std::to_string(i) + " is not in its graph");
    if (has_start && has_destination &&
        !is_reachable(g, instance.starts[i], instance.destinations[i]))
      out.push_back("destination of agent " + std::to_string(i) + " is unreachable");
    for (const auto& p : g.all_primitives()) {
      if (!step) step = p.duration;
      if (p.duration != *step) {
        out.push_back("all primitives must share one duration (agent " + std::to_string(i) + ")");
        break;
      }
    }
  }
  return out;
}

void require_valid(const ProblemInstance& instance) {
  auto violations = instance_violations(instance);
  if (!violations.empty()) throw InvalidInstance(violations.front());
}

ProblemInstance generate_grid_instance(int size, int n_agents, double obstacle_ratio,
                                       double separation, std::uint64_t seed) {
  if (size < 2) throw InvalidParameters("grid size must be at least 2");
  if (n_agents < 1) throw InvalidParameters("at least one agent is required");
  if (!(obstacle_ratio >= 0.0 && obstacle_ratio < 1.0))
    throw InvalidParameters("obstacle ratio must lie in [0, 1)");
  if (!(separation > 0.0) || !std::isfinite(separation))
    throw InvalidParameters("separation must be a positive finite distance");

  const std::size_t cells = static_cast<std::size_t>(size) * size;
  const auto removed_count =
      static_cast<std::size_t>(std::floor(obstacle_ratio * static_cast<double>(cells) + 1e-9));
  if (cells - removed_count < 2 * static_cast<std::size_t>(n_agents))
    throw InvalidParameters("not enough free vertices for distinct starts and destinations");

  Rng rng(seed);
  std::vector<std::uint32_t> order(cells);
  for (int attempt = 0; attempt < kGenerationRetryBudget; ++attempt) {
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t i = 0; i < removed_count; ++i)
      std::swap(order[i], order[i + rng.index(cells - i)]);

    GridSpec grid{size, {}};
    std::vector<char> blocked(cells, 0);
    for (std::size_t i = 0; i < removed_count; ++i) {
      blocked[order[i]] = 1;
      grid.removed.push_back({static_cast<int>(order[i] % size), static_cast<int>(order[i] / size)});
    }
    std::sort(grid.removed.begin(), grid.removed.end(),
              [](const GridCell& a, const GridCell& b) {
                return std::pair(a.y, a.x) < std::pair(b.y, b.x);
              });

    std::vector<WaypointId> free_ids;
    for (std::uint32_t c = 0; c < cells; ++c)
      if (!blocked[c]) free_ids.push_back(c);
    const std::size_t picks = 2 * static_cast<std::size_t>(n_agents);
    for (std::size_t i = 0; i < picks; ++i)
      std::swap(free_ids[i], free_ids[i + rng.index(free_ids.size() - i)]);

    auto graph = std::make_shared<const MotionGraph>(make_grid_graph(grid));
    ProblemInstance instance;
    instance.separation = separation;
    instance.seed = seed;
    instance.starts.assign(free_ids.begin(), free_ids.begin() + n_agents);
    instance.destinations.assign(free_ids.begin() + n_agents, free_ids.begin() + picks);
    instance.graphs.assign(static_cast<std::size_t>(n_agents), graph);

    bool solvable = true;
    for (int i = 0; i < n_agents && solvable; ++i)
      solvable = is_reachable(*graph, instance.starts[i], instance.destinations[i]);
    if (!solvable) continue;

    instance.grid = std::move(grid);
    return instance;
  }
  throw GenerationFailed("no instance with reachable destinations after " +
                             std::to_string(kGenerationRetryBudget) + " attempts",
                         kGenerationRetryBudget);
}

DistanceTable distance_table(std::shared_ptr<const MotionGraph> graph, WaypointId goal) {
  const MotionGraph& g = *graph;
  const std::size_t goal_index = g.index_of(goal);
  const std::size_t n = g.size();

  // Reverse adjacency in CSR form: for each waypoint, the primitives entering it.
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (auto v : g.targets_at(u)) ++offsets[v + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::pair<std::uint32_t, double>> incoming(offsets.back());
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (std::size_t u = 0; u < n; ++u) {
    auto prims = g.primitives_at(u);
    auto targets = g.targets_at(u);
    for (std::size_t k = 0; k < prims.size(); ++k)
      incoming[fill[targets[k]]++] = {static_cast<std::uint32_t>(u), prims[k].duration};
  }

  std::vector<double> cost(n, kInfinity);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  cost[goal_index] = 0.0;
  open.push({0.0, goal_index});
  while (!open.empty()) {
    auto [c, v] = open.top();
    open.pop();
    if (c > cost[v]) continue;
    for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      auto [u, duration] = incoming[k];
      const double candidate = c + duration;
      if (candidate < cost[u]) {
        cost[u] = candidate;
        open.push({candidate, u});
      }
    }
  }
  return DistanceTable(std::move(graph), goal, std::move(cost));
}

bool is_reachable(const MotionGraph& graph, WaypointId from, WaypointId to) {
  const std::size_t source = graph.index_of(from);
  const std::size_t target = graph.index_of(to);
  if (source == target) return true;
  std::vector<char> visited(graph.size(), 0);
  std::vector<std::size_t> stack{source};
  visited[source] = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (auto v : graph.targets_at(u)) {
      if (visited[v]) continue;
      if (v == target) return true;
      visited[v] = 1;
      stack.push_back(v);
    }
  }
  return false;
}

}  // namespace marrt

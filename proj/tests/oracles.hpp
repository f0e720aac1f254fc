#pragma once

// Test-only reference implementations. They deliberately avoid the library's
// search machinery; only the data types and min_move_distance are shared.

#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "marrt/joint_space.hpp"
#include "marrt/motion_graph.hpp"

namespace oracle {

using namespace marrt;

// Unit-weight BFS distance on an undirected-by-construction graph.
inline std::optional<int> bfs_steps(const MotionGraph& g, WaypointId from, WaypointId to) {
  std::map<WaypointId, int> dist{{from, 0}};
  std::queue<WaypointId> q;
  q.push(from);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    if (u == to) return dist[u];
    for (const auto& p : g.primitives(u))
      if (!dist.count(p.to)) {
        dist[p.to] = dist[u] + 1;
        q.push(p.to);
      }
  }
  return std::nullopt;
}

// Component labels via repeated flood fill.
inline std::map<WaypointId, int> components(const MotionGraph& g) {
  std::map<WaypointId, int> label;
  int next = 0;
  for (const auto& w : g.waypoints()) {
    if (label.count(w.id)) continue;
    std::vector<WaypointId> stack{w.id};
    label[w.id] = next;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& p : g.primitives(u))
        if (!label.count(p.to)) {
          label[p.to] = next;
          stack.push_back(p.to);
        }
    }
    ++next;
  }
  return label;
}

// Sampled minimum of the inter-agent distance over samples t = k / samples.
inline double sampled_min_distance(Point a0, Point a1, Point b0, Point b1, int samples) {
  double best = INFINITY;
  for (int k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const double ax = a0.x + t * (a1.x - a0.x), ay = a0.y + t * (a1.y - a0.y);
    const double bx = b0.x + t * (b1.x - b0.x), by = b0.y + t * (b1.y - b0.y);
    best = std::min(best, std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by)));
  }
  return best;
}

// All primitive combinations by odometer enumeration (no pruning).
inline std::vector<std::vector<MotionPrimitive>> all_combinations(const ProblemInstance& inst,
                                                                  const JointState& s) {
  const std::size_t n = s.size();
  std::vector<std::vector<MotionPrimitive>> per_agent;
  for (std::size_t i = 0; i < n; ++i) {
    auto prims = inst.graph(i).primitives(s[i]);
    per_agent.emplace_back(prims.begin(), prims.end());
  }
  std::vector<std::vector<MotionPrimitive>> out;
  std::vector<std::size_t> odo(n, 0);
  while (true) {
    std::vector<MotionPrimitive> combo;
    for (std::size_t i = 0; i < n; ++i) combo.push_back(per_agent[i][odo[i]]);
    out.push_back(std::move(combo));
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++odo[k] < per_agent[k].size()) break;
      odo[k] = 0;
      if (k == 0) return out;
    }
    if (n == 0) return out;
  }
}

inline bool combo_separated(const ProblemInstance& inst, const std::vector<MotionPrimitive>& combo) {
  for (std::size_t j = 0; j < combo.size(); ++j)
    for (std::size_t k = j + 1; k < combo.size(); ++k) {
      const double d = min_move_distance(inst.graph(j).position(combo[j].from), inst.graph(j).position(combo[j].to),
                                         inst.graph(k).position(combo[k].from), inst.graph(k).position(combo[k].to));
      if (!(d > inst.separation)) return false;
    }
  return true;
}

inline double combo_cost(const ProblemInstance& inst, const std::vector<MotionPrimitive>& combo) {
  double c = 0.0;
  for (std::size_t i = 0; i < combo.size(); ++i)
    if (!(combo[i].from == combo[i].to && combo[i].from == inst.destinations[i])) c += combo[i].duration;
  return c;
}

inline bool resting_separated(const ProblemInstance& inst, const JointState& s) {
  for (std::size_t j = 0; j < s.size(); ++j)
    for (std::size_t k = j + 1; k < s.size(); ++k) {
      const auto a = inst.graph(j).position(s[j]);
      const auto b = inst.graph(k).position(s[k]);
      if (!(std::hypot(a.x - b.x, a.y - b.y) > inst.separation)) return false;
    }
  return true;
}

// Uniform-cost search over the explicitly materialized joint graph.
inline std::optional<double> joint_ucs(const ProblemInstance& inst) {
  if (!resting_separated(inst, inst.starts)) return std::nullopt;
  // Materialize every reachable joint state and its separated out-edges first.
  std::map<JointState, std::vector<std::pair<JointState, double>>> edges;
  std::vector<JointState> frontier{inst.starts};
  edges[inst.starts];
  while (!frontier.empty()) {
    auto s = frontier.back();
    frontier.pop_back();
    for (const auto& combo : all_combinations(inst, s)) {
      if (!combo_separated(inst, combo)) continue;
      JointState t;
      for (const auto& p : combo) t.push_back(p.to);
      edges[s].emplace_back(t, combo_cost(inst, combo));
      if (!edges.count(t)) {
        edges[t];
        frontier.push_back(t);
      }
    }
  }
  std::map<JointState, double> dist{{inst.starts, 0.0}};
  using Item = std::pair<double, JointState>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  open.push({0.0, inst.starts});
  while (!open.empty()) {
    auto [d, s] = open.top();
    open.pop();
    if (d > dist[s]) continue;
    if (s == inst.destinations) return d;
    for (const auto& [t, c] : edges[s])
      if (!dist.count(t) || d + c < dist[t]) {
        dist[t] = d + c;
        open.push({d + c, t});
      }
  }
  return std::nullopt;
}

// Brute-force separation check by sampling each move.
inline bool sampled_paths_separated(const ProblemInstance& inst, const Solution& sol, int samples) {
  std::size_t length = 0;
  for (const auto& p : sol.paths) length = std::max(length, p.size());
  auto at = [&](std::size_t i, std::size_t t) {
    const auto& p = sol.paths[i];
    return inst.graph(i).position(t < p.size() ? p[t] : p.back());
  };
  for (std::size_t j = 0; j < sol.paths.size(); ++j)
    for (std::size_t k = j + 1; k < sol.paths.size(); ++k)
      for (std::size_t t = 0; t + 1 < std::max<std::size_t>(length, 2); ++t) {
        const std::size_t u = std::min(t + 1, length - 1);
        if (!(sampled_min_distance(at(j, t), at(j, u), at(k, t), at(k, u), samples) > inst.separation))
          return false;
      }
  return true;
}

}  // namespace oracle

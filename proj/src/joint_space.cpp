#include "marrt/joint_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "marrt/detail/joint_kernel.hpp"

namespace marrt {

double min_move_distance(Point a0, Point a1, Point b0, Point b1, double /*duration*/) {
  // Relative position w(t) = w0 + t * dv for t in [0, 1].
  const double w0x = a0.x - b0.x;
  const double w0y = a0.y - b0.y;
  const double dvx = (a1.x - a0.x) - (b1.x - b0.x);
  const double dvy = (a1.y - a0.y) - (b1.y - b0.y);
  const double dv2 = dvx * dvx + dvy * dvy;
  double t = 0.0;
  if (dv2 > 0.0) t = std::clamp(-(w0x * dvx + w0y * dvy) / dv2, 0.0, 1.0);
  return std::hypot(w0x + t * dvx, w0y + t * dvy);
}

double endpoint_move_distance(Point a0, Point a1, Point b0, Point b1) {
  return std::min(std::hypot(a0.x - b0.x, a0.y - b0.y), std::hypot(a1.x - b1.x, a1.y - b1.y));
}

namespace {

void check_arity(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual)
    throw ArityMismatch(std::string(what) + " has " + std::to_string(actual) +
                        " components, expected " + std::to_string(expected));
}

}  // namespace

bool move_is_separated(const ProblemInstance& instance, const JointState& state,
                       const JointMove& move, double d_sep, SeparationMode mode) {
  const std::size_t n = instance.agent_count();
  check_arity(n, state.size(), "joint state");
  check_arity(n, move.primitives.size(), "joint move");
  for (std::size_t j = 0; j < n; ++j) {
    const Point a0 = instance.graph(j).position(move.primitives[j].from);
    const Point a1 = instance.graph(j).position(move.primitives[j].to);
    for (std::size_t k = j + 1; k < n; ++k) {
      const Point b0 = instance.graph(k).position(move.primitives[k].from);
      const Point b1 = instance.graph(k).position(move.primitives[k].to);
      const double d = mode == SeparationMode::continuous ? min_move_distance(a0, a1, b0, b1)
                                                          : endpoint_move_distance(a0, a1, b0, b1);
      if (!(d > d_sep)) return false;
    }
  }
  return true;
}

bool state_is_separated(const ProblemInstance& instance, const JointState& state,
                        SeparationMode mode) {
  JointMove rest;
  for (std::size_t i = 0; i < state.size(); ++i)
    rest.primitives.push_back({state[i], state[i], instance.timestep(), PrimitiveKind::wait});
  return move_is_separated(instance, state, rest, instance.separation, mode);
}

double step_cost(const JointState& state, const JointMove& move,
                 std::span<const WaypointId> destinations) {
  check_arity(state.size(), move.primitives.size(), "joint move");
  check_arity(state.size(), destinations.size(), "destination tuple");
  double cost = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto& p = move.primitives[i];
    const bool parked = state[i] == destinations[i] && p.kind == PrimitiveKind::wait;
    if (!parked) cost += p.duration;
  }
  return cost;
}

JointState apply_move(const JointMove& move) {
  JointState next;
  next.reserve(move.primitives.size());
  for (const auto& p : move.primitives) next.push_back(p.to);
  return next;
}

std::vector<Successor> joint_successors(const ProblemInstance& instance, const JointState& state,
                                        SeparationMode mode) {
  check_arity(instance.agent_count(), state.size(), "joint state");
  detail::JointKernel kernel(instance, mode);
  const auto from = kernel.to_indices(state);
  std::vector<Successor> out;
  kernel.for_each_successor(from, [&](std::span<const std::uint32_t> choice,
                                      std::span<const std::uint32_t> next, double cost) {
    Successor s;
    for (std::size_t k = 0; k < choice.size(); ++k)
      s.move.primitives.push_back(kernel.graph(k).primitives_at(from[k])[choice[k]]);
    s.state = kernel.to_ids(next);
    s.cost = cost;
    out.push_back(std::move(s));
  });
  return out;
}

Solution solution_from_path(const JointPath& path, double dt) {
  Solution solution;
  solution.dt = dt;
  solution.total_cost = path.cost;
  const std::size_t n = path.states.empty() ? 0 : path.states.front().size();
  solution.paths.assign(n, {});
  for (const auto& state : path.states)
    for (std::size_t i = 0; i < n; ++i) solution.paths[i].push_back(state[i]);
  return solution;
}

std::string to_string(Violation::Clause clause) {
  switch (clause) {
    case Violation::Clause::malformed: return "malformed";
    case Violation::Clause::start: return "start";
    case Violation::Clause::destination: return "destination";
    case Violation::Clause::unknown_waypoint: return "unknown-waypoint";
    case Violation::Clause::missing_primitive: return "missing-primitive";
    case Violation::Clause::separation: return "separation";
    case Violation::Clause::cost_mismatch: return "cost-mismatch";
  }
  return "unknown";
}

Verdict validate_solution(const ProblemInstance& instance, const Solution& solution,
                          SeparationMode mode) {
  Verdict verdict;
  auto report = [&](Violation::Clause clause, std::string message,
                    std::optional<std::size_t> step = std::nullopt,
                    std::optional<std::size_t> agent = std::nullopt,
                    std::optional<std::size_t> other = std::nullopt) {
    verdict.violations.push_back({clause, step, agent, other, std::move(message)});
  };

  const std::size_t n = instance.agent_count();
  if (instance.graphs.size() != n || instance.destinations.size() != n) {
    report(Violation::Clause::malformed, "instance is malformed");
    return verdict;
  }
  if (solution.paths.size() != n) {
    report(Violation::Clause::malformed, "solution has " + std::to_string(solution.paths.size()) +
                                             " agent paths, instance has " + std::to_string(n));
    return verdict;
  }
  if (!(solution.dt > 0.0) || !std::isfinite(solution.dt)) {
    report(Violation::Clause::malformed, "time step must be positive");
    return verdict;
  }

  std::size_t length = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (solution.paths[i].empty()) {
      report(Violation::Clause::malformed, "empty path", std::nullopt, i);
      return verdict;
    }
    length = std::max(length, solution.paths[i].size());
  }

  // Positions after padding; nullopt marks a waypoint missing from the graph.
  std::vector<std::vector<std::optional<Point>>> positions(n);
  std::vector<std::vector<WaypointId>> padded(n);
  bool all_known = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& path = solution.paths[i];
    const MotionGraph& g = instance.graph(i);
    padded[i] = path;
    padded[i].resize(length, path.back());

    if (path.front() != instance.starts[i])
      report(Violation::Clause::start, "agent " + std::to_string(i) + " does not begin at its start",
             std::nullopt, i);
    if (path.back() != instance.destinations[i])
      report(Violation::Clause::destination,
             "agent " + std::to_string(i) + " does not end at its destination", std::nullopt, i);

    for (std::size_t t = 0; t < length; ++t) {
      auto index = g.find(padded[i][t]);
      if (!index) {
        all_known = false;
        positions[i].push_back(std::nullopt);
        if (t < path.size())
          report(Violation::Clause::unknown_waypoint,
                 "agent " + std::to_string(i) + " visits unknown waypoint " +
                     std::to_string(padded[i][t]),
                 t, i);
        continue;
      }
      positions[i].push_back(g.position_at(*index));
    }

    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const WaypointId u = path[t];
      const WaypointId v = path[t + 1];
      if (!g.contains(u) || !g.contains(v)) continue;
      const auto prims = g.primitives(u);
      const bool found = std::any_of(prims.begin(), prims.end(), [&](const MotionPrimitive& p) {
        return p.to == v && p.duration == solution.dt;
      });
      if (!found)
        report(Violation::Clause::missing_primitive,
               "agent " + std::to_string(i) + " has no " + std::to_string(solution.dt) +
                   " s primitive " + std::to_string(u) + "->" + std::to_string(v),
               t, i);
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const std::size_t moves = length == 1 ? 1 : length - 1;
      for (std::size_t t = 0; t < moves; ++t) {
        const std::size_t u = t;
        const std::size_t v = length == 1 ? t : t + 1;
        if (!positions[j][u] || !positions[j][v] || !positions[k][u] || !positions[k][v]) continue;
        const Point a0 = *positions[j][u];
        const Point a1 = *positions[j][v];
        const Point b0 = *positions[k][u];
        const Point b1 = *positions[k][v];
        const double d = mode == SeparationMode::continuous
                             ? min_move_distance(a0, a1, b0, b1, solution.dt)
                             : std::min(std::hypot(a0.x - b0.x, a0.y - b0.y),
                                        std::hypot(a1.x - b1.x, a1.y - b1.y));
        if (!(d > instance.separation)) {
          std::ostringstream msg;
          msg << "agents " << j << " and " << k << " come within " << d << " m during t=" << u
              << "->" << v << " (required > " << instance.separation << " m)";
          report(Violation::Clause::separation, msg.str(), t, j, k);
        }
      }
    }
  }

  if (all_known) {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t t = 0; t + 1 < length; ++t) {
        const bool parked = padded[i][t] == padded[i][t + 1] &&
                            padded[i][t] == instance.destinations[i];
        if (!parked) cost += solution.dt;
      }
    if (!(std::abs(cost - solution.total_cost) <= kCostTolerance)) {
      std::ostringstream msg;
      msg << "declared cost " << solution.total_cost << " differs from recomputed cost " << cost;
      report(Violation::Clause::cost_mismatch, msg.str());
    }
  }
  return verdict;
}

}  // namespace marrt

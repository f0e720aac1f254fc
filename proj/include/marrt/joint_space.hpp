#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "marrt/motion_graph.hpp"

namespace marrt {

// One waypoint per agent.
using JointState = std::vector<WaypointId>;

// Synchronized primitives, one per agent, all of the same duration.
struct JointMove {
  std::vector<MotionPrimitive> primitives;
  double duration() const { return primitives.empty() ? 0.0 : primitives.front().duration; }
  bool operator==(const JointMove&) const = default;
};

struct JointPath {
  std::vector<JointState> states;  // moves.size() + 1 entries
  std::vector<JointMove> moves;
  double cost = 0.0;

  const JointState& front() const { return states.front(); }
  const JointState& back() const { return states.back(); }
  std::size_t steps() const { return moves.size(); }
};

// Per-agent timed waypoint sequences of identical length; waypoint k of
// every agent is occupied at time k * dt.
struct Solution {
  std::vector<std::vector<WaypointId>> paths;
  double dt = 1.0;
  double total_cost = 0.0;
  bool operator==(const Solution&) const = default;
};

// Continuous checks the whole straight-line move; per-timestep compares
// positions at the synchronized step boundaries only.
enum class SeparationMode { continuous, per_timestep };

/// Smallest distance between two agents moving at constant speed from a0 to
/// a1 and from b0 to b1 over the same interval. Minimizes the quadratic
/// |w0 + t dv|^2 in closed form with the critical point clamped to [0, 1];
/// the duration only rescales time and does not change the result.
double min_move_distance(Point a0, Point a1, Point b0, Point b1, double duration = 1.0);

double endpoint_move_distance(Point a0, Point a1, Point b0, Point b1);

// Throws ArityMismatch.
bool move_is_separated(const ProblemInstance& instance, const JointState& state,
                       const JointMove& move, double d_sep,
                       SeparationMode mode = SeparationMode::continuous);

// Pairwise separation of agents resting at the given waypoints.
bool state_is_separated(const ProblemInstance& instance, const JointState& state,
                        SeparationMode mode = SeparationMode::continuous);

// Time spent outside destinations during the move: every agent contributes the
// duration except one waiting at its own destination. Throws ArityMismatch.
double step_cost(const JointState& state, const JointMove& move,
                 std::span<const WaypointId> destinations);

JointState apply_move(const JointMove& move);

struct Successor {
  JointMove move;
  JointState state;
  double cost = 0.0;
};

/// Every separated joint move out of `state`, in lexicographic order over the
/// agents' canonical primitive orders.
std::vector<Successor> joint_successors(const ProblemInstance& instance, const JointState& state,
                                        SeparationMode mode = SeparationMode::continuous);

Solution solution_from_path(const JointPath& path, double dt);

struct Violation {
  enum class Clause {
    malformed,
    start,
    destination,
    unknown_waypoint,
    missing_primitive,
    separation,
    cost_mismatch,
  };
  Clause clause = Clause::malformed;
  std::optional<std::size_t> step;  // move from time step to step + 1
  std::optional<std::size_t> agent;
  std::optional<std::size_t> other_agent;
  std::string message;
};

std::string to_string(Violation::Clause clause);

struct Verdict {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

constexpr double kCostTolerance = 1e-9;

/// Independent check of a solution against the problem statement. Shorter
/// agent paths are padded with waits at their last waypoint. Never throws on
/// malformed input; every problem is reported as a violation.
Verdict validate_solution(const ProblemInstance& instance, const Solution& solution,
                          SeparationMode mode = SeparationMode::continuous);

}  // namespace marrt

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marrt/joint_space.hpp"
#include "marrt/rng.hpp"
#include "marrt/search_tree.hpp"

namespace marrt {

enum class Algorithm { ja, marrtstar, ismarrtstar };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct Budget {
  enum class Kind { seconds, iterations };
  Kind kind = Kind::seconds;
  double seconds = 2.5;
  std::uint64_t iterations = 0;

  static Budget wall_clock(double s) { return {Kind::seconds, s, 0}; }
  static Budget iteration_count(std::uint64_t k) { return {Kind::iterations, 0.0, k}; }
};

struct PlannerConfig {
  int eta = 10;                     // steering length, joint steps
  double gamma = 20.0;              // near-radius scale
  double goal_bias = 0.05;
  double informed_bias = 0.5;
  double informed_radius = 2.0;     // meters
  std::uint64_t rng_seed = 0;
  Budget budget = Budget::wall_clock(2.5);
  int greedy_alternatives = 0;      // extra joint moves tried per greedy step
  JointMetric metric = JointMetric::sum;
  SeparationMode separation_mode = SeparationMode::continuous;
  std::size_t ja_node_limit = 4'000'000;
  std::uint64_t debug_check_interval = 0;  // 0 disables tree invariant checks
  int sample_retries = 100;

  // Throws InvalidParameters.
  void validate() const;
  // Canonical one-line rendering of every field.
  std::string describe() const;
};

// Hex digest of describe().
std::string config_digest(const PlannerConfig& config);

enum class PlanStatus { optimal_proven, budget_exhausted, infeasible_proven };
std::string_view to_string(PlanStatus status);

struct TimedSolution {
  double elapsed = 0.0;  // seconds since planner invocation
  std::uint64_t iteration = 0;
  Solution solution;
};

struct AnytimeResult {
  std::vector<TimedSolution> solutions;  // strictly decreasing costs
  PlanStatus status = PlanStatus::budget_exhausted;
  std::uint64_t iterations = 0;

  const Solution* best() const { return solutions.empty() ? nullptr : &solutions.back().solution; }
};

/// An instance together with the per-agent distance tables every planner
/// uses. Built once and shared by all algorithms run on the instance.
class PlanningProblem {
 public:
  // Throws InvalidInstance.
  explicit PlanningProblem(ProblemInstance instance);

  const ProblemInstance& instance() const { return instance_; }
  const DistanceTable& distances(std::size_t agent) const { return tables_[agent]; }
  // Sum over agents of the single-agent shortest arrival time.
  double lower_bound() const { return lower_bound_; }

 private:
  ProblemInstance instance_;
  std::vector<DistanceTable> tables_;
  double lower_bound_ = 0.0;
};

/// A* in the joint-state space. Edge cost is step_cost and the heuristic is
/// the sum of the agents' distance-table values. Ties are broken towards the
/// lower heuristic, then the lexicographically smaller joint state.
AnytimeResult plan_ja(const PlanningProblem& problem, const PlannerConfig& config);

/// Graph RRT* in the joint-state space (informed = isMA-RRT*). With a single
/// agent this is the plain graph RRT*.
AnytimeResult plan_marrtstar(const PlanningProblem& problem, const PlannerConfig& config,
                             bool informed);

AnytimeResult plan(const PlanningProblem& problem, Algorithm algorithm, const PlannerConfig& config);

// Shortest path by A* with a Euclidean heuristic. Throws Unreachable.
std::vector<WaypointId> single_agent_optimal_path(const MotionGraph& graph, WaypointId start,
                                                  WaypointId destination);

enum class ConnectFailure { conflict, local_minimum, step_limit };
std::string_view to_string(ConnectFailure failure);

struct GreedyConnection {
  JointPath path;  // the full path on success, the walked prefix on failure
  std::optional<ConnectFailure> failure;
  bool connected() const { return !failure.has_value(); }
};

/// Greedy descent from one joint state towards another. Each step every agent
/// takes the primitive whose endpoint is closest (Euclidean) to its target
/// component, waiting once there; the joint move must be separated and must
/// strictly reduce the summed distance to the target. No backtracking: the
/// first bad step ends the walk. With alternatives > 0, up to that many
/// single-agent deviations (ranked by resulting summed distance) are tried
/// before giving up on a step.
GreedyConnection greedy_connect(const ProblemInstance& instance, const JointState& from,
                                const JointState& to, std::size_t max_steps,
                                SeparationMode mode = SeparationMode::continuous,
                                int alternatives = 0);

enum class SamplingMode { uniform, informed };

/// Joint-state sampler for the RRT* loop.
class JointSampler {
 public:
  // `paths` (per-agent waypoint sequences) is required in informed mode.
  JointSampler(const ProblemInstance& instance, const PlannerConfig& config, SamplingMode mode,
               const std::vector<std::vector<WaypointId>>& paths = {});

  JointState sample(Rng& rng) const;
  detail::IndexState sample_indices(Rng& rng) const;

 private:
  bool draw(Rng& rng, detail::IndexState& out) const;

  detail::JointKernel kernel_;
  SamplingMode mode_;
  double goal_bias_;
  double informed_bias_;
  int retries_;
  // Per agent: for each waypoint on the optimal path, the waypoints within
  // the informed radius of it.
  std::vector<std::vector<std::vector<std::uint32_t>>> tubes_;
};

JointState sample_joint_state(const ProblemInstance& instance, const PlannerConfig& config, Rng& rng,
                              SamplingMode mode,
                              const std::vector<std::vector<WaypointId>>& single_agent_paths = {});

}  // namespace marrt

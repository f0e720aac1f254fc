#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "marrt/detail/greedy.hpp"
#include "marrt/planners.hpp"

namespace marrt {

namespace {

using Clock = std::chrono::steady_clock;

JointPath tree_path_to(const SearchTree& tree, const detail::JointKernel& kernel, VertexId goal) {
  std::vector<VertexId> chain;
  for (std::optional<VertexId> v = goal; v; v = tree.parent(*v)) chain.push_back(*v);
  std::reverse(chain.begin(), chain.end());

  const std::size_t n = kernel.agents();
  JointPath path;
  path.states.push_back(kernel.to_ids(tree.state(chain.front())));
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const auto edge = tree.edge_states(chain[i]);
    for (std::size_t s = n; s < edge.size(); s += n) path.states.push_back(kernel.to_ids(edge.subspan(s, n)));
  }
  path.cost = tree.cost(goal);
  return path;
}

}  // namespace

AnytimeResult plan_marrtstar(const PlanningProblem& problem, const PlannerConfig& config,
                             bool informed) {
  config.validate();
  const auto started = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

  const ProblemInstance& instance = problem.instance();
  const detail::JointKernel kernel(instance, config.separation_mode);
  const detail::GreedyWalker walker(kernel, config.greedy_alternatives);
  const std::size_t n = kernel.agents();
  const auto& goal = kernel.destinations();

  AnytimeResult result;
  if (!kernel.resting_separated(kernel.starts()) || !kernel.resting_separated(goal)) {
    result.status = PlanStatus::infeasible_proven;
    return result;
  }

  std::vector<std::vector<WaypointId>> optimal_paths;
  if (informed)
    for (std::size_t k = 0; k < n; ++k)
      optimal_paths.push_back(
          single_agent_optimal_path(instance.graph(k), instance.starts[k], instance.destinations[k]));
  const JointSampler sampler(instance, config, informed ? SamplingMode::informed : SamplingMode::uniform,
                             optimal_paths);
  Rng rng(config.rng_seed);

  // The grid step is 1 m, so eta joint steps correspond to eta meters.
  SearchTree tree(kernel, kernel.starts(), config.metric, static_cast<double>(config.eta), config.gamma);
  // Connections between existing vertices may need more joint steps than
  // steering: a joint step moves every agent at most one grid edge.
  const std::size_t steer_steps = static_cast<std::size_t>(config.eta);
  const std::size_t connect_steps = 2 * steer_steps;

  std::optional<VertexId> goal_vertex = tree.find(goal);
  double best_cost = kInfinity;
  const bool timed = config.budget.kind == Budget::Kind::seconds;

  detail::IndexWalk steer;
  detail::IndexWalk link;
  std::uint64_t iteration = 0;
  while (true) {
    if (timed) {
      if (iteration % 64 == 0 && elapsed() >= config.budget.seconds) break;
    } else if (iteration >= config.budget.iterations) {
      break;
    }
    ++iteration;

    const auto sample = sampler.sample_indices(rng);
    const VertexId nearest = tree.nearest(sample);
    walker.walk(tree.state(nearest), sample, steer_steps, steer);
    if (steer.steps > 0) {
      const std::vector<std::uint32_t> x_new(steer.states.end() - static_cast<std::ptrdiff_t>(n),
                                             steer.states.end());
      const std::optional<VertexId> existing = tree.find(x_new);
      const auto near = tree.near(x_new, tree.size());

      // Choose parent: cheapest feasible greedy connection into x_new.
      VertexId parent = nearest;
      std::vector<std::uint32_t> parent_edge = steer.states;
      double parent_edge_cost = steer.cost;
      double best_through = tree.cost(nearest) + steer.cost;
      for (VertexId v : near) {
        if (v == nearest || (existing && v == *existing)) continue;
        if (tree.cost(v) >= best_through) continue;
        walker.walk(tree.state(v), x_new, connect_steps, link);
        if (link.failure || link.steps == 0) continue;
        if (tree.cost(v) + link.cost < best_through) {
          best_through = tree.cost(v) + link.cost;
          parent = v;
          parent_edge = link.states;
          parent_edge_cost = link.cost;
        }
      }

      VertexId x_id;
      if (existing) {
        x_id = *existing;
        if (x_id != tree.root() && parent != x_id && best_through < tree.cost(x_id))
          tree.reparent(x_id, parent, std::move(parent_edge), parent_edge_cost);
      } else {
        x_id = tree.add_vertex(parent, std::move(parent_edge), parent_edge_cost);
        if (!goal_vertex && std::equal(x_new.begin(), x_new.end(), goal.begin())) goal_vertex = x_id;
      }

      // Rewire the neighborhood through x_new.
      for (VertexId v : near) {
        if (v == x_id || v == tree.root()) continue;
        if (tree.parent(x_id) && *tree.parent(x_id) == v) continue;
        if (tree.cost(x_id) >= tree.cost(v)) continue;
        walker.walk(tree.state(x_id), tree.state(v), connect_steps, link);
        if (link.failure || link.steps == 0) continue;
        if (tree.cost(x_id) + link.cost < tree.cost(v))
          tree.reparent(v, x_id, link.states, link.cost);
      }
    }

    if (goal_vertex && tree.cost(*goal_vertex) < best_cost) {
      best_cost = tree.cost(*goal_vertex);
      result.solutions.push_back(
          {elapsed(), iteration, solution_from_path(tree_path_to(tree, kernel, *goal_vertex), kernel.timestep())});
      // A solution at the per-agent relaxation bound cannot be improved.
      if (best_cost <= problem.lower_bound() + kCostTolerance) {
        result.status = PlanStatus::optimal_proven;
        result.iterations = iteration;
        return result;
      }
    }

    if (config.debug_check_interval > 0 && iteration % config.debug_check_interval == 0) {
      const auto problems = tree.check_invariants();
      if (!problems.empty()) throw std::logic_error("search tree invariant broken: " + problems.front());
    }
  }
  result.iterations = iteration;
  result.status = PlanStatus::budget_exhausted;
  return result;
}

}  // namespace marrt

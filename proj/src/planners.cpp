#include "marrt/planners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <tuple>

#include "marrt/detail/greedy.hpp"

namespace marrt {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::ja: return "ja";
    case Algorithm::marrtstar: return "marrtstar";
    case Algorithm::ismarrtstar: return "ismarrtstar";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "ja") return Algorithm::ja;
  if (name == "marrtstar") return Algorithm::marrtstar;
  if (name == "ismarrtstar") return Algorithm::ismarrtstar;
  return std::nullopt;
}

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::optimal_proven: return "optimal_proven";
    case PlanStatus::budget_exhausted: return "budget_exhausted";
    case PlanStatus::infeasible_proven: return "infeasible_proven";
  }
  return "unknown";
}

std::string_view to_string(ConnectFailure failure) {
  switch (failure) {
    case ConnectFailure::conflict: return "conflict";
    case ConnectFailure::local_minimum: return "local-minimum";
    case ConnectFailure::step_limit: return "step-limit";
  }
  return "unknown";
}

void PlannerConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (eta <= 0) throw InvalidParameters("eta must be positive");
  if (!(gamma > 0.0) || !finite(gamma)) throw InvalidParameters("gamma must be positive");
  if (!(goal_bias >= 0.0 && goal_bias < 1.0)) throw InvalidParameters("goal bias must lie in [0, 1)");
  if (!(informed_bias >= 0.0 && informed_bias < 1.0))
    throw InvalidParameters("informed bias must lie in [0, 1)");
  if (goal_bias + informed_bias > 1.0)
    throw InvalidParameters("goal bias plus informed bias must not exceed 1");
  if (!(informed_radius >= 0.0) || !finite(informed_radius))
    throw InvalidParameters("informed radius must be non-negative");
  if (budget.kind == Budget::Kind::seconds && (!(budget.seconds > 0.0) || !finite(budget.seconds)))
    throw InvalidParameters("time budget must be positive");
  if (budget.kind == Budget::Kind::iterations && budget.iterations == 0)
    throw InvalidParameters("iteration budget must be positive");
  if (greedy_alternatives < 0) throw InvalidParameters("greedy alternatives must be non-negative");
  if (ja_node_limit == 0) throw InvalidParameters("JA node limit must be positive");
  if (sample_retries < 1) throw InvalidParameters("sample retries must be positive");
}

std::string PlannerConfig::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "eta=" << eta << " gamma=" << gamma << " goal_bias=" << goal_bias
      << " informed_bias=" << informed_bias << " informed_radius=" << informed_radius
      << " rng_seed=" << rng_seed << " budget="
      << (budget.kind == Budget::Kind::seconds ? std::to_string(budget.seconds) + "s"
                                               : std::to_string(budget.iterations) + "it")
      << " greedy_alternatives=" << greedy_alternatives
      << " metric=" << (metric == JointMetric::sum ? "sum" : "max")
      << " separation_mode=" << (separation_mode == SeparationMode::continuous ? "continuous" : "per_timestep")
      << " ja_node_limit=" << ja_node_limit << " sample_retries=" << sample_retries;
  return out.str();
}

std::string config_digest(const PlannerConfig& config) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.describe())));
  return buffer;
}

PlanningProblem::PlanningProblem(ProblemInstance instance) : instance_(std::move(instance)) {
  require_valid(instance_);
  for (std::size_t i = 0; i < instance_.agent_count(); ++i) {
    tables_.push_back(distance_table(instance_.graphs[i], instance_.destinations[i]));
    lower_bound_ += tables_.back().cost_to_goal(instance_.starts[i]);
  }
}

AnytimeResult plan(const PlanningProblem& problem, Algorithm algorithm, const PlannerConfig& config) {
  switch (algorithm) {
    case Algorithm::ja: return plan_ja(problem, config);
    case Algorithm::marrtstar: return plan_marrtstar(problem, config, false);
    case Algorithm::ismarrtstar: return plan_marrtstar(problem, config, true);
  }
  throw UnknownAlgorithm("unknown algorithm");
}

std::vector<WaypointId> single_agent_optimal_path(const MotionGraph& graph, WaypointId start,
                                                  WaypointId destination) {
  const std::size_t source = graph.index_of(start);
  const std::size_t target = graph.index_of(destination);
  if (source == target) return {start};

  // Euclidean distance over the fastest primitive speed never overestimates.
  double max_speed = 0.0;
  for (const auto& p : graph.all_primitives()) {
    if (p.kind == PrimitiveKind::wait) continue;
    const Point& a = graph.position(p.from);
    const Point& b = graph.position(p.to);
    max_speed = std::max(max_speed, std::hypot(a.x - b.x, a.y - b.y) / p.duration);
  }
  const Point goal = graph.position_at(target);
  auto heuristic = [&](std::size_t i) {
    if (max_speed <= 0.0) return 0.0;
    const Point& p = graph.position_at(i);
    return std::hypot(p.x - goal.x, p.y - goal.y) / max_speed;
  };

  std::vector<double> g(graph.size(), kInfinity);
  std::vector<std::int64_t> parent(graph.size(), -1);
  std::vector<char> closed(graph.size(), 0);
  // (f, h, insertion order, index): earlier insertions win ties, which follows
  // the canonical primitive order of the expanding waypoint.
  using Entry = std::tuple<double, double, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t counter = 0;
  g[source] = 0.0;
  open.emplace(heuristic(source), heuristic(source), counter++, source);
  while (!open.empty()) {
    const auto [f, h, order, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    if (u == target) break;
    const auto prims = graph.primitives_at(u);
    const auto targets = graph.targets_at(u);
    for (std::size_t c = 0; c < prims.size(); ++c) {
      const std::size_t v = targets[c];
      if (v == u || closed[v]) continue;
      const double candidate = g[u] + prims[c].duration;
      if (candidate < g[v]) {
        g[v] = candidate;
        parent[v] = static_cast<std::int64_t>(u);
        const double hv = heuristic(v);
        open.emplace(candidate + hv, hv, counter++, v);
      }
    }
  }
  if (!closed[target])
    throw Unreachable("waypoint " + std::to_string(destination) + " is unreachable from " +
                      std::to_string(start));
  std::vector<WaypointId> path;
  for (std::int64_t v = static_cast<std::int64_t>(target); v >= 0; v = parent[static_cast<std::size_t>(v)])
    path.push_back(graph.id_at(static_cast<std::size_t>(v)));
  std::reverse(path.begin(), path.end());
  return path;
}

GreedyConnection greedy_connect(const ProblemInstance& instance, const JointState& from,
                                const JointState& to, std::size_t max_steps, SeparationMode mode,
                                int alternatives) {
  if (from.size() != instance.agent_count() || to.size() != instance.agent_count())
    throw ArityMismatch("joint state arity differs from the agent count");
  detail::JointKernel kernel(instance, mode);
  detail::GreedyWalker walker(kernel, alternatives);
  detail::IndexWalk walk;
  walker.walk(kernel.to_indices(from), kernel.to_indices(to), max_steps, walk);

  GreedyConnection out;
  out.failure = walk.failure;
  const std::size_t n = from.size();
  for (std::size_t s = 0; s <= walk.steps; ++s) {
    std::span<const std::uint32_t> state(walk.states.data() + s * n, n);
    out.path.states.push_back(kernel.to_ids(state));
  }
  for (std::size_t s = 0; s < walk.steps; ++s) {
    JointMove move;
    for (std::size_t k = 0; k < n; ++k) {
      const auto a = walk.states[s * n + k];
      const auto b = walk.states[(s + 1) * n + k];
      const auto prims = kernel.graph(k).primitives_at(a);
      const auto targets = kernel.graph(k).targets_at(a);
      for (std::size_t c = 0; c < prims.size(); ++c)
        if (targets[c] == b) {
          move.primitives.push_back(prims[c]);
          break;
        }
    }
    out.path.moves.push_back(std::move(move));
  }
  out.path.cost = walk.cost;
  return out;
}

JointSampler::JointSampler(const ProblemInstance& instance, const PlannerConfig& config,
                           SamplingMode mode, const std::vector<std::vector<WaypointId>>& paths)
    : kernel_(instance, config.separation_mode),
      mode_(mode),
      goal_bias_(config.goal_bias),
      informed_bias_(config.informed_bias),
      retries_(config.sample_retries) {
  if (mode_ != SamplingMode::informed) return;
  if (paths.size() != instance.agent_count())
    throw InvalidParameters("informed sampling needs one optimal path per agent");
  const double r2 = config.informed_radius * config.informed_radius;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const MotionGraph& g = instance.graph(k);
    if (paths[k].empty()) throw InvalidParameters("informed sampling needs non-empty paths");
    std::vector<std::vector<std::uint32_t>> tube;
    for (WaypointId id : paths[k]) {
      const Point& c = g.position(id);
      std::vector<std::uint32_t> around;
      for (std::size_t w = 0; w < g.size(); ++w) {
        const Point& p = g.position_at(w);
        const double dx = p.x - c.x;
        const double dy = p.y - c.y;
        if (dx * dx + dy * dy <= r2) around.push_back(static_cast<std::uint32_t>(w));
      }
      tube.push_back(std::move(around));
    }
    tubes_.push_back(std::move(tube));
  }
}

bool JointSampler::draw(Rng& rng, detail::IndexState& out) const {
  const std::size_t n = kernel_.agents();
  out.resize(n);
  const double u = rng.uniform01();
  if (u < goal_bias_) {
    out = kernel_.destinations();
    return true;
  }
  const bool informed = mode_ == SamplingMode::informed && u < goal_bias_ + informed_bias_;
  for (std::size_t k = 0; k < n; ++k) {
    if (informed) {
      const auto& tube = tubes_[k];
      const auto& around = tube[rng.index(tube.size())];
      out[k] = around[rng.index(around.size())];
    } else {
      out[k] = static_cast<std::uint32_t>(rng.index(kernel_.graph(k).size()));
    }
  }
  return kernel_.resting_separated(out);
}

detail::IndexState JointSampler::sample_indices(Rng& rng) const {
  detail::IndexState out;
  for (int attempt = 0; attempt < retries_; ++attempt)
    if (draw(rng, out)) return out;
  return kernel_.destinations();
}

JointState JointSampler::sample(Rng& rng) const { return kernel_.to_ids(sample_indices(rng)); }

JointState sample_joint_state(const ProblemInstance& instance, const PlannerConfig& config, Rng& rng,
                              SamplingMode mode,
                              const std::vector<std::vector<WaypointId>>& single_agent_paths) {
  JointSampler sampler(instance, config, mode, single_agent_paths);
  return sampler.sample(rng);
}

}  // namespace marrt

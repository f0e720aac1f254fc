#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "marrt/detail/joint_kernel.hpp"
#include "marrt/planners.hpp"
#include "marrt/search_tree.hpp"
#include "oracles.hpp"

using namespace marrt;

namespace {

PlannerConfig iterations(std::uint64_t k, std::uint64_t seed = 0) {
  PlannerConfig c;
  c.budget = Budget::iteration_count(k);
  c.rng_seed = seed;
  return c;
}

double path_cost(const std::vector<WaypointId>& path) { return static_cast<double>(path.size()) - 1.0; }

void check_anytime(const ProblemInstance& inst, const PlanningProblem& problem, const AnytimeResult& r) {
  for (std::size_t i = 0; i < r.solutions.size(); ++i) {
    const auto& s = r.solutions[i].solution;
    const auto verdict = validate_solution(inst, s);
    CHECK(verdict.valid());
    CHECK(s.total_cost >= problem.lower_bound() - kCostTolerance);
    if (i > 0) {
      CHECK(s.total_cost < r.solutions[i - 1].solution.total_cost);
      CHECK(r.solutions[i].iteration >= r.solutions[i - 1].iteration);
    }
  }
}

}  // namespace

TEST_CASE("algorithm names and config validation") {
  CHECK(parse_algorithm("ja") == Algorithm::ja);
  CHECK(parse_algorithm("ismarrtstar") == Algorithm::ismarrtstar);
  CHECK_FALSE(parse_algorithm("nosuch").has_value());
  CHECK(to_string(Algorithm::marrtstar) == "marrtstar");

  PlannerConfig c;
  CHECK_NOTHROW(c.validate());
  c.goal_bias = 0.6;
  CHECK_THROWS_AS(c.validate(), InvalidParameters);
  c = {};
  c.eta = 0;
  CHECK_THROWS_AS(c.validate(), InvalidParameters);
  c = {};
  c.gamma = NAN;
  CHECK_THROWS_AS(c.validate(), InvalidParameters);
  c = {};
  c.budget = Budget::iteration_count(0);
  CHECK_THROWS_AS(c.validate(), InvalidParameters);
  c = {};
  c.informed_radius = -1;
  CHECK_THROWS_AS(c.validate(), InvalidParameters);

  PlannerConfig a, b;
  b.rng_seed = 9;
  CHECK(config_digest(a) != config_digest(b));
  CHECK(config_digest(a) == config_digest(PlannerConfig{}));
}

TEST_CASE("planning problem lower bound") {
  const auto inst = fixtures::grid_instance(5, {}, {{0, 0}, {4, 4}}, {{3, 0}, {4, 2}});
  const PlanningProblem problem(inst);
  CHECK(problem.lower_bound() == 5.0);
  CHECK(problem.distances(0).cost_to_goal(grid_id(5, 0, 0)) == 3.0);
  auto bad = inst;
  bad.starts[1] = bad.starts[0];
  CHECK_THROWS_AS(PlanningProblem{bad}, InvalidInstance);
}

TEST_CASE("JA examples") {
  const auto single = fixtures::grid_instance(5, {}, {{0, 0}}, {{3, 0}});
  auto r = plan_ja(PlanningProblem(single), PlannerConfig{});
  CHECK(r.status == PlanStatus::optimal_proven);
  REQUIRE(r.solutions.size() == 1);
  CHECK(r.best()->total_cost == 3.0);

  const auto corridor = fixtures::corridor_instance(3, {{0, 0}, {2, 0}}, {{2, 0}, {0, 0}});
  r = plan_ja(PlanningProblem(corridor), PlannerConfig{});
  CHECK(r.status == PlanStatus::infeasible_proven);
  CHECK(r.solutions.empty());
  CHECK_FALSE(oracle::joint_ucs(corridor).has_value());

  const auto crossing = fixtures::grid_instance(5, {}, {{0, 2}, {2, 0}}, {{4, 2}, {2, 4}});
  r = plan_ja(PlanningProblem(crossing), PlannerConfig{});
  const auto expected = oracle::joint_ucs(crossing);
  REQUIRE(expected);
  REQUIRE(r.best());
  CHECK(r.best()->total_cost == *expected);
  CHECK(validate_solution(crossing, *r.best()).valid());
}

TEST_CASE("JA equals the materialized-graph oracle on random small instances") {
  Rng rng(77);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int size = 2 + static_cast<int>(rng.index(4));
    const int agents = 1 + static_cast<int>(rng.index(2));
    if (size * size - static_cast<int>(std::floor(0.1 * size * size + 1e-9)) < 2 * agents) continue;
    const auto inst = generate_grid_instance(size, agents, 0.1, 0.8, rng.next());
    const PlanningProblem problem(inst);
    const auto r = plan_ja(problem, PlannerConfig{});
    const auto expected = oracle::joint_ucs(inst);
    if (expected) {
      REQUIRE(r.best());
      CHECK(r.status == PlanStatus::optimal_proven);
      CHECK(r.best()->total_cost == *expected);
      CHECK(problem.lower_bound() <= *expected);
      check_anytime(inst, problem, r);
      ++solved;
    } else {
      CHECK(r.status == PlanStatus::infeasible_proven);
    }
  }
  CHECK(solved > 20);
}

TEST_CASE("JA respects its node limit and time budget") {
  const auto inst = generate_grid_instance(30, 5, 0.1, 0.8, 3);
  PlannerConfig c;
  c.ja_node_limit = 1000;
  auto r = plan_ja(PlanningProblem(inst), c);
  CHECK(r.status == PlanStatus::budget_exhausted);
  CHECK(r.solutions.empty());

  c = {};
  c.budget = Budget::iteration_count(5);
  r = plan_ja(PlanningProblem(inst), c);
  CHECK(r.status == PlanStatus::budget_exhausted);
  CHECK(r.iterations == 5);
}

TEST_CASE("single-agent optimal path") {
  const auto g = fixtures::grid_instance(5, {}, {{0, 0}}, {{2, 1}});
  const auto& graph = g.graph(0);
  CHECK(single_agent_optimal_path(graph, 6, 6) == std::vector<WaypointId>{6});
  const auto p = single_agent_optimal_path(graph, grid_id(5, 0, 0), grid_id(5, 2, 1));
  CHECK(p.size() == 4);
  CHECK(p == single_agent_optimal_path(graph, grid_id(5, 0, 0), grid_id(5, 2, 1)));

  // wall at x = 2 except the top row
  const auto walled = fixtures::grid_instance(5, {{2, 0}, {2, 1}, {2, 2}, {2, 3}}, {{0, 0}}, {{4, 0}});
  const auto detour = single_agent_optimal_path(walled.graph(0), grid_id(5, 0, 0), grid_id(5, 4, 0));
  const auto table = distance_table(walled.graphs[0], grid_id(5, 4, 0));
  CHECK(path_cost(detour) == table.cost_to_goal(grid_id(5, 0, 0)));
  CHECK(path_cost(detour) == 12.0);
  for (std::size_t i = 1; i < detour.size(); ++i) {
    bool linked = false;
    for (const auto& prim : walled.graph(0).primitives(detour[i - 1])) linked |= prim.to == detour[i];
    CHECK(linked);
  }

  const auto split = fixtures::grid_instance(3, {{1, 0}, {1, 1}, {1, 2}}, {{0, 0}}, {{0, 2}});
  CHECK_THROWS_AS(single_agent_optimal_path(split.graph(0), grid_id(3, 0, 0), grid_id(3, 2, 0)), Unreachable);
}

TEST_CASE("greedy connection examples") {
  const auto inst = fixtures::grid_instance(8, {}, {{0, 0}}, {{4, 0}});
  auto c = greedy_connect(inst, inst.starts, inst.starts, 10);
  CHECK(c.connected());
  CHECK(c.path.steps() == 0);
  CHECK(c.path.cost == 0.0);

  c = greedy_connect(inst, inst.starts, inst.destinations, 10);
  REQUIRE(c.connected());
  CHECK(c.path.cost == 4.0);
  CHECK(c.path.back() == inst.destinations);

  c = greedy_connect(inst, inst.starts, inst.destinations, 3);
  CHECK(c.failure == ConnectFailure::step_limit);
  CHECK(c.path.steps() == 3);

  // Facing agents one edge apart: the first joint step is a swap.
  const auto facing = fixtures::grid_instance(5, {}, {{1, 2}, {2, 2}}, {{3, 2}, {0, 2}});
  c = greedy_connect(facing, facing.starts, facing.destinations, 10);
  CHECK(c.failure == ConnectFailure::conflict);
  CHECK(c.path.steps() == 0);

  // A wall directly between start and target: no strict progress possible.
  const auto wall = fixtures::grid_instance(5, {{2, 1}, {2, 2}, {2, 3}}, {{1, 2}}, {{3, 2}});
  c = greedy_connect(wall, wall.starts, wall.destinations, 10);
  CHECK(c.failure == ConnectFailure::local_minimum);
}

TEST_CASE("greedy alternatives recover from a shear conflict") {
  // b leaves (1,0) upwards while a follows into it: a shear conflict. With
  // alternatives, a waits one step instead.
  const auto shear = fixtures::grid_instance(5, {}, {{0, 0}, {1, 0}}, {{2, 0}, {1, 3}});
  auto c = greedy_connect(shear, shear.starts, shear.destinations, 10);
  CHECK(c.failure == ConnectFailure::conflict);
  c = greedy_connect(shear, shear.starts, shear.destinations, 10, SeparationMode::continuous, 2);
  REQUIRE(c.connected());
  CHECK(validate_solution(shear, solution_from_path(c.path, 1.0)).valid());

  // Head-on: no single-agent deviation strictly reduces the summed distance,
  // so the step still fails with the greedy choice's reason.
  const auto facing = fixtures::grid_instance(5, {}, {{1, 2}, {2, 2}}, {{3, 2}, {0, 2}});
  c = greedy_connect(facing, facing.starts, facing.destinations, 10, SeparationMode::continuous, 4);
  CHECK(c.failure == ConnectFailure::conflict);
  CHECK(c.path.steps() == 0);
}

TEST_CASE("greedy connection paths are chain-consistent and separated") {
  Rng rng(8);
  int successes = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int agents = 1 + static_cast<int>(rng.index(3));
    const auto inst = generate_grid_instance(8, agents, 0.1, 0.8, rng.next());
    const std::size_t max_steps = 1 + rng.index(15);
    const auto c = greedy_connect(inst, inst.starts, inst.destinations, max_steps);
    CHECK(c.path.states.size() == c.path.moves.size() + 1);
    CHECK(c.path.steps() <= max_steps);
    CHECK(c.path.front() == inst.starts);
    for (std::size_t s = 0; s < c.path.steps(); ++s) {
      CHECK(move_is_separated(inst, c.path.states[s], c.path.moves[s], inst.separation));
      CHECK(apply_move(c.path.moves[s]) == c.path.states[s + 1]);
    }
    if (c.connected()) {
      CHECK(c.path.back() == inst.destinations);
      const auto sol = solution_from_path(c.path, 1.0);
      CHECK(validate_solution(inst, sol).valid());
      ++successes;
    }
  }
  CHECK(successes > 50);
}

TEST_CASE("sampler: goal bias one always yields the destinations") {
  const auto inst = generate_grid_instance(10, 3, 0.1, 0.8, 4);
  PlannerConfig c;
  c.goal_bias = 1.0;
  c.informed_bias = 0.0;
  Rng rng(1);
  for (int i = 0; i < 200; ++i) CHECK(sample_joint_state(inst, c, rng, SamplingMode::uniform) == inst.destinations);
}

TEST_CASE("sampler: uniform frequencies and reproducibility") {
  const auto inst = fixtures::grid_instance(5, {}, {{0, 0}}, {{4, 4}});
  PlannerConfig c;
  c.goal_bias = 0.0;
  const JointSampler sampler(inst, c, SamplingMode::uniform);
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(sampler.sample(a) == sampler.sample(b));

  // 10^7 draws: per-waypoint standard error ~0.16%, so 1% is > 6 sigma.
  constexpr int kDraws = 10'000'000;
  std::map<WaypointId, int> counts;
  Rng rng(2024);
  for (int i = 0; i < kDraws; ++i) ++counts[sampler.sample_indices(rng)[0]];
  CHECK(counts.size() == 25);
  for (const auto& [id, count] : counts)
    CHECK(std::abs(count / (kDraws / 25.0) - 1.0) < 0.01);
}

TEST_CASE("sampler: degenerate tube stays on the optimal paths") {
  const auto inst = generate_grid_instance(10, 3, 0.1, 0.8, 12);
  PlannerConfig c;
  c.goal_bias = 0.0;
  c.informed_bias = 1.0;
  c.informed_radius = 0.0;
  std::vector<std::vector<WaypointId>> paths;
  for (std::size_t k = 0; k < 3; ++k)
    paths.push_back(single_agent_optimal_path(inst.graph(k), inst.starts[k], inst.destinations[k]));
  Rng rng(5);
  int off_fallback = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto s = sample_joint_state(inst, c, rng, SamplingMode::informed, paths);
    CHECK(oracle::resting_separated(inst, s));
    if (s != inst.destinations) ++off_fallback;
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(std::find(paths[k].begin(), paths[k].end(), s[k]) != paths[k].end());
  }
  CHECK(off_fallback > 0);
  CHECK_THROWS_AS(JointSampler(inst, c, SamplingMode::informed, {}), InvalidParameters);
}

TEST_CASE("sampler: samples are resting-separated") {
  const auto inst = generate_grid_instance(5, 4, 0.1, 0.8, 31);
  PlannerConfig c;
  Rng rng(6);
  for (int i = 0; i < 2000; ++i) CHECK(oracle::resting_separated(inst, sample_joint_state(inst, c, rng, SamplingMode::uniform)));
}

TEST_CASE("search tree nearest and near agree with a linear scan") {
  for (const auto metric : {JointMetric::sum, JointMetric::max}) {
    Rng rng(metric == JointMetric::sum ? 1 : 2);
    const auto inst = generate_grid_instance(12, 2, 0.1, 0.8, 44);
    const detail::JointKernel kernel(inst, SeparationMode::continuous);
    const auto& g = inst.graph(0);
    SearchTree tree(kernel, kernel.starts(), metric, 10.0, 20.0);

    CHECK(tree.nearest(kernel.destinations()) == tree.root());
    while (tree.size() < 200) {
      std::vector<std::uint32_t> s{static_cast<std::uint32_t>(rng.index(g.size())),
                                   static_cast<std::uint32_t>(rng.index(g.size()))};
      if (tree.find(s)) continue;
      const auto parent = static_cast<VertexId>(rng.index(tree.size()));
      std::vector<std::uint32_t> edge(tree.state(parent).begin(), tree.state(parent).end());
      edge.insert(edge.end(), s.begin(), s.end());
      tree.add_vertex(parent, edge, kernel.step_cost(tree.state(parent), s));
    }
    CHECK(tree.check_invariants().empty());

    for (int q = 0; q < 300; ++q) {
      std::vector<std::uint32_t> x{static_cast<std::uint32_t>(rng.index(g.size())),
                                   static_cast<std::uint32_t>(rng.index(g.size()))};
      const auto qc = tree.coordinates_of(x);
      VertexId best = 0;
      double best_d = kInfinity;
      for (VertexId v = 0; v < tree.size(); ++v) {
        const double d = joint_distance(metric, qc, tree.coordinates(v));
        if (d < best_d) {
          best_d = d;
          best = v;
        }
      }
      CHECK(tree.nearest(x) == best);

      const std::size_t m = 1 + rng.index(tree.size());
      const double r = tree.near_radius(m);
      std::vector<VertexId> expected;
      for (VertexId v = 0; v < tree.size(); ++v)
        if (joint_distance(metric, qc, tree.coordinates(v)) <= r) expected.push_back(v);
      CHECK(tree.near(x, m) == expected);
    }
  }
}

TEST_CASE("near radius formula") {
  const auto inst = generate_grid_instance(10, 2, 0.1, 0.8, 1);
  const detail::JointKernel kernel(inst, SeparationMode::continuous);
  SearchTree tree(kernel, kernel.starts(), JointMetric::sum, 10.0, 20.0);
  CHECK(tree.near_radius(1) == 0.0);
  CHECK(tree.near_radius(2) == 10.0);
  const double m = 1e6;
  CHECK(tree.near_radius(1'000'000) == doctest::Approx(20.0 * std::pow(std::log(m) / m, 0.25)));
}

TEST_CASE("nearest ties prefer the smaller vertex id") {
  const auto inst = fixtures::grid_instance(5, {}, {{2, 2}}, {{0, 0}});
  const detail::JointKernel kernel(inst, SeparationMode::continuous);
  SearchTree tree(kernel, kernel.to_indices({grid_id(5, 2, 2)}), JointMetric::sum, 10.0, 20.0);
  auto add = [&](VertexId parent, int x, int y) {
    std::vector<std::uint32_t> edge(tree.state(parent).begin(), tree.state(parent).end());
    edge.push_back(kernel.to_indices({grid_id(5, x, y)})[0]);
    return tree.add_vertex(parent, edge, 1.0);
  };
  const auto a = add(0, 3, 2);
  const auto b = add(0, 1, 2);
  CHECK(a < b);
  // (2, 2) is the root itself; a point between (3,2) and (1,2) at equal distance:
  CHECK(tree.nearest(kernel.to_indices({grid_id(5, 2, 0)})) == 0);
  const auto c = add(a, 4, 2);
  CHECK(tree.nearest(kernel.to_indices({grid_id(5, 4, 1)})) == c);
  // distances 1 and 2 from (0, 2): the nearer one wins
  CHECK(tree.nearest(kernel.to_indices({grid_id(5, 0, 2)})) == b);
}

TEST_CASE("rewire cost propagation") {
  const auto inst = fixtures::grid_instance(6, {}, {{0, 0}}, {{5, 5}});
  const detail::JointKernel kernel(inst, SeparationMode::continuous);
  SearchTree tree(kernel, kernel.starts(), JointMetric::sum, 10.0, 20.0);
  auto add = [&](VertexId parent, WaypointId id) {
    std::vector<std::uint32_t> edge(tree.state(parent).begin(), tree.state(parent).end());
    edge.push_back(kernel.to_indices({id})[0]);
    return tree.add_vertex(parent, edge, 1.0);
  };
  const auto v1 = add(0, 1);
  const auto v2 = add(v1, 2);
  const auto leaf = add(0, 6);
  CHECK(tree.cost(v2) == 2.0);

  tree.rewire_cost_propagation(leaf, -1.0);
  CHECK(tree.cost(leaf) == 0.0);
  CHECK(tree.cost(v1) == 1.0);
  CHECK(tree.cost(v2) == 2.0);

  tree.rewire_cost_propagation(v1, -2.0);
  CHECK(tree.cost(0) == 0.0);
  CHECK(tree.cost(v1) == -1.0);
  CHECK(tree.cost(v2) == 0.0);

  CHECK_THROWS_AS(tree.rewire_cost_propagation(99, -1.0), UnknownVertex);
  CHECK_THROWS_AS(tree.reparent(0, v1, {}, 0.0), UnknownVertex);
}

TEST_CASE("random rewires keep stored costs equal to a full recomputation") {
  Rng rng(17);
  const auto inst = generate_grid_instance(10, 2, 0.0, 0.8, 3);
  const detail::JointKernel kernel(inst, SeparationMode::continuous);
  const auto& g = inst.graph(0);
  SearchTree tree(kernel, kernel.starts(), JointMetric::sum, 10.0, 20.0);
  auto edge_between = [&](VertexId p, std::span<const std::uint32_t> s) {
    std::vector<std::uint32_t> edge(tree.state(p).begin(), tree.state(p).end());
    edge.insert(edge.end(), s.begin(), s.end());
    return edge;
  };
  while (tree.size() < 300) {
    std::vector<std::uint32_t> s{static_cast<std::uint32_t>(rng.index(g.size())),
                                 static_cast<std::uint32_t>(rng.index(g.size()))};
    if (tree.find(s)) continue;
    const auto p = static_cast<VertexId>(rng.index(tree.size()));
    tree.add_vertex(p, edge_between(p, s), 0.25 + rng.uniform01() * 3.0);
  }
  for (int round = 0; round < 500; ++round) {
    const auto v = static_cast<VertexId>(1 + rng.index(tree.size() - 1));
    const auto p = static_cast<VertexId>(rng.index(tree.size()));
    // p must not lie in v's subtree
    bool descendant = false;
    for (std::optional<VertexId> u = p; u; u = tree.parent(*u)) descendant |= *u == v;
    if (descendant) continue;
    const auto s = tree.state(v);
    tree.reparent(v, p, edge_between(p, s), 0.25 + rng.uniform01() * 3.0);
  }
  // oracle: recompute every cost from the root along parent links
  for (VertexId v = 0; v < tree.size(); ++v) {
    double total = 0.0;
    for (VertexId u = v; tree.parent(u); u = *tree.parent(u)) total += tree.edge_cost(u);
    CHECK(std::abs(total - tree.cost(v)) < 1e-9);
  }
  const auto problems = tree.check_invariants();
  // edge costs were assigned freely, so only the stale-edge-cost clause may fire
  for (const auto& p : problems) CHECK(p.find("stale") != std::string::npos);
}

TEST_CASE("MA-RRT* start equal to destination yields cost 0 at iteration 1") {
  const auto inst = fixtures::grid_instance(6, {}, {{0, 0}, {3, 3}}, {{0, 0}, {3, 3}});
  const PlanningProblem problem(inst);
  for (bool informed : {false, true}) {
    const auto r = plan_marrtstar(problem, iterations(100), informed);
    REQUIRE(r.solutions.size() == 1);
    CHECK(r.solutions[0].iteration == 1);
    CHECK(r.solutions[0].solution.total_cost == 0.0);
    CHECK(validate_solution(inst, r.solutions[0].solution).valid());
  }
}

TEST_CASE("MA-RRT* single agent converges to the JA optimum") {
  const auto inst = generate_grid_instance(10, 1, 0.0, 0.8, 5);
  const PlanningProblem problem(inst);
  const double optimum = plan_ja(problem, PlannerConfig{}).best()->total_cost;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = plan_marrtstar(problem, iterations(5000, seed), false);
    check_anytime(inst, problem, r);
    REQUIRE(r.best());
    hits += r.best()->total_cost == optimum;
  }
  CHECK(hits >= 9);
}

TEST_CASE("MA-RRT* and isMA-RRT* are sound, bounded and deterministic") {
  Rng rng(2);
  for (int trial = 0; trial < 24; ++trial) {
    const int agents = 1 + static_cast<int>(rng.index(4));
    const auto inst = generate_grid_instance(trial % 2 ? 10 : 7, agents, 0.1, 0.8, rng.next());
    const PlanningProblem problem(inst);
    for (bool informed : {false, true}) {
      auto config = iterations(1500, trial);
      config.debug_check_interval = 50;
      const auto a = plan_marrtstar(problem, config, informed);
      const auto b = plan_marrtstar(problem, config, informed);
      check_anytime(inst, problem, a);
      REQUIRE(a.solutions.size() == b.solutions.size());
      for (std::size_t i = 0; i < a.solutions.size(); ++i) {
        CHECK(a.solutions[i].iteration == b.solutions[i].iteration);
        CHECK(a.solutions[i].solution == b.solutions[i].solution);
      }
      CHECK(a.iterations == b.iterations);
      if (a.status == PlanStatus::optimal_proven) {
        CHECK(a.best()->total_cost == problem.lower_bound());
      } else {
        CHECK(a.status == PlanStatus::budget_exhausted);
        CHECK(a.iterations == 1500);
      }
    }
  }
}

TEST_CASE("MA-RRT* alternative settings remain sound") {
  const auto inst = generate_grid_instance(10, 3, 0.1, 0.8, 71);
  const PlanningProblem problem(inst);
  auto config = iterations(1500, 4);
  config.metric = JointMetric::max;
  config.greedy_alternatives = 3;
  check_anytime(inst, problem, plan_marrtstar(problem, config, true));
  config = iterations(1500, 4);
  config.separation_mode = SeparationMode::per_timestep;
  const auto r = plan_marrtstar(problem, config, false);
  for (const auto& s : r.solutions)
    CHECK(validate_solution(inst, s.solution, SeparationMode::per_timestep).valid());
}

TEST_CASE("MA-RRT* honours wall-clock budgets") {
  const auto inst = generate_grid_instance(30, 4, 0.1, 0.8, 9);
  const PlanningProblem problem(inst);
  PlannerConfig c;
  c.budget = Budget::wall_clock(0.2);
  const auto started = std::chrono::steady_clock::now();
  const auto r = plan_marrtstar(problem, c, true);
  const double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  CHECK(spent < 1.0);
  CHECK(r.iterations > 0);
  check_anytime(inst, problem, r);
}

TEST_CASE("plan dispatches by algorithm") {
  const auto inst = fixtures::grid_instance(5, {}, {{0, 0}}, {{3, 0}});
  const PlanningProblem problem(inst);
  for (const auto a : {Algorithm::ja, Algorithm::marrtstar, Algorithm::ismarrtstar}) {
    const auto r = plan(problem, a, iterations(2000));
    REQUIRE(r.best());
    CHECK(r.best()->total_cost == 3.0);
  }
}

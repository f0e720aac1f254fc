// Command-line front end: generate, solve, validate, bench, report.
//
// Exit codes: 0 success, 1 domain failure (infeasible, invalid solution,
// unsolved within budget, bad input files), 2 usage error.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "marrt/bench.hpp"
#include "marrt/instance_io.hpp"
#include "marrt/planners.hpp"
#include "marrt/solution_io.hpp"

namespace {

using namespace marrt;

struct BudgetFlags {
  double seconds = 2.5;
  std::uint64_t iterations = 0;
  CLI::Option* time_option = nullptr;
  CLI::Option* iter_option = nullptr;

  void add(CLI::App* app) {
    time_option = app->add_option("--time-budget", seconds, "Wall-clock budget per run [s]")
                      ->capture_default_str()
                      ->check(CLI::PositiveNumber);
    iter_option = app->add_option("--iter-budget", iterations, "Iteration budget per run")
                      ->check(CLI::PositiveNumber);
    time_option->excludes(iter_option);
    iter_option->excludes(time_option);
  }

  Budget budget() const {
    if (iter_option && iter_option->count() > 0) return Budget::iteration_count(iterations);
    return Budget::wall_clock(seconds);
  }
};

struct PlannerFlags {
  PlannerConfig config;
  BudgetFlags budget;
  std::string metric = "sum";
  bool per_timestep = false;

  void add(CLI::App* app, bool with_seed) {
    budget.add(app);
    if (with_seed)
      app->add_option("--seed", config.rng_seed, "Planner RNG seed")->capture_default_str();
    app->add_option("--eta", config.eta, "Steering length in joint steps")->capture_default_str();
    app->add_option("--gamma", config.gamma, "Near-radius scale")->capture_default_str();
    app->add_option("--goal-bias", config.goal_bias, "Probability of sampling the destination")
        ->capture_default_str();
    app->add_option("--informed-bias", config.informed_bias,
                    "Probability of sampling around optimal single-agent paths (isMA-RRT*)")
        ->capture_default_str();
    app->add_option("--informed-radius", config.informed_radius, "Radius of the informed tube [m]")
        ->capture_default_str();
    app->add_option("--greedy-alternatives", config.greedy_alternatives,
                    "Alternative joint moves tried per greedy step")
        ->capture_default_str();
    app->add_option("--metric", metric, "Joint distance metric")
        ->check(CLI::IsMember({"sum", "max"}))
        ->capture_default_str();
    app->add_flag("--per-timestep-separation", per_timestep,
                  "Check separation only at step boundaries instead of along moves");
    app->add_option("--ja-node-limit", config.ja_node_limit, "Maximum joint states stored by JA")
        ->capture_default_str();
    app->add_option("--debug-check-interval", config.debug_check_interval,
                    "Check tree invariants every k iterations (0 = off)")
        ->capture_default_str();
    app->add_option("--sample-retries", config.sample_retries,
                    "Resampling attempts before falling back to the destination")
        ->capture_default_str();
  }

  PlannerConfig resolve() const {
    PlannerConfig c = config;
    c.budget = budget.budget();
    c.metric = metric == "max" ? JointMetric::max : JointMetric::sum;
    c.separation_mode = per_timestep ? SeparationMode::per_timestep : SeparationMode::continuous;
    return c;
  }
};

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_text_file_atomic(out, content);
  }
}

int cmd_generate(int size, int agents, double ratio, double separation, std::uint64_t seed,
                 const std::string& out) {
  emit(out, save_instance(generate_grid_instance(size, agents, ratio, separation, seed)));
  return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& algo, const PlannerFlags& flags,
              const std::string& out) {
  const auto instance = load_instance(read_text_file(instance_path));
  const PlannerConfig config = flags.resolve();
  const PlanningProblem problem(instance);
  const auto result = plan(problem, *parse_algorithm(algo), config);
  std::cerr << algo << ": status " << to_string(result.status) << ", " << result.iterations
            << " iterations, " << result.solutions.size() << " solution(s)\n";
  const Solution* best = result.best();
  if (!best) {
    std::cerr << "no solution found\n";
    return 1;
  }
  std::cerr << "first solution after " << result.solutions.front().elapsed << " s, cost "
            << result.solutions.front().solution.total_cost << "; best cost " << best->total_cost << '\n';
  emit(out, save_solution({instance.seed, algo, *best}));
  return 0;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path, bool per_timestep) {
  const auto instance = load_instance(read_text_file(instance_path));
  if (solution_path.empty()) {
    std::cerr << "instance ok: " << instance.agent_count() << " agents, "
              << instance.graph(0).size() << " waypoints\n";
    return 0;
  }
  const auto document = load_solution(read_text_file(solution_path));
  if (document.instance_seed != instance.seed)
    std::cerr << "note: solution was produced for instance seed " << document.instance_seed << '\n';
  const auto verdict = validate_solution(
      instance, document.solution, per_timestep ? SeparationMode::per_timestep : SeparationMode::continuous);
  if (verdict.valid()) {
    std::cerr << "solution valid, cost " << document.solution.total_cost << '\n';
    return 0;
  }
  for (const auto& v : verdict.violations) std::cerr << "violation(" << to_string(v.clause) << "): " << v.message << '\n';
  return 1;
}

int cmd_bench(const SuiteSpec& spec, const std::vector<std::string>& algos, const PlannerFlags& flags,
              int parallelism, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto records_path = std::filesystem::path(out_dir) / "records.csv";
  std::filesystem::remove(records_path);

  const auto suite = build_suite(spec);
  BenchOptions options;
  options.algorithms = algos;
  options.config = flags.resolve();
  options.parallelism = parallelism;
  options.suite_id = spec.suite_id();
  options.records_path = records_path;
  std::cerr << "suite " << options.suite_id << ": " << suite.size() << " instances x " << algos.size()
            << " algorithms\n";
  const auto records = run_benchmark(suite, options);
  for (const auto& a : algos) {
    std::size_t solved = 0, total = 0;
    for (const auto& r : records)
      if (r.algorithm == a) {
        ++total;
        solved += r.first_solution_time ? 1 : 0;
      }
    std::cerr << a << ": solved " << solved << " / " << total << '\n';
  }
  std::cerr << "records written to " << records_path.string() << '\n';
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& out_dir) {
  const auto records = parse_records_csv(read_text_file(records_path));
  const auto summary = report(records, out_dir);
  std::cerr << "report for " << records.size() << " records written to " << out_dir << " ("
            << summary.suboptimality.size() << " suboptimality rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-based and joint-space A* cooperative pathfinding"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a random grid instance");
  int size = 10, agents = 2;
  double ratio = 0.1, separation = 0.8;
  std::uint64_t seed = 0;
  std::string out;
  generate->add_option("--size", size, "Grid side length")->required()->check(CLI::Range(2, 65535));
  generate->add_option("--agents", agents, "Number of agents")->required()->check(CLI::PositiveNumber);
  generate->add_option("--obstacle-ratio", ratio, "Fraction of vertices removed")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999999));
  generate->add_option("--separation", separation, "Separation distance [m]")->capture_default_str();
  generate->add_option("--seed", seed, "Generator seed")->required();
  generate->add_option("--out", out, "Output file (stdout if omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "Plan on an instance");
  std::string instance_path, algo, solve_out;
  PlannerFlags solve_flags;
  solve->add_option("--instance", instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--algo", algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"ja", "marrtstar", "ismarrtstar"}));
  solve_flags.add(solve, true);
  solve->add_option("--out", solve_out, "Solution file (stdout if omitted)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check an instance and optionally a solution");
  std::string validate_instance, validate_solution_path;
  bool validate_per_timestep = false;
  validate->add_option("--instance", validate_instance, "Instance file")->required()->check(CLI::ExistingFile);
  validate->add_option("--solution", validate_solution_path, "Solution file")->check(CLI::ExistingFile);
  validate->add_flag("--per-timestep-separation", validate_per_timestep,
                     "Check separation only at step boundaries");

  // bench
  auto* bench = app.add_subcommand("bench", "Run algorithms over a generated instance suite");
  SuiteSpec spec;
  spec.grid_sizes = {10, 30, 50};
  spec.agent_counts = {1, 2, 3, 4, 5, 6};
  std::vector<std::string> algos{"ja", "marrtstar", "ismarrtstar"};
  PlannerFlags bench_flags;
  int parallelism = 1;
  std::string bench_out = "bench_out";
  bench->add_option("--sizes", spec.grid_sizes, "Grid sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--agent-counts", spec.agent_counts, "Agent counts")->delimiter(',')->capture_default_str();
  bench->add_option("--per-cell", spec.instances_per_cell, "Instances per (size, agents) cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--obstacle-ratio", spec.obstacle_ratio, "Fraction of vertices removed")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999999));
  bench->add_option("--separation", spec.separation, "Separation distance [m]")->capture_default_str();
  bench->add_option("--base-seed", spec.base_seed, "Suite seed")->capture_default_str();
  bench->add_option("--algos", algos, "Algorithms")
      ->delimiter(',')
      ->check(CLI::IsMember({"ja", "marrtstar", "ismarrtstar"}))
      ->capture_default_str();
  bench_flags.add(bench, false);
  bench->add_option("--parallelism", parallelism, "Concurrent runs")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--out-dir", bench_out, "Directory for records.csv")->capture_default_str();

  // report
  auto* rep = app.add_subcommand("report", "Build curves, tables and figures from records");
  std::string records_path, report_out = "report_out";
  rep->add_option("--records", records_path, "records.csv")->required()->check(CLI::ExistingFile);
  rep->add_option("--out-dir", report_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) return cmd_generate(size, agents, ratio, separation, seed, out);
    if (*solve) return cmd_solve(instance_path, algo, solve_flags, solve_out);
    if (*validate) return cmd_validate(validate_instance, validate_solution_path, validate_per_timestep);
    if (*bench) return cmd_bench(spec, algos, bench_flags, parallelism, bench_out);
    if (*rep) return cmd_report(records_path, report_out);
  } catch (const InvalidParameters& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

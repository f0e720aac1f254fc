#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marrt/planners.hpp"

namespace marrt {

struct SuiteSpec {
  std::vector<int> grid_sizes;
  std::vector<int> agent_counts;
  int instances_per_cell = 20;
  double obstacle_ratio = 0.1;
  double separation = 0.8;
  std::uint64_t base_seed = 1;

  void validate() const;  // throws InvalidParameters
  std::string suite_id() const;
};

struct SuiteInstance {
  int grid_size = 0;
  int agents = 0;
  int index = 0;
  std::uint64_t seed = 0;
  ProblemInstance instance;
};

std::uint64_t suite_instance_seed(std::uint64_t base_seed, int grid_size, int agents, int index);

// Cells in (size, agents) order, instances by index within each cell.
// GenerationFailed is rethrown with the cell coordinates in its message.
std::vector<SuiteInstance> build_suite(const SuiteSpec& spec);

struct RunRecord {
  std::string suite_id;
  int grid_size = 0;
  int agents = 0;
  int instance_index = 0;
  std::uint64_t instance_seed = 0;
  std::string algorithm;
  std::string status;
  std::uint64_t iterations = 0;
  std::optional<double> first_solution_time;
  std::optional<double> first_cost;
  std::optional<double> best_cost;
  std::string config_digest;
};

struct BenchOptions {
  std::vector<std::string> algorithms{"ja", "marrtstar", "ismarrtstar"};
  PlannerConfig config;  // budget and tuning; rng_seed is replaced per run
  int parallelism = 1;
  std::string suite_id;
  // When set, records are appended here as runs complete.
  std::optional<std::filesystem::path> records_path;
  // Called (serialized) after every run with its validated result.
  std::function<void(const SuiteInstance&, const RunRecord&, const AnytimeResult&)> observer;
};

std::uint64_t run_seed(std::uint64_t instance_seed, std::string_view algorithm);

/// One record per (instance, algorithm), returned in suite order. Every
/// emitted solution is re-checked with validate_solution; a rejected solution
/// throws SoundnessFailure. Unknown names throw UnknownAlgorithm.
std::vector<RunRecord> run_benchmark(const std::vector<SuiteInstance>& suite, const BenchOptions& options);

std::string records_csv_header();
std::string to_csv_line(const RunRecord& record);
std::vector<RunRecord> parse_records_csv(std::string_view text);

struct CurvePoint {
  std::size_t index = 0;  // 1-based rank
  double runtime = 0.0;   // seconds
};

std::vector<CurvePoint> performance_curve(std::span<const RunRecord> records, std::string_view algorithm);

// (cost / optimal - 1) * 100, evaluated as (cost - optimal) * 100 / optimal. Costs within 1e-9 below the optimum clamp to 0;
// further below throws CostBelowOptimal. With a zero optimum, a zero cost is
// 0 and any other cost is undefined (nullopt, reported as flagged).
std::optional<double> suboptimality(double cost, double optimal);

struct SuboptimalityRow {
  int grid_size = 0;
  int agents = 0;
  int instance_index = 0;
  std::uint64_t instance_seed = 0;
  std::string algorithm;
  double optimal_cost = 0.0;
  double first_cost = 0.0;
  double best_cost = 0.0;
  std::optional<double> first;
  std::optional<double> best;
};

struct SuccessCell {
  int grid_size = 0;
  int agents = 0;
  std::string algorithm;
  std::size_t solved = 0;
  std::size_t total = 0;
};

struct ReportSummary {
  std::vector<std::string> algorithms;
  std::vector<SuccessCell> success;
  std::vector<SuboptimalityRow> suboptimality;
};

double median(std::vector<double> values);

// Builds the tables without touching the filesystem.
ReportSummary summarize(std::span<const RunRecord> records);

/// Writes <algorithm>_curve.csv, success_rates.csv, suboptimality.csv,
/// suboptimality_summary.csv, report_meta.txt and, when there are records,
/// performance_curve.svg and suboptimality.svg. Throws IoError.
ReportSummary report(std::span<const RunRecord> records, const std::filesystem::path& out_dir);

}  // namespace marrt

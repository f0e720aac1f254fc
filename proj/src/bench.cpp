#include "marrt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "marrt/instance_io.hpp"

namespace marrt {

namespace {

std::string format_real(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

std::vector<std::string> split(std::string_view line, char separator) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto end = line.find(separator, begin);
    out.emplace_back(line.substr(begin, end == std::string_view::npos ? end : end - begin));
    if (end == std::string_view::npos) return out;
    begin = end + 1;
  }
}

std::optional<double> parse_optional(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return std::stod(field);
}

int algorithm_rank(const std::string& name) {
  if (auto a = parse_algorithm(name)) return static_cast<int>(*a);
  return 100;
}

}  // namespace

void SuiteSpec::validate() const {
  if (grid_sizes.empty() || agent_counts.empty())
    throw InvalidParameters("suite needs at least one grid size and one agent count");
  if (instances_per_cell <= 0) throw InvalidParameters("instances per cell must be positive");
  for (int s : grid_sizes)
    if (s < 2) throw InvalidParameters("grid sizes must be at least 2");
  for (int a : agent_counts)
    if (a < 1) throw InvalidParameters("agent counts must be positive");
}

std::string SuiteSpec::suite_id() const {
  std::ostringstream out;
  out.precision(17);
  out << "sizes=";
  for (int s : grid_sizes) out << s << ';';
  out << "agents=";
  for (int a : agent_counts) out << a << ';';
  out << "per_cell=" << instances_per_cell << " ratio=" << obstacle_ratio << " sep=" << separation
      << " seed=" << base_seed;
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a(out.str())));
  return buffer;
}

std::uint64_t suite_instance_seed(std::uint64_t base_seed, int grid_size, int agents, int index) {
  std::uint64_t h = splitmix64(base_seed);
  h = hash_combine(h, static_cast<std::uint64_t>(grid_size));
  h = hash_combine(h, static_cast<std::uint64_t>(agents));
  return hash_combine(h, static_cast<std::uint64_t>(index));
}

std::vector<SuiteInstance> build_suite(const SuiteSpec& spec) {
  spec.validate();
  std::vector<SuiteInstance> suite;
  for (int size : spec.grid_sizes) {
    for (int agents : spec.agent_counts) {
      for (int index = 0; index < spec.instances_per_cell; ++index) {
        SuiteInstance item{size, agents, index, suite_instance_seed(spec.base_seed, size, agents, index), {}};
        try {
          item.instance = generate_grid_instance(size, agents, spec.obstacle_ratio, spec.separation, item.seed);
        } catch (const GenerationFailed& e) {
          throw GenerationFailed("cell (size " + std::to_string(size) + ", agents " +
                                     std::to_string(agents) + ", index " + std::to_string(index) +
                                     "): " + e.what(),
                                 e.retry_budget());
        }
        suite.push_back(std::move(item));
      }
    }
  }
  return suite;
}

std::uint64_t run_seed(std::uint64_t instance_seed, std::string_view algorithm) {
  return hash_combine(instance_seed, fnv1a(algorithm));
}

std::string records_csv_header() {
  return "suite_id,grid_size,agents,instance_index,instance_seed,algorithm,status,iterations,"
         "first_solution_time_s,first_cost,best_cost,config_digest";
}

std::string to_csv_line(const RunRecord& r) {
  std::ostringstream out;
  out << r.suite_id << ',' << r.grid_size << ',' << r.agents << ',' << r.instance_index << ','
      << r.instance_seed << ',' << r.algorithm << ',' << r.status << ',' << r.iterations << ','
      << format_optional(r.first_solution_time) << ',' << format_optional(r.first_cost) << ','
      << format_optional(r.best_cost) << ',' << r.config_digest;
  return out.str();
}

std::vector<RunRecord> parse_records_csv(std::string_view text) {
  std::vector<RunRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_number == 1) {
      if (line != records_csv_header()) throw ParseError("unexpected records header", 1, 1);
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 12) throw ParseError("expected 12 columns", line_number, 1);
    try {
      RunRecord r;
      r.suite_id = f[0];
      r.grid_size = std::stoi(f[1]);
      r.agents = std::stoi(f[2]);
      r.instance_index = std::stoi(f[3]);
      r.instance_seed = std::stoull(f[4]);
      r.algorithm = f[5];
      r.status = f[6];
      r.iterations = std::stoull(f[7]);
      r.first_solution_time = parse_optional(f[8]);
      r.first_cost = parse_optional(f[9]);
      r.best_cost = parse_optional(f[10]);
      r.config_digest = f[11];
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("malformed number in records", line_number, 1);
    }
  }
  return out;
}

std::vector<RunRecord> run_benchmark(const std::vector<SuiteInstance>& suite, const BenchOptions& options) {
  std::vector<Algorithm> algorithms;
  for (const auto& name : options.algorithms) {
    auto a = parse_algorithm(name);
    if (!a) throw UnknownAlgorithm("unknown algorithm '" + name + "'");
    algorithms.push_back(*a);
  }
  if (options.parallelism < 1) throw InvalidParameters("parallelism must be positive");
  options.config.validate();
  if (options.parallelism > 1 && options.config.budget.kind == Budget::Kind::seconds)
    std::cerr << "warning: timing runs at parallelism " << options.parallelism
              << " share the CPU; use parallelism 1 for publishable runtimes\n";

  // Distance tables are built here, outside the timed planner calls.
  std::vector<PlanningProblem> problems;
  problems.reserve(suite.size());
  for (const auto& item : suite) problems.emplace_back(item.instance);

  std::ofstream sink;
  if (options.records_path) {
    const bool fresh = !std::filesystem::exists(*options.records_path) ||
                       std::filesystem::file_size(*options.records_path) == 0;
    sink.open(*options.records_path, std::ios::app);
    if (!sink) throw IoError("cannot open " + options.records_path->string());
    if (fresh) sink << records_csv_header() << '\n' << std::flush;
  }

  const std::size_t jobs = suite.size() * algorithms.size();
  std::vector<RunRecord> records(jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex collector;

  auto run_one = [&](std::size_t job) {
    const std::size_t item_index = job / algorithms.size();
    const Algorithm algorithm = algorithms[job % algorithms.size()];
    const SuiteInstance& item = suite[item_index];
    const std::string name(to_string(algorithm));

    PlannerConfig config = options.config;
    config.rng_seed = run_seed(item.seed, name);
    const AnytimeResult result = plan(problems[item_index], algorithm, config);

    double previous = kInfinity;
    for (const auto& timed : result.solutions) {
      const Verdict verdict = validate_solution(item.instance, timed.solution, config.separation_mode);
      if (!verdict.valid())
        throw SoundnessFailure(name + " emitted an invalid solution on instance seed " +
                               std::to_string(item.seed) + ": " + verdict.violations.front().message);
      if (!(timed.solution.total_cost < previous))
        throw SoundnessFailure(name + " emitted a non-improving solution on instance seed " +
                               std::to_string(item.seed));
      previous = timed.solution.total_cost;
    }

    RunRecord r;
    r.suite_id = options.suite_id;
    r.grid_size = item.grid_size;
    r.agents = item.agents;
    r.instance_index = item.index;
    r.instance_seed = item.seed;
    r.algorithm = name;
    r.status = std::string(to_string(result.status));
    r.iterations = result.iterations;
    if (!result.solutions.empty()) {
      r.first_solution_time = result.solutions.front().elapsed;
      r.first_cost = result.solutions.front().solution.total_cost;
      r.best_cost = result.solutions.back().solution.total_cost;
    }
    r.config_digest = config_digest(options.config);

    std::lock_guard lock(collector);
    if (sink.is_open()) sink << to_csv_line(r) << '\n' << std::flush;
    if (options.observer) options.observer(item, r, result);
    records[job] = std::move(r);
  };

  auto worker = [&] {
    while (!abort) {
      const std::size_t job = next++;
      if (job >= jobs) return;
      try {
        run_one(job);
      } catch (...) {
        std::lock_guard lock(collector);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
    }
  };

  if (options.parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < options.parallelism; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<CurvePoint> performance_curve(std::span<const RunRecord> records, std::string_view algorithm) {
  std::vector<double> runtimes;
  for (const auto& r : records)
    if (r.algorithm == algorithm && r.first_solution_time) runtimes.push_back(*r.first_solution_time);
  std::sort(runtimes.begin(), runtimes.end());
  std::vector<CurvePoint> curve;
  for (std::size_t i = 0; i < runtimes.size(); ++i) curve.push_back({i + 1, runtimes[i]});
  return curve;
}

std::optional<double> suboptimality(double cost, double optimal) {
  if (cost < optimal - kCostTolerance)
    throw CostBelowOptimal("cost " + format_real(cost) + " is below the optimum " + format_real(optimal));
  if (optimal <= 0.0) {
    if (cost <= kCostTolerance) return 0.0;
    return std::nullopt;
  }
  if (cost <= optimal) return 0.0;
  return (cost - optimal) * 100.0 / optimal;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

ReportSummary summarize(std::span<const RunRecord> records) {
  ReportSummary summary;
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.algorithm);
  summary.algorithms.assign(names.begin(), names.end());
  std::stable_sort(summary.algorithms.begin(), summary.algorithms.end(),
                   [](const std::string& a, const std::string& b) {
                     return algorithm_rank(a) < algorithm_rank(b);
                   });

  std::map<std::tuple<int, int, int>, SuccessCell> cells;
  for (const auto& r : records) {
    const auto key = std::tuple(r.grid_size, r.agents, algorithm_rank(r.algorithm));
    auto& cell = cells[key];
    cell.grid_size = r.grid_size;
    cell.agents = r.agents;
    cell.algorithm = r.algorithm;
    ++cell.total;
    if (r.first_solution_time) ++cell.solved;
  }
  for (auto& [key, cell] : cells) summary.success.push_back(cell);

  // Reference optimum: JA runs that proved optimality.
  using InstanceKey = std::tuple<int, int, int, std::uint64_t>;
  std::map<InstanceKey, double> optimum;
  for (const auto& r : records)
    if (r.algorithm == "ja" && r.status == "optimal_proven" && r.best_cost)
      optimum[{r.grid_size, r.agents, r.instance_index, r.instance_seed}] = *r.best_cost;
  for (const auto& r : records) {
    if (r.algorithm == "ja" || !r.first_cost || !r.best_cost) continue;
    auto it = optimum.find({r.grid_size, r.agents, r.instance_index, r.instance_seed});
    if (it == optimum.end()) continue;
    SuboptimalityRow row;
    row.grid_size = r.grid_size;
    row.agents = r.agents;
    row.instance_index = r.instance_index;
    row.instance_seed = r.instance_seed;
    row.algorithm = r.algorithm;
    row.optimal_cost = it->second;
    row.first_cost = *r.first_cost;
    row.best_cost = *r.best_cost;
    row.first = suboptimality(row.first_cost, row.optimal_cost);
    row.best = suboptimality(row.best_cost, row.optimal_cost);
    summary.suboptimality.push_back(std::move(row));
  }
  return summary;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string svg_header(int width, int height) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

std::string performance_svg(std::span<const RunRecord> records, const std::vector<std::string>& algorithms) {
  constexpr int width = 640, height = 400, left = 60, right = 150, top = 20, bottom = 50;
  std::size_t max_x = 1;
  double max_y = 0.0;
  std::vector<std::vector<CurvePoint>> curves;
  for (const auto& a : algorithms) {
    curves.push_back(performance_curve(records, a));
    if (!curves.back().empty()) {
      max_x = std::max(max_x, curves.back().back().index);
      max_y = std::max(max_y, curves.back().back().runtime);
    }
  }
  if (max_y <= 0.0) max_y = 1.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto sx = [&](double x) { return left + x / static_cast<double>(max_x) * plot_w; };
  auto sy = [&](double y) { return top + plot_h - y / max_y * plot_h; };

  std::ostringstream out;
  out << svg_header(width, height);
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">instance index (sorted by runtime)</text>\n";
  out << "<text x=\"15\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 15 " << top + plot_h / 2
      << ")\" text-anchor=\"middle\">first-solution runtime [s]</text>\n";
  out << "<text x=\"" << left - 5 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << format_real(max_y)
      << "</text>\n";
  out << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 15 << "\" text-anchor=\"end\">" << max_x
      << "</text>\n";
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    const char* colour = kPalette[a % 5];
    if (!curves[a].empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& p : curves[a]) out << sx(static_cast<double>(p.index)) << ',' << sy(p.runtime) << ' ';
      out << "\"/>\n";
    }
    out << "<text x=\"" << left + plot_w + 10 << "\" y=\"" << top + 15 + 18 * a << "\" fill=\"" << colour
        << "\">" << algorithms[a] << " (" << curves[a].size() << ")</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

std::string suboptimality_svg(const ReportSummary& summary) {
  constexpr int width = 640, height = 400, left = 60, top = 20, bottom = 60;
  std::vector<std::pair<std::string, std::vector<double>>> groups;
  for (const auto& a : summary.algorithms) {
    if (a == "ja") continue;
    std::vector<double> first, best;
    for (const auto& row : summary.suboptimality) {
      if (row.algorithm != a) continue;
      if (row.first) first.push_back(*row.first);
      if (row.best) best.push_back(*row.best);
    }
    groups.emplace_back(a + " first", std::move(first));
    groups.emplace_back(a + " best", std::move(best));
  }
  double max_y = 1.0;
  for (const auto& [label, values] : groups)
    for (double v : values) max_y = std::max(max_y, v);
  const double plot_w = width - left - 20;
  const double plot_h = height - top - bottom;
  auto sy = [&](double y) { return top + plot_h - y / max_y * plot_h; };

  std::ostringstream out;
  out << svg_header(width, height);
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left - 5 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << format_real(max_y)
      << "</text>\n";
  out << "<text x=\"" << left - 5 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\">0</text>\n";
  out << "<text x=\"15\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 15 " << top + plot_h / 2
      << ")\" text-anchor=\"middle\">suboptimality [%]</text>\n";
  const double slot = groups.empty() ? plot_w : plot_w / static_cast<double>(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& [label, values] = groups[g];
    const double cx = left + slot * (static_cast<double>(g) + 0.5);
    const char* colour = kPalette[(g / 2) % 5];
    if (!values.empty()) {
      const double q1 = quantile(values, 0.25), q2 = quantile(values, 0.5), q3 = quantile(values, 0.75);
      const double lo = *std::min_element(values.begin(), values.end());
      const double hi = *std::max_element(values.begin(), values.end());
      out << "<line x1=\"" << cx << "\" y1=\"" << sy(lo) << "\" x2=\"" << cx << "\" y2=\"" << sy(hi)
          << "\" stroke=\"" << colour << "\"/>\n";
      out << "<rect x=\"" << cx - slot / 4 << "\" y=\"" << sy(q3) << "\" width=\"" << slot / 2 << "\" height=\""
          << std::max(1.0, sy(q1) - sy(q3)) << "\" fill=\"" << colour << "\" fill-opacity=\""
          << (g % 2 == 0 ? 0.3 : 0.7) << "\" stroke=\"" << colour << "\"/>\n";
      out << "<line x1=\"" << cx - slot / 4 << "\" y1=\"" << sy(q2) << "\" x2=\"" << cx + slot / 4 << "\" y2=\""
          << sy(q2) << "\" stroke=\"black\"/>\n";
    }
    out << "<text x=\"" << cx << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << label
        << "</text>\n";
    out << "<text x=\"" << cx << "\" y=\"" << top + plot_h + 34 << "\" text-anchor=\"middle\">n=" << values.size()
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string optional_percent(const std::optional<double>& v) { return v ? format_real(*v) : "flagged"; }

}  // namespace

ReportSummary report(std::span<const RunRecord> records, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  ReportSummary summary = summarize(records);

  for (const auto& a : summary.algorithms) {
    std::ostringstream curve;
    curve << "index,runtime_s\n";
    for (const auto& p : performance_curve(records, a)) curve << p.index << ',' << format_real(p.runtime) << '\n';
    write_text_file_atomic(out_dir / (a + "_curve.csv"), curve.str());
  }

  std::ostringstream success;
  success << "grid_size,agents,algorithm,solved,total,rate\n";
  for (const auto& c : summary.success)
    success << c.grid_size << ',' << c.agents << ',' << c.algorithm << ',' << c.solved << ',' << c.total << ','
            << format_real(static_cast<double>(c.solved) / static_cast<double>(c.total)) << '\n';
  write_text_file_atomic(out_dir / "success_rates.csv", success.str());

  std::ostringstream rows;
  rows << "grid_size,agents,instance_index,instance_seed,algorithm,optimal_cost,first_cost,best_cost,"
          "first_suboptimality,best_suboptimality\n";
  for (const auto& r : summary.suboptimality)
    rows << r.grid_size << ',' << r.agents << ',' << r.instance_index << ',' << r.instance_seed << ','
         << r.algorithm << ',' << format_real(r.optimal_cost) << ',' << format_real(r.first_cost) << ','
         << format_real(r.best_cost) << ',' << optional_percent(r.first) << ',' << optional_percent(r.best) << '\n';
  write_text_file_atomic(out_dir / "suboptimality.csv", rows.str());

  std::ostringstream medians;
  medians << "algorithm,instances,first_median,best_median\n";
  for (const auto& a : summary.algorithms) {
    std::vector<double> first, best;
    for (const auto& r : summary.suboptimality) {
      if (r.algorithm != a) continue;
      if (r.first) first.push_back(*r.first);
      if (r.best) best.push_back(*r.best);
    }
    if (first.empty() && best.empty()) continue;
    medians << a << ',' << first.size() << ',' << format_real(median(first)) << ','
            << format_real(median(best)) << '\n';
  }
  write_text_file_atomic(out_dir / "suboptimality_summary.csv", medians.str());

  std::ostringstream meta;
  meta << "records: " << records.size() << '\n'
       << "timing: first_solution_time_s is measured from planner invocation; instance loading and "
          "the shared per-agent distance tables are excluded\n"
       << "suboptimality population: instances where JA proved optimality within its budget\n";
  write_text_file_atomic(out_dir / "report_meta.txt", meta.str());

  if (!records.empty()) {
    write_text_file_atomic(out_dir / "performance_curve.svg", performance_svg(records, summary.algorithms));
    write_text_file_atomic(out_dir / "suboptimality.svg", suboptimality_svg(summary));
  }
  return summary;
}

}  // namespace marrt

#include <algorithm>
#include <chrono>
#include <queue>

#include "marrt/detail/joint_kernel.hpp"
#include "marrt/planners.hpp"

namespace marrt {

namespace {

using Clock = std::chrono::steady_clock;

// Flat storage of generated joint states with an open-addressing index.
class NodePool {
 public:
  explicit NodePool(std::size_t agents) : agents_(agents), slots_(1024, kEmpty) {}

  std::size_t size() const { return g_.size(); }
  std::span<const std::uint32_t> state(std::uint32_t node) const {
    return {states_.data() + static_cast<std::size_t>(node) * agents_, agents_};
  }

  // Returns the node holding `s`, creating it (with g = infinity) if needed.
  std::pair<std::uint32_t, bool> intern(std::span<const std::uint32_t> s) {
    if ((g_.size() + 1) * 2 > slots_.size()) grow();
    std::size_t slot = hash(s) & (slots_.size() - 1);
    while (slots_[slot] != kEmpty) {
      const auto node = slots_[slot];
      const auto existing = state(node);
      if (std::equal(existing.begin(), existing.end(), s.begin())) return {node, false};
      slot = (slot + 1) & (slots_.size() - 1);
    }
    const auto node = static_cast<std::uint32_t>(g_.size());
    slots_[slot] = node;
    states_.insert(states_.end(), s.begin(), s.end());
    g_.push_back(kInfinity);
    h_.push_back(0.0);
    parent_.push_back(kEmpty);
    closed_.push_back(0);
    return {node, true};
  }

  std::vector<double> g_;
  std::vector<double> h_;
  std::vector<std::uint32_t> parent_;
  std::vector<char> closed_;
  static constexpr std::uint32_t kEmpty = UINT32_MAX;

 private:
  std::size_t hash(std::span<const std::uint32_t> s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : s) h = splitmix64(h ^ x);
    return static_cast<std::size_t>(h);
  }

  void grow() {
    std::vector<std::uint32_t> bigger(slots_.size() * 2, kEmpty);
    for (std::uint32_t node = 0; node < g_.size(); ++node) {
      std::size_t slot = hash(state(node)) & (bigger.size() - 1);
      while (bigger[slot] != kEmpty) slot = (slot + 1) & (bigger.size() - 1);
      bigger[slot] = node;
    }
    slots_.swap(bigger);
  }

  std::size_t agents_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint32_t> states_;
};

struct OpenEntry {
  double f;
  double h;
  std::uint32_t node;
};

}  // namespace

AnytimeResult plan_ja(const PlanningProblem& problem, const PlannerConfig& config) {
  config.validate();
  const auto started = Clock::now();
  const ProblemInstance& instance = problem.instance();
  const detail::JointKernel kernel(instance, config.separation_mode);
  const std::size_t n = kernel.agents();

  AnytimeResult result;
  if (!kernel.resting_separated(kernel.starts()) || !kernel.resting_separated(kernel.destinations())) {
    result.status = PlanStatus::infeasible_proven;
    return result;
  }

  auto heuristic = [&](std::span<const std::uint32_t> s) {
    double h = 0.0;
    for (std::size_t k = 0; k < n; ++k) h += problem.distances(k).at_index(s[k]);
    return h;
  };

  NodePool pool(n);
  auto less_preferred = [&pool](const OpenEntry& a, const OpenEntry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    const auto sa = pool.state(a.node);
    const auto sb = pool.state(b.node);
    return std::lexicographical_compare(sb.begin(), sb.end(), sa.begin(), sa.end());
  };
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, decltype(less_preferred)> open(less_preferred);

  const auto [root, created] = pool.intern(kernel.starts());
  pool.g_[root] = 0.0;
  pool.h_[root] = heuristic(kernel.starts());
  open.push({pool.h_[root], pool.h_[root], root});

  const bool timed = config.budget.kind == Budget::Kind::seconds;
  std::uint64_t expansions = 0;
  bool out_of_budget = false;
  std::vector<std::uint32_t> current(n);

  while (!open.empty()) {
    if (timed && expansions % 64 == 0) {
      const std::chrono::duration<double> elapsed = Clock::now() - started;
      if (elapsed.count() >= config.budget.seconds) {
        out_of_budget = true;
        break;
      }
    }
    if (!timed && expansions >= config.budget.iterations) {
      out_of_budget = true;
      break;
    }

    const OpenEntry top = open.top();
    open.pop();
    if (pool.closed_[top.node] || top.f != pool.g_[top.node] + pool.h_[top.node]) continue;

    const auto s = pool.state(top.node);
    if (std::equal(s.begin(), s.end(), kernel.destinations().begin())) {
      std::vector<std::uint32_t> chain;
      for (auto v = top.node; v != NodePool::kEmpty; v = pool.parent_[v]) chain.push_back(v);
      std::reverse(chain.begin(), chain.end());
      JointPath path;
      for (auto v : chain) path.states.push_back(kernel.to_ids(pool.state(v)));
      path.cost = pool.g_[top.node];
      const std::chrono::duration<double> elapsed = Clock::now() - started;
      result.solutions.push_back({elapsed.count(), expansions, solution_from_path(path, kernel.timestep())});
      result.status = PlanStatus::optimal_proven;
      result.iterations = expansions;
      return result;
    }

    pool.closed_[top.node] = 1;
    ++expansions;
    current.assign(s.begin(), s.end());
    const double g_here = pool.g_[top.node];
    bool full = false;
    kernel.for_each_successor(current, [&](std::span<const std::uint32_t>,
                                           std::span<const std::uint32_t> next, double cost) {
      if (full) return;
      if (pool.size() >= config.ja_node_limit) {
        full = true;
        return;
      }
      const auto [node, fresh] = pool.intern(next);
      if (pool.closed_[node]) return;
      const double candidate = g_here + cost;
      if (candidate < pool.g_[node]) {
        if (fresh) pool.h_[node] = heuristic(next);
        pool.g_[node] = candidate;
        pool.parent_[node] = top.node;
        open.push({candidate + pool.h_[node], pool.h_[node], node});
      }
    });
    if (full) {
      out_of_budget = true;
      break;
    }
  }

  result.iterations = expansions;
  result.status = out_of_budget ? PlanStatus::budget_exhausted : PlanStatus::infeasible_proven;
  return result;
}

}  // namespace marrt

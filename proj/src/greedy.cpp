#include "marrt/detail/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace marrt::detail {

namespace {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double GreedyWalker::summed_distance(std::span<const std::uint32_t> state,
                                     std::span<const std::uint32_t> to) const {
  double total = 0.0;
  for (std::size_t k = 0; k < state.size(); ++k)
    total += distance(kernel_->position(k, state[k]), kernel_->position(k, to[k]));
  return total;
}

void GreedyWalker::walk(std::span<const std::uint32_t> from, std::span<const std::uint32_t> to,
                        std::size_t max_steps, IndexWalk& out) const {
  const std::size_t n = from.size();
  out.states.assign(from.begin(), from.end());
  out.steps = 0;
  out.cost = 0.0;
  out.failure.reset();

  std::vector<std::uint32_t> cur(from.begin(), from.end());
  std::vector<std::uint32_t> next(n);
  double before = summed_distance(cur, to);
  while (!std::equal(cur.begin(), cur.end(), to.begin())) {
    if (out.steps >= max_steps) {
      out.failure = ConnectFailure::step_limit;
      return;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto prims = kernel_->graph(k).primitives_at(cur[k]);
      const auto targets = kernel_->graph(k).targets_at(cur[k]);
      if (cur[k] == to[k]) {
        next[k] = cur[k];
        for (std::size_t c = 0; c < prims.size(); ++c)
          if (prims[c].kind == PrimitiveKind::wait) next[k] = targets[c];
        continue;
      }
      const Point& goal = kernel_->position(k, to[k]);
      double best = kInfinity;
      next[k] = cur[k];
      for (std::size_t c = 0; c < targets.size(); ++c) {
        const double d = distance(kernel_->position(k, targets[c]), goal);
        if (d < best) {
          best = d;
          next[k] = targets[c];
        }
      }
    }

    std::optional<ConnectFailure> problem;
    double after = summed_distance(next, to);
    if (!kernel_->move_separated(cur, next)) {
      problem = ConnectFailure::conflict;
    } else if (!(after < before)) {
      problem = ConnectFailure::local_minimum;
    }
    if (problem && !(alternatives_ > 0 && try_alternatives(cur, to, before, next))) {
      out.failure = problem;
      return;
    }
    after = summed_distance(next, to);

    out.cost += kernel_->step_cost(cur, next);
    out.states.insert(out.states.end(), next.begin(), next.end());
    ++out.steps;
    cur = next;
    before = after;
  }
}

bool GreedyWalker::try_alternatives(std::span<const std::uint32_t> cur,
                                    std::span<const std::uint32_t> to, double before,
                                    std::vector<std::uint32_t>& next) const {
  // Single-agent deviations from the greedy choice, best summed distance first.
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  std::vector<std::uint32_t> trial = next;
  for (std::size_t k = 0; k < cur.size(); ++k) {
    const auto targets = kernel_->graph(k).targets_at(cur[k]);
    for (std::size_t c = 0; c < targets.size(); ++c) {
      if (targets[c] == next[k]) continue;
      trial[k] = targets[c];
      candidates.emplace_back(summed_distance(trial, to), k, c);
    }
    trial[k] = next[k];
  }
  std::sort(candidates.begin(), candidates.end());
  const std::size_t limit = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(alternatives_));
  for (std::size_t i = 0; i < limit; ++i) {
    const auto [score, k, c] = candidates[i];
    if (!(score < before)) break;
    trial[k] = kernel_->graph(k).targets_at(cur[k])[c];
    if (kernel_->move_separated(cur, trial)) {
      next = trial;
      return true;
    }
    trial[k] = next[k];
  }
  return false;
}

}  // namespace marrt::detail

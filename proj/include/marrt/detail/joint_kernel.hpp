#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "marrt/joint_space.hpp"

namespace marrt::detail {

using IndexState = std::vector<std::uint32_t>;

// Index-based view of an instance used by the search loops: joint states are
// tuples of dense per-agent waypoint indices instead of ids.
class JointKernel {
 public:
  JointKernel(const ProblemInstance& instance, SeparationMode mode);

  std::size_t agents() const { return graphs_.size(); }
  const MotionGraph& graph(std::size_t agent) const { return *graphs_[agent]; }
  double timestep() const { return timestep_; }
  double separation() const { return separation_; }
  SeparationMode mode() const { return mode_; }
  std::uint32_t destination(std::size_t agent) const { return destinations_[agent]; }
  const IndexState& destinations() const { return destinations_; }
  const IndexState& starts() const { return starts_; }

  const Point& position(std::size_t agent, std::uint32_t index) const {
    return graphs_[agent]->position_at(index);
  }

  IndexState to_indices(const JointState& state) const;
  JointState to_ids(std::span<const std::uint32_t> state) const;

  bool pair_separated(Point a0, Point a1, Point b0, Point b1) const {
    const double d = mode_ == SeparationMode::continuous ? min_move_distance(a0, a1, b0, b1)
                                                         : endpoint_move_distance(a0, a1, b0, b1);
    return d > separation_;
  }

  bool move_separated(std::span<const std::uint32_t> from, std::span<const std::uint32_t> to) const;
  bool resting_separated(std::span<const std::uint32_t> state) const;

  double step_cost(std::span<const std::uint32_t> from, std::span<const std::uint32_t> to) const {
    double cost = 0.0;
    for (std::size_t k = 0; k < from.size(); ++k)
      if (!(from[k] == to[k] && from[k] == destinations_[k])) cost += timestep_;
    return cost;
  }

  /// Calls visit(choice, next, cost) for every separated joint move out of
  /// `from`, where choice[k] is the offset of agent k's primitive within
  /// primitives_at(from[k]). Pairs are checked as soon as both agents are
  /// fixed, so rejected prefixes are never extended. Order is lexicographic in
  /// the per-agent canonical primitive order.
  template <typename Visit>
  void for_each_successor(std::span<const std::uint32_t> from, Visit&& visit) const {
    const std::size_t n = from.size();
    choice_.assign(n, 0);
    next_.assign(n, 0);
    expand(from, 0, visit);
  }

 private:
  template <typename Visit>
  void expand(std::span<const std::uint32_t> from, std::size_t agent, Visit& visit) const {
    const std::size_t n = from.size();
    if (agent == n) {
      visit(std::span<const std::uint32_t>(choice_), std::span<const std::uint32_t>(next_),
            step_cost(from, next_));
      return;
    }
    const auto targets = graphs_[agent]->targets_at(from[agent]);
    const Point& a0 = position(agent, from[agent]);
    for (std::uint32_t c = 0; c < targets.size(); ++c) {
      const Point& a1 = position(agent, targets[c]);
      bool ok = true;
      for (std::size_t j = 0; j < agent && ok; ++j)
        ok = pair_separated(a0, a1, position(j, from[j]), position(j, next_[j]));
      if (!ok) continue;
      choice_[agent] = c;
      next_[agent] = targets[c];
      expand(from, agent + 1, visit);
    }
  }

  std::vector<const MotionGraph*> graphs_;
  IndexState starts_;
  IndexState destinations_;
  double timestep_ = 1.0;
  double separation_ = 0.8;
  SeparationMode mode_ = SeparationMode::continuous;
  mutable IndexState choice_;
  mutable IndexState next_;
};

}  // namespace marrt::detail

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "marrt/detail/joint_kernel.hpp"
#include "marrt/planners.hpp"

namespace marrt::detail {

struct IndexWalk {
  std::vector<std::uint32_t> states;  // flattened, steps + 1 joint states
  std::size_t steps = 0;
  double cost = 0.0;
  std::optional<ConnectFailure> failure;
};

class GreedyWalker {
 public:
  GreedyWalker(const JointKernel& kernel, int alternatives)
      : kernel_(&kernel), alternatives_(alternatives) {}

  // Walks from `from` towards `to`; `out` is overwritten.
  void walk(std::span<const std::uint32_t> from, std::span<const std::uint32_t> to,
            std::size_t max_steps, IndexWalk& out) const;

 private:
  double summed_distance(std::span<const std::uint32_t> state,
                         std::span<const std::uint32_t> to) const;
  bool try_alternatives(std::span<const std::uint32_t> cur, std::span<const std::uint32_t> to,
                        double before, std::vector<std::uint32_t>& next) const;

  const JointKernel* kernel_;
  int alternatives_;
};

}  // namespace marrt::detail

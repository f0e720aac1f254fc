#include "marrt/detail/joint_kernel.hpp"

namespace marrt::detail {

JointKernel::JointKernel(const ProblemInstance& instance, SeparationMode mode)
    : timestep_(instance.timestep()), separation_(instance.separation), mode_(mode) {
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    graphs_.push_back(&instance.graph(i));
    starts_.push_back(static_cast<std::uint32_t>(instance.graph(i).index_of(instance.starts[i])));
    destinations_.push_back(
        static_cast<std::uint32_t>(instance.graph(i).index_of(instance.destinations[i])));
  }
}

IndexState JointKernel::to_indices(const JointState& state) const {
  IndexState out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i)
    out[i] = static_cast<std::uint32_t>(graphs_[i]->index_of(state[i]));
  return out;
}

JointState JointKernel::to_ids(std::span<const std::uint32_t> state) const {
  JointState out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) out[i] = graphs_[i]->id_at(state[i]);
  return out;
}

bool JointKernel::move_separated(std::span<const std::uint32_t> from,
                                 std::span<const std::uint32_t> to) const {
  for (std::size_t j = 0; j < from.size(); ++j) {
    const Point& a0 = position(j, from[j]);
    const Point& a1 = position(j, to[j]);
    for (std::size_t k = j + 1; k < from.size(); ++k)
      if (!pair_separated(a0, a1, position(k, from[k]), position(k, to[k]))) return false;
  }
  return true;
}

bool JointKernel::resting_separated(std::span<const std::uint32_t> state) const {
  return move_separated(state, state);
}

}  // namespace marrt::detail

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "marrt/joint_space.hpp"

namespace marrt {

struct SolutionDocument {
  std::uint64_t instance_seed = 0;
  std::string algorithm;
  Solution solution;
};

std::string save_solution(const SolutionDocument& document);

// Throws ParseError or SchemaViolation.
SolutionDocument load_solution(std::string_view text);

}  // namespace marrt

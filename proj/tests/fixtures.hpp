#pragma once

#include <algorithm>
#include <memory>
#include <utility>
#include <vector>

#include "marrt/motion_graph.hpp"

namespace fixtures {

using Cell = std::pair<int, int>;

inline marrt::ProblemInstance grid_instance(int size, std::vector<Cell> removed, std::vector<Cell> starts,
                                            std::vector<Cell> destinations, double separation = 0.8,
                                            std::uint64_t seed = 0) {
  marrt::GridSpec grid{size, {}};
  for (auto [x, y] : removed) grid.removed.push_back({x, y});
  std::sort(grid.removed.begin(), grid.removed.end(),
            [](const marrt::GridCell& a, const marrt::GridCell& b) {
              return std::pair(a.y, a.x) < std::pair(b.y, b.x);
            });
  auto graph = std::make_shared<const marrt::MotionGraph>(marrt::make_grid_graph(grid));
  marrt::ProblemInstance inst;
  inst.separation = separation;
  inst.seed = seed;
  for (auto [x, y] : starts) inst.starts.push_back(marrt::grid_id(size, x, y));
  for (auto [x, y] : destinations) inst.destinations.push_back(marrt::grid_id(size, x, y));
  inst.graphs.assign(starts.size(), graph);
  inst.grid = std::move(grid);
  return inst;
}

// A 1-wide horizontal corridor of the given length: a size x size grid with
// every row except y = 0 removed.
inline marrt::ProblemInstance corridor_instance(int length, std::vector<Cell> starts,
                                                std::vector<Cell> destinations) {
  std::vector<Cell> removed;
  for (int y = 1; y < length; ++y)
    for (int x = 0; x < length; ++x) removed.emplace_back(x, y);
  return grid_instance(length, removed, std::move(starts), std::move(destinations));
}

}  // namespace fixtures

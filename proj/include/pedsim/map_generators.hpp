#pragma once

#include <cstdint>
#include <vector>

#include "pedsim/grid_map.hpp"

namespace pedsim {

// Each cell blocked independently with probability `density`.
GridMap random_scatter_map(int width, int height, double density, std::uint64_t seed,
                           double cell_size = kDefaultCellSize);

// Axis-aligned rectangular obstacles placed until roughly `coverage` of the
// cells are blocked. Rectangle sides are drawn from [min_side, max_side].
GridMap random_block_map(int width, int height, double coverage, std::uint64_t seed, int min_side = 3,
                         int max_side = 14, double cell_size = kDefaultCellSize);

// Component label per cell under the planner's move rules (-1 for blocked).
std::vector<int> connected_components(const GridMap& map);

}  // namespace pedsim

#include "pedsim/map_generators.hpp"

#include <algorithm>
#include <stdexcept>

#include "pedsim/random.hpp"

namespace pedsim {

GridMap random_scatter_map(int width, int height, double density, std::uint64_t seed, double cell_size) {
  if (density < 0.0 || density > 1.0) throw std::invalid_argument("density must lie in [0, 1]");
  GridMap map(width, height, cell_size);
  Rng rng(seed);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (uniform01(rng) < density) map.set_blocked({x, y});
    }
  }
  return map;
}

GridMap random_block_map(int width, int height, double coverage, std::uint64_t seed, int min_side, int max_side,
                         double cell_size) {
  if (coverage < 0.0 || coverage >= 1.0) throw std::invalid_argument("coverage must lie in [0, 1)");
  if (min_side < 1 || max_side < min_side) throw std::invalid_argument("invalid rectangle side range");
  GridMap map(width, height, cell_size);
  Rng rng(seed);
  const auto target = static_cast<std::size_t>(coverage * static_cast<double>(map.cell_count()));
  std::size_t blocked = 0;
  // Bounded attempts so a tiny map with a large target still terminates.
  for (int attempt = 0; attempt < 100000 && blocked < target; ++attempt) {
    const int rw = std::min(width, min_side + uniform_int(rng, max_side - min_side + 1));
    const int rh = std::min(height, min_side + uniform_int(rng, max_side - min_side + 1));
    const int x0 = uniform_int(rng, width - rw + 1);
    const int y0 = uniform_int(rng, height - rh + 1);
    for (int y = y0; y < y0 + rh; ++y) {
      for (int x = x0; x < x0 + rw; ++x) {
        if (map.is_traversable(x, y)) {
          map.set_blocked({x, y});
          ++blocked;
        }
      }
    }
  }
  return map;
}

std::vector<int> connected_components(const GridMap& map) {
  std::vector<int> label(map.cell_count(), -1);
  std::vector<Cell> stack;
  int next = 0;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (!map.is_traversable(x, y) || label[map.index(x, y)] != -1) continue;
      label[map.index(x, y)] = next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        for (Direction d : kAllDirections) {
          if (!map.can_step(c, d)) continue;
          const Cell n = c + d;
          int& l = label[map.index(n.x, n.y)];
          if (l == -1) {
            l = next;
            stack.push_back(n);
          }
        }
      }
      ++next;
    }
  }
  return label;
}

}  // namespace pedsim

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pedsim/grid_map.hpp"

namespace pedsim {

// Bit i set <=> kAllDirections[i] is a member.
using DirectionSet = std::uint8_t;

constexpr DirectionSet direction_bit(Direction d) { return static_cast<DirectionSet>(1u << direction_index(d)); }
constexpr bool contains(DirectionSet set, Direction d) { return (set & direction_bit(d)) != 0; }

// A cell that is a jump point because of static obstacles alone. The set holds
// every arrival direction for which the cell has a forced neighbor.
struct StaticJumpPoint {
  Cell cell;
  DirectionSet valid_arrival_directions = 0;

  friend bool operator==(const StaticJumpPoint&, const StaticJumpPoint&) = default;
};

// Inclusive cell rectangle.
struct CellBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  bool contains(Cell c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
  friend bool operator==(const CellBox&, const CellBox&) = default;
};

// Static jump points of one map, plus the diagonal-ray lookup used by JPS-S.
//
// The diagonal lookup has one family per diagonal direction. Families for
// (1,1) and (-1,-1) are keyed by x - y, those for (1,-1) and (-1,1) by x + y;
// each line holds the x coordinates, sorted, of cells that are jump points for
// that arrival direction independent of the goal: the cell has a forced
// neighbor itself, or a straight scan along one of the direction's two
// components reaches a static jump point before the first obstacle.
//
// Lookups are only answered inside `coverage()`; outside it the searcher falls
// back to plain scanning.
class StaticJumpPointIndex {
 public:
  StaticJumpPointIndex() = default;

  int map_width() const { return width_; }
  int map_height() const { return height_; }
  const CellBox& coverage() const { return coverage_; }

  // Sorted by (x, y).
  const std::vector<StaticJumpPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // Tagged arrival directions of `c`, 0 when `c` is not a static jump point.
  DirectionSet directions_at(Cell c) const;

  // Steps k >= 1 to the nearest entry on the ray origin + k*d, restricted to
  // the coverage box. `d` must be diagonal.
  std::optional<int> nearest_on_diagonal(Cell origin, Direction d) const;

  // Total entries across the four diagonal families.
  std::size_t diagonal_entry_count() const;
  std::size_t memory_bytes() const;

  friend bool operator==(const StaticJumpPointIndex&, const StaticJumpPointIndex&) = default;

 private:
  friend StaticJumpPointIndex precompute_sjp(const GridMap& map);
  friend StaticJumpPointIndex filter_sjp(const StaticJumpPointIndex& index, Cell start, Cell goal, int margin);
  friend StaticJumpPointIndex corrupt_index_for_testing(StaticJumpPointIndex index);

  static int family(Direction d);
  int line_key(Cell c, int fam) const;

  int width_ = 0;
  int height_ = 0;
  CellBox coverage_;
  std::vector<StaticJumpPoint> points_;
  std::array<std::vector<std::vector<int>>, 4> diagonal_lines_;
};

// All static jump points of `map`; a pure function of the map.
StaticJumpPointIndex precompute_sjp(const GridMap& map);

// Keeps entries inside the bounding box of {start, goal} grown by `margin`
// cells on each side. Throws std::invalid_argument for negative margins.
StaticJumpPointIndex filter_sjp(const StaticJumpPointIndex& index, Cell start, Cell goal, int margin);

// Test hook: drops the diagonal lookup so JPS-S misses goal-independent
// diagonal jump points. Used to check that validation catches a bad index.
StaticJumpPointIndex corrupt_index_for_testing(StaticJumpPointIndex index);

}  // namespace pedsim

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pedsim/grid_map.hpp"

namespace pedsim {

class StaticJumpPointIndex;

inline constexpr double kSqrt2 = 1.41421356237309504880;

struct JumpPoint {
  Cell cell;
  std::optional<Direction> arrival_direction;  // empty for the start node
};

// Jump-point sequence, start first and goal last. `length` is in meters.
struct Path {
  std::vector<Cell> points;
  double length = 0.0;
};

struct SearchStats {
  std::size_t expanded_nodes = 0;
  std::size_t jump_scan_steps = 0;
  double elapsed = 0.0;  // seconds
};

struct SearchResult {
  std::optional<Path> path;  // empty when the goal is unreachable
  SearchStats stats;

  bool found() const { return path.has_value(); }
};

// Octile distance in cells: straight steps cost 1, diagonal steps sqrt(2).
double octile_distance(Cell a, Cell b);

// Reusable per-thread scratch space for repeated searches on maps of one size.
// Searches that are not handed a workspace allocate a temporary one.
class SearchWorkspace {
 public:
  SearchWorkspace() = default;

 private:
  friend class SearchEngine;
  void prepare(std::size_t cell_count);

  std::vector<double> g_;
  std::vector<std::int32_t> parent_;
  std::vector<std::uint32_t> seen_stamp_;
  std::vector<std::uint32_t> closed_stamp_;
  std::uint32_t stamp_ = 0;
};

// True when arriving at `x` by a legal step along `d` leaves `x` with at least
// one forced neighbor. Requires the predecessor x - d to be traversable and the
// step into x to be legal; returns false otherwise.
bool has_forced_neighbor(const GridMap& map, Cell x, Direction d);

// Successor directions of `x` after pruning. With no parent direction, every
// legal step. Throws std::invalid_argument when `x` is not traversable.
std::vector<Direction> prune_neighbors(const GridMap& map, Cell x, std::optional<Direction> parent_dir);

// Nearest jump point on the ray x + k*d (k >= 1), or empty when the ray is
// terminated by an obstacle or the boundary first.
std::optional<JumpPoint> jump(const GridMap& map, Cell x, Direction d, Cell goal);

// Baseline jump point search (A* over jump points, octile heuristic).
// Throws std::invalid_argument when an endpoint is not traversable.
SearchResult jps_search(const GridMap& map, Cell start, Cell goal, SearchWorkspace* workspace = nullptr);

// Jump point search that resolves diagonal jumps against a precomputed static
// jump point index. `index` must come from precompute_sjp(map), optionally
// passed through filter_sjp.
SearchResult jps_s_search(const GridMap& map, const StaticJumpPointIndex& index, Cell start, Cell goal,
                          SearchWorkspace* workspace = nullptr);

// Diagonal jump resolved through the index; returns exactly what jump() returns.
std::optional<JumpPoint> indexed_diagonal_jump(const GridMap& map, const StaticJumpPointIndex& index, Cell x,
                                               Direction d, Cell goal);

// Exact shortest octile distance in cells by uniform-cost search, or empty
// when unreachable.
std::optional<double> dijkstra_oracle(const GridMap& map, Cell start, Cell goal);

// Collinear 8-direction segments, every step legal, length consistent.
bool validate_path(const GridMap& map, const Path& path);

// Length of a jump-point sequence in meters.
double path_length(const GridMap& map, const std::vector<Cell>& points);

// "length=<L>" then one "x,y" line per point.
std::string serialize_path(const Path& path);
Path parse_path(const std::string& text);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace pedsim

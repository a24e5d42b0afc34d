#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pedsim/vec2.hpp"

namespace pedsim {

inline constexpr double kDefaultCellSize = 0.5;  // meters per cell edge

struct Cell {
  int x = 0;  // column
  int y = 0;  // row, 0 = first map line

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

// One of the eight unit grid moves.
struct Direction {
  int dx = 0;
  int dy = 0;

  constexpr bool is_straight() const { return std::abs(dx) + std::abs(dy) == 1; }
  constexpr bool is_diagonal() const { return std::abs(dx) + std::abs(dy) == 2; }
  constexpr bool is_valid() const {
    return dx >= -1 && dx <= 1 && dy >= -1 && dy <= 1 && (dx != 0 || dy != 0);
  }
  constexpr Direction reversed() const { return {-dx, -dy}; }

  friend constexpr bool operator==(const Direction&, const Direction&) = default;
};

// Fixed enumeration order: straight moves first, then diagonals.
inline constexpr std::array<Direction, 8> kAllDirections = {{
    {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1},
}};

// Position of `d` in kAllDirections.
constexpr int direction_index(Direction d) {
  for (int i = 0; i < 8; ++i) {
    if (kAllDirections[i] == d) return i;
  }
  return -1;
}

constexpr Cell operator+(Cell c, Direction d) { return {c.x + d.dx, c.y + d.dy}; }
constexpr Cell operator-(Cell c, Direction d) { return {c.x - d.dx, c.y - d.dy}; }

// Direction of the move from `from` toward `to` (component-wise sign).
constexpr Direction direction_between(Cell from, Cell to) {
  auto sign = [](int v) { return (v > 0) - (v < 0); };
  return {sign(to.x - from.x), sign(to.y - from.y)};
}

std::string to_string(Cell c);
std::string to_string(Direction d);

// Raised by GridMap::parse; `line()` is 1-based, 0 when not tied to a line.
class MapParseError : public std::runtime_error {
 public:
  MapParseError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

// Occupancy grid with an axis-aligned mapping to world coordinates. Cell (x, y)
// covers [x*s, (x+1)*s) x [y*s, (y+1)*s) for cell size s.
class GridMap {
 public:
  GridMap(int width, int height, double cell_size = kDefaultCellSize);

  // Accepts three layouts: a `W H` header followed by H rows, the movingai
  // `type/height/width/map` header, or bare rows of equal length.
  static GridMap parse(std::string_view text, double cell_size = kDefaultCellSize);
  static GridMap load(const std::string& path, double cell_size = kDefaultCellSize);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  std::size_t cell_count() const { return blocked_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool is_traversable(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_ && blocked_[index(x, y)] == 0;
  }
  bool is_traversable(Cell c) const { return is_traversable(c.x, c.y); }

  // Legal single step from `from` along `d`. Diagonal steps also need both
  // adjacent straight cells free (no corner cutting).
  bool can_step(Cell from, Direction d) const {
    if (!is_traversable(from.x + d.dx, from.y + d.dy)) return false;
    if (d.dx != 0 && d.dy != 0) {
      return is_traversable(from.x + d.dx, from.y) && is_traversable(from.x, from.y + d.dy);
    }
    return true;
  }

  // Traversable neighbors of a traversable cell; throws std::invalid_argument otherwise.
  std::vector<std::pair<Direction, Cell>> step_neighbors(Cell c) const;

  WorldPoint cell_to_world(Cell c) const;
  Cell world_to_cell(WorldPoint p) const;

  void set_blocked(Cell c, bool blocked = true);
  std::size_t blocked_count() const;
  std::vector<Cell> blocked_cells() const;

  // `W H` header plus rows of '.' and '#'; parse(to_ascii()) reproduces the map.
  std::string to_ascii() const;

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.cell_size_ == b.cell_size_ &&
           a.blocked_ == b.blocked_;
  }

 private:
  int width_;
  int height_;
  double cell_size_;
  std::vector<std::uint8_t> blocked_;
};

}  // namespace pedsim

#include "pedsim/static_jump_points.hpp"

#include <algorithm>
#include <stdexcept>

#include "pedsim/pathfinder.hpp"

namespace pedsim {

namespace {

constexpr std::array<Direction, 4> kDiagonals = {{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

}  // namespace

int StaticJumpPointIndex::family(Direction d) {
  for (int i = 0; i < 4; ++i) {
    if (kDiagonals[i] == d) return i;
  }
  throw std::invalid_argument("diagonal lookup needs a diagonal direction, got " + to_string(d));
}

int StaticJumpPointIndex::line_key(Cell c, int fam) const {
  // Families 0/1 run along x - y, 2/3 along x + y.
  return fam < 2 ? c.x - c.y + (height_ - 1) : c.x + c.y;
}

DirectionSet StaticJumpPointIndex::directions_at(Cell c) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), c,
                                   [](const StaticJumpPoint& p, Cell key) { return p.cell < key; });
  return it != points_.end() && it->cell == c ? it->valid_arrival_directions : DirectionSet{0};
}

std::optional<int> StaticJumpPointIndex::nearest_on_diagonal(Cell origin, Direction d) const {
  const int fam = family(d);
  const auto& lines = diagonal_lines_[static_cast<std::size_t>(fam)];
  const int key = line_key(origin, fam);
  if (key < 0 || key >= static_cast<int>(lines.size())) return std::nullopt;
  const std::vector<int>& xs = lines[static_cast<std::size_t>(key)];
  if (d.dx > 0) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), origin.x);
    if (it == xs.end()) return std::nullopt;
    return *it - origin.x;
  }
  auto it = std::lower_bound(xs.begin(), xs.end(), origin.x);
  if (it == xs.begin()) return std::nullopt;
  --it;
  return origin.x - *it;
}

std::size_t StaticJumpPointIndex::diagonal_entry_count() const {
  std::size_t n = 0;
  for (const auto& fam : diagonal_lines_) {
    for (const auto& line : fam) n += line.size();
  }
  return n;
}

std::size_t StaticJumpPointIndex::memory_bytes() const {
  std::size_t bytes = sizeof(*this) + points_.capacity() * sizeof(StaticJumpPoint);
  for (const auto& fam : diagonal_lines_) {
    bytes += fam.capacity() * sizeof(std::vector<int>);
    for (const auto& line : fam) bytes += line.capacity() * sizeof(int);
  }
  return bytes;
}

StaticJumpPointIndex precompute_sjp(const GridMap& map) {
  const int w = map.width();
  const int h = map.height();
  StaticJumpPointIndex index;
  index.width_ = w;
  index.height_ = h;
  index.coverage_ = {0, 0, w - 1, h - 1};

  // Forced-neighbor directions per cell.
  std::vector<DirectionSet> forced(map.cell_count(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      DirectionSet set = 0;
      for (Direction d : kAllDirections) {
        if (has_forced_neighbor(map, {x, y}, d)) set |= direction_bit(d);
      }
      forced[map.index(x, y)] = set;
      if (set != 0) index.points_.push_back({{x, y}, set});
    }
  }
  std::sort(index.points_.begin(), index.points_.end(),
            [](const StaticJumpPoint& a, const StaticJumpPoint& b) { return a.cell < b.cell; });

  // reach[i][c]: a straight scan from c along kAllDirections[i] meets a cell
  // with a forced neighbor for that direction before leaving free space.
  std::array<std::vector<std::uint8_t>, 4> reach;
  for (int i = 0; i < 4; ++i) {
    const Direction d = kAllDirections[static_cast<std::size_t>(i)];
    auto& r = reach[static_cast<std::size_t>(i)];
    r.assign(map.cell_count(), 0);
    // Visit cells so that c + d is always finished before c.
    const int x_begin = d.dx > 0 ? w - 1 : 0;
    const int x_end = d.dx > 0 ? -1 : w;
    const int x_step = d.dx > 0 ? -1 : 1;
    const int y_begin = d.dy > 0 ? h - 1 : 0;
    const int y_end = d.dy > 0 ? -1 : h;
    const int y_step = d.dy > 0 ? -1 : 1;
    for (int y = y_begin; y != y_end; y += y_step) {
      for (int x = x_begin; x != x_end; x += x_step) {
        const Cell next{x + d.dx, y + d.dy};
        if (!map.is_traversable(next)) continue;
        const std::size_t ni = map.index(next.x, next.y);
        r[map.index(x, y)] = contains(forced[ni], d) || r[ni];
      }
    }
  }

  for (int fam = 0; fam < 4; ++fam) {
    const Direction d = kDiagonals[static_cast<std::size_t>(fam)];
    const auto& rx = reach[static_cast<std::size_t>(direction_index({d.dx, 0}))];
    const auto& ry = reach[static_cast<std::size_t>(direction_index({0, d.dy}))];
    auto& lines = index.diagonal_lines_[static_cast<std::size_t>(fam)];
    lines.assign(static_cast<std::size_t>(w + h - 1), {});
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) {
        const Cell c{x, y};
        if (!map.is_traversable(c) || !map.can_step(c - d, d)) continue;
        const std::size_t ci = map.index(x, y);
        if (contains(forced[ci], d) || rx[ci] || ry[ci]) {
          lines[static_cast<std::size_t>(index.line_key(c, fam))].push_back(x);
        }
      }
    }
    for (auto& line : lines) line.shrink_to_fit();
  }
  return index;
}

StaticJumpPointIndex filter_sjp(const StaticJumpPointIndex& index, Cell start, Cell goal, int margin) {
  if (margin < 0) throw std::invalid_argument("filter_sjp: margin must be non-negative");
  const CellBox box{
      std::max({std::min(start.x, goal.x) - margin, index.coverage_.x0, 0}),
      std::max({std::min(start.y, goal.y) - margin, index.coverage_.y0, 0}),
      std::min({std::max(start.x, goal.x) + margin, index.coverage_.x1, index.width_ - 1}),
      std::min({std::max(start.y, goal.y) + margin, index.coverage_.y1, index.height_ - 1}),
  };
  if (box == index.coverage_) return index;

  StaticJumpPointIndex out;
  out.width_ = index.width_;
  out.height_ = index.height_;
  out.coverage_ = box;
  for (const StaticJumpPoint& p : index.points_) {
    if (box.contains(p.cell)) out.points_.push_back(p);
  }
  for (int fam = 0; fam < 4; ++fam) {
    const auto& src = index.diagonal_lines_[static_cast<std::size_t>(fam)];
    auto& dst = out.diagonal_lines_[static_cast<std::size_t>(fam)];
    dst.assign(src.size(), {});
    for (std::size_t key = 0; key < src.size(); ++key) {
      for (int x : src[key]) {
        // Recover y from the line key.
        const int y = fam < 2 ? x - (static_cast<int>(key) - (index.height_ - 1)) : static_cast<int>(key) - x;
        if (box.contains({x, y})) dst[key].push_back(x);
      }
    }
  }
  return out;
}

StaticJumpPointIndex corrupt_index_for_testing(StaticJumpPointIndex index) {
  for (auto& fam : index.diagonal_lines_) {
    for (auto& line : fam) line.clear();
  }
  return index;
}

}  // namespace pedsim

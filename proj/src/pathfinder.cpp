#include "pedsim/pathfinder.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "pedsim/static_jump_points.hpp"

namespace pedsim {

double octile_distance(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return static_cast<double>(std::max(dx, dy) - std::min(dx, dy)) + kSqrt2 * std::min(dx, dy);
}

void SearchWorkspace::prepare(std::size_t cell_count) {
  if (g_.size() != cell_count) {
    g_.assign(cell_count, 0.0);
    parent_.assign(cell_count, -1);
    seen_stamp_.assign(cell_count, 0);
    closed_stamp_.assign(cell_count, 0);
    stamp_ = 0;
  }
  if (++stamp_ == 0) {
    std::fill(seen_stamp_.begin(), seen_stamp_.end(), 0u);
    std::fill(closed_stamp_.begin(), closed_stamp_.end(), 0u);
    stamp_ = 1;
  }
}

namespace {

// Straight arrival along d: a side cell is forced open when the cell beside
// the predecessor is blocked and the side cell itself is free.
inline bool forced_straight(const GridMap& m, Cell y, Direction d) {
  if (d.dx != 0) {
    return (m.is_traversable(y.x, y.y + 1) && !m.is_traversable(y.x - d.dx, y.y + 1)) ||
           (m.is_traversable(y.x, y.y - 1) && !m.is_traversable(y.x - d.dx, y.y - 1));
  }
  return (m.is_traversable(y.x + 1, y.y) && !m.is_traversable(y.x + 1, y.y - d.dy)) ||
         (m.is_traversable(y.x - 1, y.y) && !m.is_traversable(y.x - 1, y.y - d.dy));
}

struct DirectionList {
  std::array<Direction, 8> items{};
  int count = 0;

  void push(Direction d) { items[static_cast<std::size_t>(count++)] = d; }
  const Direction* begin() const { return items.data(); }
  const Direction* end() const { return items.data() + count; }
};

DirectionList pruned_directions(const GridMap& m, Cell x, std::optional<Direction> parent_dir) {
  DirectionList out;
  if (!parent_dir) {
    for (Direction d : kAllDirections) {
      if (m.can_step(x, d)) out.push(d);
    }
    return out;
  }
  const Direction d = *parent_dir;
  if (d.is_diagonal()) {
    // Natural neighbors only: a legal diagonal arrival guarantees both cells
    // beside the predecessor are free, so nothing is forced.
    if (m.can_step(x, d)) out.push(d);
    if (m.can_step(x, {d.dx, 0})) out.push({d.dx, 0});
    if (m.can_step(x, {0, d.dy})) out.push({0, d.dy});
    return out;
  }
  if (m.can_step(x, d)) out.push(d);
  for (int s : {1, -1}) {
    const Direction side = d.dx != 0 ? Direction{0, s} : Direction{s, 0};
    const Cell side_cell = x + side;
    const Cell behind = side_cell - d;
    if (m.is_traversable(side_cell) && !m.is_traversable(behind)) {
      out.push(side);
      const Direction diag{d.dx + side.dx, d.dy + side.dy};
      if (m.can_step(x, diag)) out.push(diag);
    }
  }
  return out;
}

std::optional<Cell> jump_straight(const GridMap& m, Cell x, Direction d, Cell goal, std::size_t& steps) {
  for (;;) {
    const Cell y = x + d;
    if (!m.is_traversable(y)) return std::nullopt;
    ++steps;
    if (y == goal || forced_straight(m, y, d)) return y;
    x = y;
  }
}

std::optional<Cell> jump_diagonal(const GridMap& m, Cell x, Direction d, Cell goal, std::size_t& steps) {
  for (;;) {
    if (!m.can_step(x, d)) return std::nullopt;
    const Cell y = x + d;
    ++steps;
    if (y == goal) return y;
    if (jump_straight(m, y, {d.dx, 0}, goal, steps) || jump_straight(m, y, {0, d.dy}, goal, steps)) return y;
    x = y;
  }
}

// Straight run from y along d reaches goal through free cells only.
bool straight_reaches(const GridMap& m, Cell y, Direction d, Cell goal, std::size_t& steps) {
  while (y != goal) {
    y = y + d;
    ++steps;
    if (!m.is_traversable(y)) return false;
  }
  return true;
}

std::optional<Cell> jump_diagonal_indexed(const GridMap& m, const StaticJumpPointIndex& index, Cell x, Direction d,
                                          Cell goal, std::size_t& steps) {
  const CellBox& box = index.coverage();
  if (!box.contains(x)) return jump_diagonal(m, x, d, goal, steps);

  // First k at which x + k*d leaves the coverage box.
  const int kx = d.dx > 0 ? box.x1 - x.x + 1 : x.x - box.x0 + 1;
  const int ky = d.dy > 0 ? box.y1 - x.y + 1 : x.y - box.y0 + 1;
  const int k_exit = std::min(kx, ky);

  // Goal-dependent candidates: the goal itself, or the cells sharing its row
  // or column from which a straight scan can reach it.
  const int k_row = (goal.y - x.y) * d.dy;
  const int k_col = (goal.x - x.x) * d.dx;
  const int k_static = index.nearest_on_diagonal(x, d).value_or(k_exit);

  std::array<int, 3> candidates{k_static, k_row, k_col};
  std::sort(candidates.begin(), candidates.end());

  Cell cur = x;
  int k = 0;
  for (int kc : candidates) {
    if (kc <= k || kc >= k_exit) continue;
    for (; k < kc; ++k) {
      if (!m.can_step(cur, d)) return std::nullopt;
      cur = cur + d;
      ++steps;
    }
    if (kc == k_static || cur == goal) return cur;
    if (kc == k_row && straight_reaches(m, cur, {d.dx, 0}, goal, steps)) return cur;
    if (kc == k_col && straight_reaches(m, cur, {0, d.dy}, goal, steps)) return cur;
  }
  // Coverage ends at the map edge: nothing further along the ray.
  const bool edge_x = d.dx > 0 ? box.x1 == m.width() - 1 : box.x0 == 0;
  const bool edge_y = d.dy > 0 ? box.y1 == m.height() - 1 : box.y0 == 0;
  if ((k_exit == kx && edge_x) || (k_exit == ky && edge_y)) return std::nullopt;

  // Walk to the last covered cell, then continue with a plain scan.
  for (; k < k_exit - 1; ++k) {
    if (!m.can_step(cur, d)) return std::nullopt;
    cur = cur + d;
    ++steps;
  }
  return jump_diagonal(m, cur, d, goal, steps);
}

}  // namespace

// A* over jump points. `Diagonal` resolves diagonal jumps; straight jumps are
// always plain scans.
class SearchEngine {
 public:
  SearchEngine(const GridMap& map, SearchWorkspace& ws) : map_(map), ws_(ws) {}

  template <class Diagonal>
  SearchResult run(Cell start, Cell goal, Diagonal&& diagonal) {
    const auto t0 = std::chrono::steady_clock::now();
    SearchResult result;
    if (!map_.is_traversable(start) || !map_.is_traversable(goal)) {
      throw std::invalid_argument("search endpoints must be traversable: start " + to_string(start) + ", goal " +
                                  to_string(goal));
    }
    ws_.prepare(map_.cell_count());
    const std::uint32_t stamp = ws_.stamp_;
    SearchStats& stats = result.stats;

    struct Node {
      double f;
      double g;
      Cell cell;
    };
    // Lowest f first; ties by larger g, then lexicographic cell order.
    auto worse = [](const Node& a, const Node& b) {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return b.cell < a.cell;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

    auto idx = [this](Cell c) { return static_cast<std::int32_t>(map_.index(c.x, c.y)); };
    auto cell_of = [this](std::int32_t i) { return Cell{i % map_.width(), i / map_.width()}; };

    const std::int32_t si = idx(start);
    ws_.g_[static_cast<std::size_t>(si)] = 0.0;
    ws_.parent_[static_cast<std::size_t>(si)] = -1;
    ws_.seen_stamp_[static_cast<std::size_t>(si)] = stamp;
    open.push({octile_distance(start, goal), 0.0, start});

    while (!open.empty()) {
      const Node node = open.top();
      open.pop();
      const auto ni = static_cast<std::size_t>(idx(node.cell));
      if (ws_.closed_stamp_[ni] == stamp || node.g > ws_.g_[ni]) continue;
      ws_.closed_stamp_[ni] = stamp;
      ++stats.expanded_nodes;

      if (node.cell == goal) {
        std::vector<Cell> points;
        for (std::int32_t i = static_cast<std::int32_t>(ni); i != -1; i = ws_.parent_[static_cast<std::size_t>(i)]) {
          points.push_back(cell_of(i));
        }
        std::reverse(points.begin(), points.end());
        Path path;
        path.length = path_length(map_, points);
        path.points = std::move(points);
        result.path = std::move(path);
        break;
      }

      std::optional<Direction> parent_dir;
      if (const std::int32_t p = ws_.parent_[ni]; p != -1) parent_dir = direction_between(cell_of(p), node.cell);

      for (Direction d : pruned_directions(map_, node.cell, parent_dir)) {
        const std::optional<Cell> jp = d.is_diagonal() ? diagonal(node.cell, d, goal, stats.jump_scan_steps)
                                                       : jump_straight(map_, node.cell, d, goal, stats.jump_scan_steps);
        if (!jp) continue;
        const auto ji = static_cast<std::size_t>(idx(*jp));
        if (ws_.closed_stamp_[ji] == stamp) continue;
        const int k = std::max(std::abs(jp->x - node.cell.x), std::abs(jp->y - node.cell.y));
        const double ng = node.g + (d.is_diagonal() ? kSqrt2 * k : static_cast<double>(k));
        if (ws_.seen_stamp_[ji] == stamp && ng >= ws_.g_[ji]) continue;
        ws_.seen_stamp_[ji] = stamp;
        ws_.g_[ji] = ng;
        ws_.parent_[ji] = static_cast<std::int32_t>(ni);
        open.push({ng + octile_distance(*jp, goal), ng, *jp});
      }
    }
    stats.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }

 private:
  const GridMap& map_;
  SearchWorkspace& ws_;
};

bool has_forced_neighbor(const GridMap& map, Cell x, Direction d) {
  if (!d.is_valid() || !map.is_traversable(x - d) || !map.can_step(x - d, d)) return false;
  // A legal diagonal arrival never forces a neighbor under the corner rule.
  if (d.is_diagonal()) return false;
  return forced_straight(map, x, d);
}

std::vector<Direction> prune_neighbors(const GridMap& map, Cell x, std::optional<Direction> parent_dir) {
  if (!map.is_traversable(x)) {
    throw std::invalid_argument("prune_neighbors: cell " + to_string(x) + " is not traversable");
  }
  if (parent_dir && !parent_dir->is_valid()) throw std::invalid_argument("prune_neighbors: invalid direction");
  const DirectionList list = pruned_directions(map, x, parent_dir);
  return {list.begin(), list.end()};
}

std::optional<JumpPoint> jump(const GridMap& map, Cell x, Direction d, Cell goal) {
  std::size_t steps = 0;
  const std::optional<Cell> y =
      d.is_diagonal() ? jump_diagonal(map, x, d, goal, steps) : jump_straight(map, x, d, goal, steps);
  if (!y) return std::nullopt;
  return JumpPoint{*y, d};
}

std::optional<JumpPoint> indexed_diagonal_jump(const GridMap& map, const StaticJumpPointIndex& index, Cell x,
                                               Direction d, Cell goal) {
  if (!d.is_diagonal()) throw std::invalid_argument("indexed_diagonal_jump: direction must be diagonal");
  std::size_t steps = 0;
  const std::optional<Cell> y = jump_diagonal_indexed(map, index, x, d, goal, steps);
  if (!y) return std::nullopt;
  return JumpPoint{*y, d};
}

SearchResult jps_search(const GridMap& map, Cell start, Cell goal, SearchWorkspace* workspace) {
  SearchWorkspace local;
  SearchEngine engine(map, workspace ? *workspace : local);
  return engine.run(start, goal, [&map](Cell x, Direction d, Cell g, std::size_t& steps) {
    return jump_diagonal(map, x, d, g, steps);
  });
}

SearchResult jps_s_search(const GridMap& map, const StaticJumpPointIndex& index, Cell start, Cell goal,
                          SearchWorkspace* workspace) {
  if (index.map_width() != map.width() || index.map_height() != map.height()) {
    throw std::invalid_argument("static jump point index was built for a different map");
  }
  SearchWorkspace local;
  SearchEngine engine(map, workspace ? *workspace : local);
  return engine.run(start, goal, [&map, &index](Cell x, Direction d, Cell g, std::size_t& steps) {
    return jump_diagonal_indexed(map, index, x, d, g, steps);
  });
}

std::optional<double> dijkstra_oracle(const GridMap& map, Cell start, Cell goal) {
  if (!map.is_traversable(start) || !map.is_traversable(goal)) {
    throw std::invalid_argument("dijkstra_oracle: endpoints must be traversable");
  }
  std::vector<double> dist(map.cell_count(), std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t si = map.index(start.x, start.y);
  const std::size_t gi = map.index(goal.x, goal.y);
  dist[si] = 0.0;
  open.push({0.0, si});
  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (d > dist[i]) continue;
    if (i == gi) return d;
    const Cell c{static_cast<int>(i % static_cast<std::size_t>(map.width())),
                 static_cast<int>(i / static_cast<std::size_t>(map.width()))};
    for (Direction dir : kAllDirections) {
      if (!map.can_step(c, dir)) continue;
      const Cell n = c + dir;
      const std::size_t j = map.index(n.x, n.y);
      const double nd = d + (dir.is_diagonal() ? kSqrt2 : 1.0);
      if (nd < dist[j]) {
        dist[j] = nd;
        open.push({nd, j});
      }
    }
  }
  return std::nullopt;
}

double path_length(const GridMap& map, const std::vector<Cell>& points) {
  double cells = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) cells += octile_distance(points[i - 1], points[i]);
  return cells * map.cell_size();
}

bool validate_path(const GridMap& map, const Path& path) {
  if (path.points.empty() || !std::isfinite(path.length)) return false;
  if (!map.is_traversable(path.points.front())) return false;
  double cells = 0.0;
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const Cell a = path.points[i - 1];
    const Cell b = path.points[i];
    const int dx = b.x - a.x;
    const int dy = b.y - a.y;
    if (dx == 0 && dy == 0) return false;
    if (dx != 0 && dy != 0 && std::abs(dx) != std::abs(dy)) return false;
    const Direction d = direction_between(a, b);
    for (Cell c = a; c != b; c = c + d) {
      if (!map.can_step(c, d)) return false;
    }
    cells += octile_distance(a, b);
  }
  const double expected = cells * map.cell_size();
  return std::abs(path.length - expected) <= 1e-9 * std::max(1.0, std::abs(expected));
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string serialize_path(const Path& path) {
  std::string out = "length=" + format_double(path.length) + "\n";
  for (Cell c : path.points) out += to_string(c) + "\n";
  return out;
}

Path parse_path(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Path path;
  if (!std::getline(in, line) || line.rfind("length=", 0) != 0) {
    throw std::runtime_error("path file must start with 'length=<value>'");
  }
  const std::string value = line.substr(7);
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), path.length);
  if (ec != std::errc{}) throw std::runtime_error("malformed path length '" + value + "'");
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    Cell c;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("line " + std::to_string(number) + ": expected x,y");
    const auto r1 = std::from_chars(line.data(), line.data() + comma, c.x);
    const auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), c.y);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r2.ptr != line.data() + line.size()) {
      throw std::runtime_error("line " + std::to_string(number) + ": malformed point '" + line + "'");
    }
    path.points.push_back(c);
  }
  return path;
}

}  // namespace pedsim

#pragma once

// Brute-force reference implementations used only by the tests. Nothing here
// calls into the pathfinder; move legality and costs are re-derived from the
// raw occupancy so the checks stay independent of the code under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "pedsim/grid_map.hpp"

namespace pedsim::oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool free_cell(const GridMap& m, Cell c) {
  return c.x >= 0 && c.y >= 0 && c.x < m.width() && c.y < m.height() && m.is_traversable(c);
}

// One king move a -> b with no corner cutting.
inline bool legal_move(const GridMap& m, Cell a, Cell b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  if (std::abs(dx) > 1 || std::abs(dy) > 1 || (dx == 0 && dy == 0)) return false;
  if (!free_cell(m, a) || !free_cell(m, b)) return false;
  if (dx != 0 && dy != 0) return free_cell(m, {a.x + dx, a.y}) && free_cell(m, {a.x, a.y + dy});
  return true;
}

inline double move_cost(Cell a, Cell b) { return (a.x != b.x && a.y != b.y) ? std::sqrt(2.0) : 1.0; }

// Shortest p -> n path using only cells of the 3x3 block centred on x, never
// visiting x itself.
inline double local_detour(const GridMap& m, Cell x, Cell p, Cell n) {
  std::vector<Cell> nodes;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const Cell c{x.x + dx, x.y + dy};
      if ((dx != 0 || dy != 0) && free_cell(m, c)) nodes.push_back(c);
    }
  }
  const std::size_t k = nodes.size();
  std::vector<double> dist(k * k, kInf);
  for (std::size_t i = 0; i < k; ++i) {
    dist[i * k + i] = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && legal_move(m, nodes[i], nodes[j])) dist[i * k + j] = move_cost(nodes[i], nodes[j]);
    }
  }
  for (std::size_t via = 0; via < k; ++via) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        dist[i * k + j] = std::min(dist[i * k + j], dist[i * k + via] + dist[via * k + j]);
      }
    }
  }
  const auto find = [&](Cell c) { return static_cast<std::size_t>(std::find(nodes.begin(), nodes.end(), c) - nodes.begin()); };
  const std::size_t pi = find(p);
  const std::size_t ni = find(n);
  if (pi >= k || ni >= k) return kInf;
  return dist[pi * k + ni];
}

inline bool arrival_legal(const GridMap& m, Cell x, Direction d) { return legal_move(m, {x.x - d.dx, x.y - d.dy}, x); }

// Neighbors kept by the pruning rules: a neighbor n of x is dropped when the
// best route from the parent avoiding x is no longer (straight arrival) or
// strictly shorter (diagonal arrival) than the route through x.
inline std::vector<Direction> pruned_set(const GridMap& m, Cell x, Direction d) {
  const Cell p{x.x - d.dx, x.y - d.dy};
  std::vector<Direction> keep;
  for (Direction nd : kAllDirections) {
    const Cell n{x.x + nd.dx, x.y + nd.dy};
    if (n == p || !legal_move(m, x, n)) continue;
    const double via = move_cost(p, x) + move_cost(x, n);
    const double avoid = local_detour(m, x, p, n);
    const bool straight = std::abs(d.dx) + std::abs(d.dy) == 1;
    const bool pruned = straight ? avoid <= via + 1e-12 : avoid < via - 1e-12;
    if (!pruned) keep.push_back(nd);
  }
  return keep;
}

inline std::vector<Direction> natural_directions(Direction d) {
  if (std::abs(d.dx) + std::abs(d.dy) == 1) return {d};
  return {d, {d.dx, 0}, {0, d.dy}};
}

// Forced neighbors of x for arrival along d (empty when the arrival is illegal).
inline std::vector<Direction> forced_neighbors(const GridMap& m, Cell x, Direction d) {
  std::vector<Direction> forced;
  if (!arrival_legal(m, x, d)) return forced;
  const Cell p{x.x - d.dx, x.y - d.dy};
  const auto natural = natural_directions(d);
  for (Direction nd : pruned_set(m, x, d)) {
    if (std::find(natural.begin(), natural.end(), nd) != natural.end()) continue;
    const Cell n{x.x + nd.dx, x.y + nd.dy};
    if (move_cost(p, x) + move_cost(x, n) < local_detour(m, x, p, n) - 1e-12) forced.push_back(nd);
  }
  return forced;
}

inline bool is_forced_pair(const GridMap& m, Cell x, Direction d) { return !forced_neighbors(m, x, d).empty(); }

struct ForcedPair {
  Cell cell;
  Direction direction;
  friend bool operator==(const ForcedPair&, const ForcedPair&) = default;
};

// Every (cell, arrival direction) with at least one forced neighbor, scanned
// in (x, y, direction-order) order.
inline std::vector<ForcedPair> enumerate_forced_pairs(const GridMap& m) {
  std::vector<ForcedPair> out;
  for (int x = 0; x < m.width(); ++x) {
    for (int y = 0; y < m.height(); ++y) {
      if (!free_cell(m, {x, y})) continue;
      for (Direction d : kAllDirections) {
        if (is_forced_pair(m, {x, y}, d)) out.push_back({{x, y}, d});
      }
    }
  }
  return out;
}

// Plain Bellman-Ford style relaxation over the whole grid; slow but obvious.
inline double shortest_octile(const GridMap& m, Cell s, Cell g) {
  std::vector<double> dist(m.cell_count(), kInf);
  dist[m.index(s.x, s.y)] = 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        const double here = dist[m.index(x, y)];
        if (here == kInf) continue;
        for (Direction d : kAllDirections) {
          const Cell n{x + d.dx, y + d.dy};
          if (!legal_move(m, {x, y}, n)) continue;
          const double nd = here + move_cost({x, y}, n);
          double& slot = dist[m.index(n.x, n.y)];
          if (nd < slot - 1e-12) {
            slot = nd;
            changed = true;
          }
        }
      }
    }
  }
  return dist[m.index(g.x, g.y)];
}

}  // namespace pedsim::oracle

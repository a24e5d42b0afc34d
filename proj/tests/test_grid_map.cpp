#include <doctest.h>

#include <algorithm>
#include <string>

#include "pedsim/grid_map.hpp"
#include "pedsim/map_generators.hpp"

using namespace pedsim;

TEST_CASE("is_traversable") {
  GridMap open(5, 5);
  CHECK(open.is_traversable(Cell{2, 2}));
  CHECK_FALSE(open.is_traversable(Cell{-1, 0}));
  CHECK_FALSE(open.is_traversable(Cell{5, 0}));

  GridMap m(3, 3);
  m.set_blocked({1, 1});
  CHECK_FALSE(m.is_traversable(Cell{1, 1}));
}

TEST_CASE("step_neighbors") {
  SUBCASE("open interior cell has all eight") {
    GridMap m(3, 3);
    CHECK(m.step_neighbors({1, 1}).size() == 8);
  }
  SUBCASE("corner cutting is refused") {
    GridMap m(3, 3);
    m.set_blocked({2, 1});
    const auto ns = m.step_neighbors({1, 1});
    CHECK(ns.size() == 5);
    for (const auto& [d, c] : ns) {
      CHECK(c != Cell{2, 0});
      CHECK(c != Cell{2, 2});
      CHECK(c != Cell{2, 1});
    }
  }
  SUBCASE("map corner") {
    GridMap m(4, 4);
    CHECK(m.step_neighbors({0, 0}).size() == 3);
  }
  SUBCASE("blocked origin throws") {
    GridMap m(3, 3);
    m.set_blocked({1, 1});
    CHECK_THROWS_AS(m.step_neighbors({1, 1}), std::invalid_argument);
  }
}

TEST_CASE("neighbor invariants hold on random maps") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridMap m = random_scatter_map(16, 12, 0.3, seed);
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        if (!m.is_traversable(x, y)) continue;
        for (const auto& [d, c] : m.step_neighbors({x, y})) {
          REQUIRE(m.is_traversable(c));
          if (d.is_diagonal()) {
            REQUIRE(m.is_traversable(x + d.dx, y));
            REQUIRE(m.is_traversable(x, y + d.dy));
          }
        }
      }
    }
  }
}

TEST_CASE("cell/world conversion") {
  GridMap unit(10, 10, 1.0);
  CHECK(unit.cell_to_world({0, 0}) == Vec2{0.5, 0.5});
  CHECK(unit.world_to_cell({0.9, 0.1}) == Cell{0, 0});
  CHECK(unit.world_to_cell({3.0, 3.0}) == Cell{3, 3});

  GridMap half(10, 10, 0.5);
  CHECK(half.cell_to_world({4, 2}) == Vec2{2.25, 1.25});

  GridMap two(10, 10, 2.0);
  CHECK(two.world_to_cell({5.5, 1.0}) == Cell{2, 0});

  SUBCASE("clamping and extent errors") {
    CHECK(unit.world_to_cell({10.0, 10.0}) == Cell{9, 9});
    CHECK(unit.world_to_cell({-0.5, 0.0}) == Cell{0, 0});
    CHECK_THROWS_AS(unit.world_to_cell({-1.5, 0.0}), std::out_of_range);
    CHECK_THROWS_AS(unit.world_to_cell({0.0, 11.5}), std::out_of_range);
    CHECK_THROWS_AS(unit.cell_to_world({10, 0}), std::out_of_range);
  }

  SUBCASE("round trip on every cell") {
    for (double cs : {0.25, 0.5, 1.0, 0.3}) {
      GridMap m(13, 7, cs);
      for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) REQUIRE(m.world_to_cell(m.cell_to_world({x, y})) == Cell{x, y});
      }
    }
  }
}

TEST_CASE("load_map") {
  SUBCASE("bare rows") {
    const GridMap m = GridMap::parse("..\n.#");
    CHECK(m.width() == 2);
    CHECK(m.height() == 2);
    CHECK(m.blocked_cells() == std::vector<Cell>{{1, 1}});
  }
  SUBCASE("W H header") {
    const GridMap m = GridMap::parse("3 2\n#..\n..#\n");
    CHECK(m.width() == 3);
    CHECK(m.blocked_cells() == std::vector<Cell>{{0, 0}, {2, 1}});
  }
  SUBCASE("movingai header") {
    const GridMap m = GridMap::parse("type octile\nheight 2\nwidth 3\nmap\n.@T\nS..\n");
    CHECK(m.width() == 3);
    CHECK(m.height() == 2);
    CHECK(m.blocked_count() == 2);
    CHECK(m.is_traversable(Cell{0, 1}));
  }
  SUBCASE("large open map") {
    std::string text = "250 250\n";
    for (int y = 0; y < 250; ++y) text += std::string(250, '.') + "\n";
    const GridMap m = GridMap::parse(text);
    CHECK(m.blocked_count() == 0);
    CHECK(m.width() == 250);
  }
  SUBCASE("errors carry line numbers") {
    CHECK_THROWS_AS(GridMap::parse(""), MapParseError);
    try {
      GridMap::parse("3 2\n...\n..\n");
      FAIL("expected ragged-row error");
    } catch (const MapParseError& e) {
      CHECK(e.line() == 3);
    }
    try {
      GridMap::parse("..\n.x\n");
      FAIL("expected unknown-character error");
    } catch (const MapParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(GridMap::parse("0 0\n"), MapParseError);
    CHECK_THROWS_AS(GridMap::parse("2 3\n..\n..\n"), MapParseError);
  }
  SUBCASE("deterministic and reproduced by to_ascii") {
    const GridMap m = random_scatter_map(9, 5, 0.4, 3);
    CHECK(GridMap::parse(m.to_ascii()) == m);
    CHECK(GridMap::parse(m.to_ascii()) == GridMap::parse(m.to_ascii()));
  }
}

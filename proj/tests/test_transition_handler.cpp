#include <doctest.h>

#include <cmath>

#include "pedsim/transition_handler.hpp"
#include "properties.hpp"

using namespace pedsim;

namespace {

PathSpine line_spine(Vec2 a, Vec2 b, double radius = 1.0) { return PathSpine{{SpineSegment{a, b}}, radius}; }

AgentController moving_agent(const GridMap& m, std::vector<Cell> points, std::size_t index) {
  AgentController a;
  a.pedestrian_id = 5;
  a.state = ControlState::Moving;
  a.spine = PathSpine::from_cells(m, points, 1.0);
  a.waypoints = std::move(points);
  a.waypoint_index = index;
  a.goal = a.waypoints.back();
  return a;
}

}  // namespace

TEST_CASE("nearest_point_on_spine") {
  const PathSpine s = line_spine({0, 0}, {10, 0});
  auto on = nearest_point_on_spine(s, {4, 0});
  CHECK(on.point == Vec2{4, 0});
  CHECK(on.distance == 0.0);

  auto off = nearest_point_on_spine(s, {5, 3});
  CHECK(off.point == Vec2{5, 0});
  CHECK(off.distance == 3.0);

  auto past = nearest_point_on_spine(line_spine({0, 0}, {1, 0}), {3, 0});
  CHECK(past.point == Vec2{1, 0});
  CHECK(past.distance == 2.0);

  SUBCASE("ties go to the earliest segment") {
    PathSpine bent{{SpineSegment{{0, 0}, {2, 0}}, SpineSegment{{2, 0}, {2, 2}}}, 1.0};
    CHECK(nearest_point_on_spine(bent, {3, -1}).segment == 0);
    CHECK(nearest_point_on_spine(bent, {3, 1}).segment == 1);
  }
  CHECK_THROWS_AS(nearest_point_on_spine(PathSpine{}, {0, 0}), std::invalid_argument);
}

TEST_CASE("detect_deviation") {
  const PathSpine s = line_spine({0, 0}, {10, 0}, 1.0);
  CHECK_FALSE(detect_deviation(s, {3, 0}));
  CHECK_FALSE(detect_deviation(s, {3, 1.0}));
  CHECK(detect_deviation(s, {3, 1.01}));
  CHECK(detect_deviation(s, {-1.01, 0}));
}

TEST_CASE("PathSpine::from_cells") {
  GridMap m(10, 10, 0.5);
  const PathSpine s = PathSpine::from_cells(m, {{0, 0}, {3, 3}, {3, 7}}, 1.0);
  REQUIRE(s.segments.size() == 2);
  CHECK(s.segments[0].a == Vec2{0.25, 0.25});
  CHECK(s.segments[0].b == s.segments[1].a);
  CHECK(s.segments[1].b == Vec2{1.75, 3.75});
  CHECK(PathSpine::from_cells(m, {{2, 2}}, 1.0).segments.size() == 1);
  CHECK_THROWS_AS(PathSpine::from_cells(m, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PathSpine::from_cells(m, {{0, 0}}, 0.0), std::invalid_argument);
}

TEST_CASE("advance_waypoint") {
  GridMap m(20, 20, 0.5);
  const HandlerParams hp = HandlerParams::for_cell_size(0.5);
  Pedestrian p;
  p.id = 5;

  SUBCASE("last waypoint reached") {
    AgentController a = moving_agent(m, {{0, 0}, {8, 0}}, 1);
    p.position = m.cell_to_world({8, 0}) + Vec2{0.3, 0.0};
    const auto t = advance_waypoint(a, p, m, hp);
    REQUIRE(t.has_value());
    CHECK(t->from == ControlState::Moving);
    CHECK(t->to == ControlState::Done);
    CHECK(a.state == ControlState::Done);
    CHECK_FALSE(a.spine.has_value());
  }
  SUBCASE("intermediate waypoint") {
    AgentController a = moving_agent(m, {{0, 0}, {5, 5}, {5, 12}}, 1);
    p.position = m.cell_to_world({5, 5});
    CHECK_FALSE(advance_waypoint(a, p, m, hp).has_value());
    CHECK(a.waypoint_index == 2);
    CHECK(p.target == m.cell_to_world({5, 12}));
  }
  SUBCASE("far away") {
    AgentController a = moving_agent(m, {{0, 0}, {5, 5}}, 1);
    p.position = m.cell_to_world({1, 1});
    p.target = {9, 9};
    CHECK_FALSE(advance_waypoint(a, p, m, hp).has_value());
    CHECK(a.waypoint_index == 1);
    CHECK(a.state == ControlState::Moving);
    CHECK(p.target == Vec2{9, 9});
  }
  SUBCASE("boundary is inclusive") {
    AgentController a = moving_agent(m, {{0, 0}, {5, 0}}, 1);
    p.position = m.cell_to_world({5, 0}) - Vec2{0.5, 0.0};
    CHECK(advance_waypoint(a, p, m, hp).has_value());
  }
  SUBCASE("outside Moving") {
    AgentController a;
    a.pedestrian_id = 5;
    CHECK_THROWS_AS(advance_waypoint(a, p, m, hp), std::logic_error);
  }
}

TEST_CASE("constrain_to_free_space") {
  GridMap m = GridMap::parse("5 3\n.....\n..#..\n.....\n", 0.5);
  Pedestrian before;
  before.position = {0.75, 0.75};
  Pedestrian after = before;

  after.position = {1.1, 0.8};  // into the block, x blocked, y fine
  after.velocity = {1.0, 0.2};
  Pedestrian got = constrain_to_free_space(m, before, after);
  CHECK(got.position == Vec2{0.75, 0.8});
  CHECK(got.velocity == Vec2{0.0, 0.2});

  after.position = {-0.1, 0.8};  // off the map
  after.velocity = {-1.0, 0.2};
  got = constrain_to_free_space(m, before, after);
  CHECK(got.position == Vec2{0.75, 0.8});

  after.position = {0.9, 0.9};
  CHECK(constrain_to_free_space(m, before, after).position == Vec2{0.9, 0.9});
}

TEST_CASE("tick") {
  SUBCASE("fresh agent with a reachable goal") {
    props::Rig rig(GridMap(20, 10, 0.5));
    rig.add(3, {1, 1}, {18, 8});
    const World world{rig.map, rig.index, rig.obstacles, rig.peds, {}, rig.forces, rig.handler, 0.0};
    const auto t = tick(rig.agents[0], rig.peds[0], world, 0.05);
    REQUIRE(t.has_value());
    CHECK(t->to == ControlState::Moving);
    AgentController& a = rig.agents[0];
    REQUIRE(a.spine.has_value());
    CHECK(a.spine->radius == 1.0);
    CHECK(a.waypoint_index == 1);
    CHECK(validate_path(rig.map, Path{a.waypoints, path_length(rig.map, a.waypoints)}));
    CHECK(rig.peds[0].target == rig.map.cell_to_world(a.waypoints[1]));
  }
  SUBCASE("unreachable goal fails") {
    props::Rig rig(GridMap::parse("5 3\n..#..\n..#..\n..#..\n", 0.5));
    rig.add(3, {0, 1}, {4, 1});
    const World world{rig.map, rig.index, rig.obstacles, rig.peds, {}, rig.forces, rig.handler, 0.0};
    const auto t = tick(rig.agents[0], rig.peds[0], world, 0.05);
    REQUIRE(t.has_value());
    CHECK(t->to == ControlState::Failed);
    CHECK_THROWS_AS(tick(rig.agents[0], rig.peds[0], world, 0.05), std::logic_error);
  }
  SUBCASE("invariant violations name the agent") {
    props::Rig rig(GridMap(10, 10, 0.5));
    rig.add(17, {1, 1}, {8, 8});
    rig.agents[0].state = ControlState::Moving;  // no spine
    const World world{rig.map, rig.index, rig.obstacles, rig.peds, {}, rig.forces, rig.handler, 0.0};
    try {
      tick(rig.agents[0], rig.peds[0], world, 0.05);
      FAIL("expected an error");
    } catch (const std::logic_error& e) {
      CHECK(std::string(e.what()).find("17") != std::string::npos);
    }
  }
  SUBCASE("pushed off the spine") {
    const auto out = props::forced_deviation();
    CHECK(out.handbacks == 1);
    CHECK(out.replan_count == 1);
    CHECK(out.position_kept);
    CHECK(out.final_state == ControlState::Done);
  }
}

TEST_CASE("HandlerParams") {
  const HandlerParams hp = HandlerParams::for_cell_size(0.25);
  CHECK(hp.spine_radius == 0.5);
  CHECK(hp.waypoint_tolerance == 0.25);
  CHECK(hp.max_replans == 10);
  HandlerParams bad;
  bad.max_replans = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("handler properties") {
  auto sound = props::transition_soundness(11, 12);
  INFO(sound.detail);
  CHECK(sound.ok);
  CHECK(sound.events > 0);
  auto live = props::free_flow_liveness(5, 40);
  INFO(live.detail);
  CHECK(live.ok);
  for (int cap : {0, 1, 4}) {
    auto bound = props::replan_bound(cap);
    INFO(bound.detail);
    CHECK(bound.ok);
  }
}

TEST_CASE("social force properties") {
  for (const auto& v : {props::speed_bound(1, 2000), props::repulsion_monotone(2, 50), props::reciprocity(3, 2000),
                        props::translation_invariance(4, 200), props::poi_linearity(5, 300),
                        props::zero_deviation_fixpoint(6, 2000)}) {
    INFO(v.detail);
    CHECK(v.ok);
    CHECK(v.checks > 0);
  }
}

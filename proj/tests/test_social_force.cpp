#include <doctest.h>

#include <cmath>
#include <vector>

#include "pedsim/random.hpp"
#include "pedsim/social_force.hpp"

using namespace pedsim;

namespace {

Pedestrian at(int id, Vec2 pos, Vec2 vel = {}, Vec2 target = {}) {
  Pedestrian p;
  p.id = id;
  p.position = pos;
  p.velocity = vel;
  p.target = target;
  return p;
}

Obstacle wall(Vec2 a, Vec2 b, Vec2 normal) { return Obstacle{{WallSegment{a, b, normal}}}; }

bool near(Vec2 a, Vec2 b, double tol = 1e-12) { return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol; }

}  // namespace

TEST_CASE("acceleration_force") {
  ForceParams params;
  Pedestrian p = at(1, {0, 0}, {}, {10, 0});
  CHECK(near(acceleration_force(p, params), {2.68, 0.0}));

  p.velocity = {1.34, 0.0};
  CHECK(near(acceleration_force(p, params), {0.0, 0.0}));

  Pedestrian braking = at(2, {3, 3}, {1, 0}, {3, 3});
  CHECK(near(acceleration_force(braking, params), {-2.0, 0.0}));
}

TEST_CASE("anisotropy") {
  ForceParams params;
  Pedestrian p = at(1, {0, 0}, {1, 0});
  CHECK(anisotropy(p, {2, 0}, params) == 1.0);
  CHECK(anisotropy(p, {-2, 0}, params) == params.anisotropy_floor);
  CHECK(anisotropy(p, {0, 2}, params) == 1.0);  // 90 degrees, inside 100
  CHECK(anisotropy(at(2, {0, 0}), {-2, 0}, params) == 1.0);
}

TEST_CASE("repulsion_pedestrian") {
  ForceParams params;
  SUBCASE("at one interaction range") {
    const Vec2 f = repulsion_pedestrian(at(1, {0, 0}), at(2, {params.sigma, 0}), params);
    CHECK(f.x == doctest::Approx(-2.1 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(f.x == doctest::Approx(-0.7726).epsilon(1e-4));
    CHECK(f.y == 0.0);
  }
  SUBCASE("far away is negligible") {
    const Vec2 f = repulsion_pedestrian(at(1, {0, 0}), at(2, {0, 10 * params.sigma}), params);
    CHECK(norm(f) < 1e-4 * params.V0);
  }
  SUBCASE("facing pair is symmetric") {
    const Pedestrian a = at(1, {0, 0}, {1, 0});
    const Pedestrian b = at(2, {1, 0}, {-1, 0});
    CHECK(near(repulsion_pedestrian(a, b, params), -repulsion_pedestrian(b, a, params)));
  }
  SUBCASE("coincident positions") {
    const Vec2 f = repulsion_pedestrian(at(3, {1, 1}), at(9, {1, 1}), params);
    CHECK(norm(f) == doctest::Approx(params.V0).epsilon(1e-12));
    CHECK(near(f, -repulsion_pedestrian(at(9, {1, 1}), at(3, {1, 1}), params)));
    CHECK(f == repulsion_pedestrian(at(3, {1, 1}), at(9, {1, 1}), params));
  }
  SUBCASE("self interaction rejected") {
    CHECK_THROWS_AS(repulsion_pedestrian(at(1, {0, 0}), at(1, {1, 0}), params), std::invalid_argument);
  }
}

TEST_CASE("repulsion_boundary") {
  ForceParams params;
  const Obstacle floor_wall = wall({-5, 0}, {5, 0}, {0, 1});
  SUBCASE("at one interaction range") {
    const Vec2 f = repulsion_boundary(at(1, {0, params.R}), floor_wall, params);
    CHECK(f.x == doctest::Approx(0.0));
    CHECK(f.y == doctest::Approx(10.0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(f.y == doctest::Approx(3.6788).epsilon(1e-4));
  }
  SUBCASE("decays") {
    CHECK(norm(repulsion_boundary(at(1, {0, 10 * params.R}), floor_wall, params)) < 1e-4 * params.U0);
  }
  SUBCASE("between parallel walls") {
    const std::vector<Obstacle> walls = {floor_wall, wall({-5, 2}, {5, 2}, {0, -1})};
    const Pedestrian p = at(1, {0.3, 1.0});
    const Vec2 sum = repulsion_boundary(p, walls[0], params) + repulsion_boundary(p, walls[1], params);
    CHECK(near(sum, {0, 0}));
  }
  SUBCASE("on the boundary uses the outward normal") {
    const Vec2 f = repulsion_boundary(at(1, {1, 0}), floor_wall, params);
    CHECK(near(f, {0, params.U0}));
  }
  SUBCASE("segment end is the nearest point past the end") {
    const Vec2 f = repulsion_boundary(at(1, {5 + params.R, 0}), floor_wall, params);
    CHECK(f.x == doctest::Approx(10.0 * std::exp(-1.0)));
  }
}

TEST_CASE("attraction_poi") {
  ForceParams params;
  PointOfInterest poi{{4, 0}, 0.8, 2.0, 10.0, 5.0};
  const Pedestrian p = at(1, {2, 0});
  CHECK(near(attraction_poi(p, poi, 15.0, params), {0, 0}));
  CHECK(near(attraction_poi(p, poi, 20.0, params), {0, 0}));
  const Vec2 start = attraction_poi(p, poi, 5.0, params);
  CHECK(start.x == doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-12));  // toward the POI (+x)
  const Vec2 mid = attraction_poi(p, poi, 10.0, params);
  CHECK(mid.x == doctest::Approx(start.x / 2).epsilon(1e-12));
  CHECK(near(attraction_poi(p, poi, 4.0, params), {0, 0}));
}

TEST_CASE("group_join_force") {
  ForceParams params;
  Pedestrian a = at(1, {0, 0});
  Pedestrian b = at(2, {0, 2 * params.group_distance});
  CHECK(near(group_join_force(a, b, params), {0, 0}));
  a.group_id = 1;
  b.group_id = 2;
  CHECK(near(group_join_force(a, b, params), {0, 0}));
  b.group_id = 1;
  CHECK(near(group_join_force(a, b, params), {0, 0.5}));
  b.position = {0, params.group_distance * 0.5};
  CHECK(near(group_join_force(a, b, params), {0, 0}));
  b.position = a.position;
  CHECK(near(group_join_force(a, b, params), {0, 0}));
}

TEST_CASE("total_force") {
  ForceParams params;
  SUBCASE("lone walker at desired velocity") {
    const Pedestrian p = at(1, {0, 0}, {1.34, 0}, {10, 0});
    CHECK(near(total_force(p, {}, {}, {}, 0.0, params), {0, 0}));
  }
  SUBCASE("lone walker from rest") {
    const Pedestrian p = at(1, {0, 0}, {}, {0, 7});
    CHECK(total_force(p, {}, {}, {}, 0.0, params) == acceleration_force(p, params));
  }
  SUBCASE("sum of the individual terms") {
    Pedestrian a = at(1, {0, 0}, {1, 0}, {10, 0});
    Pedestrian b = at(2, {0.8, 0.1}, {-1, 0}, {-10, 0});
    Pedestrian c = at(3, {-4, 0.5}, {1, 0}, {10, 0});
    a.group_id = c.group_id = 7;
    const std::vector<Pedestrian> crowd = {a, b, c};
    const std::vector<Obstacle> walls = {wall({-5, -0.6}, {5, -0.6}, {0, 1})};
    const std::vector<PointOfInterest> pois = {PointOfInterest{{2, 2}, 0.5, 3.0, 4.0, 0.0}};
    const Vec2 want = acceleration_force(a, params) + repulsion_pedestrian(a, b, params) +
                      repulsion_pedestrian(a, c, params) + group_join_force(a, c, params) +
                      repulsion_boundary(a, walls[0], params) + attraction_poi(a, pois[0], 1.0, params);
    CHECK(near(total_force(a, crowd, walls, pois, 1.0, params), want, 1e-12));
  }
}

TEST_CASE("integrate_step") {
  ForceParams params;
  SUBCASE("inertia") {
    const Pedestrian p = at(1, {1, 1}, {0.5, -0.25});
    const Pedestrian q = integrate_step(p, {0, 0}, 0.2, params);
    CHECK(q.velocity == p.velocity);
    CHECK(near(q.position, {1.1, 0.95}));
  }
  SUBCASE("from rest") {
    const Pedestrian q = integrate_step(at(1, {0, 0}), {2.68, 0}, 0.1, params);
    CHECK(near(q.velocity, {0.268, 0}));
    CHECK(near(q.position, {0.0268, 0}));
  }
  SUBCASE("speed clamp keeps direction") {
    const Pedestrian p = at(1, {0, 0});
    const Vec2 force = Vec2{3, 4} / 5.0 * (3 * p.desired_speed / 0.1);
    const Pedestrian q = integrate_step(p, force, 0.1, params);
    CHECK(norm(q.velocity) == doctest::Approx(1.3 * p.desired_speed).epsilon(1e-12));
    CHECK(norm(q.velocity) <= 1.3 * p.desired_speed);
    CHECK(q.velocity.x / q.velocity.y == doctest::Approx(0.75));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(integrate_step(at(1, {0, 0}), {0, 0}, 0.0, params), std::invalid_argument);
    try {
      integrate_step(at(42, {0, 0}), {NAN, 0}, 0.1, params);
      FAIL("expected failure");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("42") != std::string::npos);
    }
  }
}

TEST_CASE("obstacles_from_map") {
  // Corridor: solid top and bottom rows, open ends.
  GridMap m = GridMap::parse("######\n......\n......\n######\n", 0.5);
  const auto obstacles = obstacles_from_map(m);
  REQUIRE(obstacles.size() == 3);  // two walls + the map border
  std::size_t total_segments = 0;
  for (const auto& o : obstacles) total_segments += o.segments.size();
  CHECK(total_segments == 4);  // one merged edge per wall, two border ends
  const Pedestrian mid = at(1, {1.5, 1.0});
  Vec2 sum;
  for (const auto& o : obstacles) sum += repulsion_boundary(mid, o, ForceParams{});
  CHECK(std::abs(sum.y) < 1e-12);

  SUBCASE("normals point into free space") {
    for (const auto& o : obstacles) {
      for (const auto& s : o.segments) {
        const Vec2 probe = (s.a + s.b) / 2.0 + s.normal * 0.01;
        CHECK(m.is_traversable(m.world_to_cell(probe)));
      }
    }
  }
  SUBCASE("ParamsValidate") {
    ForceParams bad;
    bad.sigma = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ForceParams{};
    bad.anisotropy_floor = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(ForceParams{}.validate());
  }
}

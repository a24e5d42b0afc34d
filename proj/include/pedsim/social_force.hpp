#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pedsim/grid_map.hpp"
#include "pedsim/vec2.hpp"

namespace pedsim {

inline constexpr double kPi = 3.14159265358979323846;

// Social-force constants. Strengths are accelerations (unit mass).
struct ForceParams {
  double tau = 0.5;                           // relaxation time [s]
  double V0 = 2.1;                            // pedestrian repulsion strength [m^2/s^2]
  double sigma = 0.3;                         // pedestrian repulsion range [m]
  double U0 = 10.0;                           // boundary repulsion strength [m^2/s^2]
  double R = 0.2;                             // boundary repulsion range [m]
  double view_half_angle = 100.0 * kPi / 180.0;  // [rad]
  double anisotropy_floor = 0.5;              // weight outside the field of view
  double group_strength = 0.5;                // C_ab [m/s^2]
  double group_distance = 2.0;                // [m]
  double max_speed_factor = 1.3;

  // Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

struct Pedestrian {
  int id = 0;
  WorldPoint position;
  Vec2 velocity;
  double desired_speed = 1.34;  // [m/s]
  WorldPoint target;            // current waypoint
  std::optional<int> group_id;
};

struct PointOfInterest {
  WorldPoint position;
  double strength0 = 1.0;  // magnitude at activation [m^2/s^2]
  double range = 1.0;      // [m]
  double duration = 10.0;  // [s]
  double activated_at = 0.0;
};

// Wall piece with the unit normal pointing into free space.
struct WallSegment {
  Vec2 a;
  Vec2 b;
  Vec2 normal;
};

struct Obstacle {
  std::vector<WallSegment> segments;
};

// One obstacle per 8-connected group of blocked cells plus one for the map
// border, each made of the cell edges that face free space (collinear edges
// merged).
std::vector<Obstacle> obstacles_from_map(const GridMap& map);

// Nearest point of `obs` to `p` and the normal of the segment it lies on.
struct NearestWallPoint {
  Vec2 point;
  double distance = 0.0;
  Vec2 normal;
};
std::optional<NearestWallPoint> nearest_wall_point(const Obstacle& obs, Vec2 p);

// (w - v) / tau with w = desired_speed * unit(target - position); w = 0 when
// the pedestrian stands on its target.
Vec2 acceleration_force(const Pedestrian& ped, const ForceParams& params);

// 1 inside the field of view (or when standing still), anisotropy_floor outside.
double anisotropy(const Pedestrian& ped, WorldPoint other_pos, const ForceParams& params);

// Exponential repulsion of `a` away from `b`, weighted by a's anisotropy.
Vec2 repulsion_pedestrian(const Pedestrian& a, const Pedestrian& b, const ForceParams& params);

Vec2 repulsion_boundary(const Pedestrian& a, const Obstacle& obs, const ForceParams& params);

// Pull toward the POI, decaying linearly to zero over its duration.
Vec2 attraction_poi(const Pedestrian& a, const PointOfInterest& poi, double now, const ForceParams& params);

// Constant pull toward a fellow group member beyond group_distance.
Vec2 group_join_force(const Pedestrian& a, const Pedestrian& b, const ForceParams& params);

// Sum of every term acting on `a`. Entries of `others` with a's id are skipped.
Vec2 total_force(const Pedestrian& a, std::span<const Pedestrian> others, std::span<const Obstacle> obstacles,
                 std::span<const PointOfInterest> pois, double now, const ForceParams& params);

// Explicit Euler step with a speed clamp at max_speed_factor * desired_speed.
// Throws std::invalid_argument on dt <= 0 and std::runtime_error on a
// non-finite force.
Pedestrian integrate_step(const Pedestrian& a, Vec2 force, double dt, const ForceParams& params);

}  // namespace pedsim

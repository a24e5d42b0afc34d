#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pedsim/grid_map.hpp"
#include "pedsim/social_force.hpp"
#include "pedsim/static_jump_points.hpp"

namespace pedsim {

// Planning and Moving hand control back and forth; Done and Failed are terminal.
enum class ControlState { Planning, Moving, Done, Failed };

std::string_view state_name(ControlState s);  // "PLANNING", "MOVING", ...
bool is_terminal(ControlState s);

struct SpineSegment {
  WorldPoint a;
  WorldPoint b;
};

// A path as connected line segments plus a lateral tolerance.
struct PathSpine {
  std::vector<SpineSegment> segments;
  double radius = 1.0;

  // Segments between consecutive cell centers. A single point yields one
  // zero-length segment so the spine is never empty.
  static PathSpine from_cells(const GridMap& map, const std::vector<Cell>& points, double radius);
};

struct SpineProjection {
  WorldPoint point;
  double distance = 0.0;
  std::size_t segment = 0;
};

// Closest point over all segments, earliest segment on ties. Throws
// std::invalid_argument for an empty spine.
SpineProjection nearest_point_on_spine(const PathSpine& spine, WorldPoint p);

// Strictly farther than the radius from the spine.
bool detect_deviation(const PathSpine& spine, WorldPoint next_pos);

struct HandlerParams {
  double spine_radius = 2.0 * kDefaultCellSize;
  double waypoint_tolerance = kDefaultCellSize;
  int max_replans = 10;

  static HandlerParams for_cell_size(double cell_size);
  void validate() const;
};

struct AgentController {
  int pedestrian_id = 0;
  ControlState state = ControlState::Planning;
  std::optional<PathSpine> spine;  // present iff Moving
  std::vector<Cell> waypoints;     // jump points of the current plan
  std::size_t waypoint_index = 0;
  Cell goal;
  int replan_count = 0;
};

struct Transition {
  ControlState from;
  ControlState to;
};

// Read-only view of everything a tick may consult. `crowd` is the snapshot of
// all live pedestrians taken at the start of the step.
struct World {
  const GridMap& map;
  const StaticJumpPointIndex& index;
  std::span<const Obstacle> obstacles;
  std::span<const Pedestrian> crowd;
  std::span<const PointOfInterest> pois;
  const ForceParams& forces;
  const HandlerParams& handler;
  double now = 0.0;
};

// Retargets `ped` once it is within tolerance of the current waypoint; the
// final waypoint moves the agent to Done. Throws std::logic_error outside Moving.
std::optional<Transition> advance_waypoint(AgentController& agent, Pedestrian& ped, const GridMap& map,
                                           const HandlerParams& handler);

// Pulls a proposed move back out of blocked cells: the blocked axis is
// dropped (with its velocity component), or the pedestrian stays put.
Pedestrian constrain_to_free_space(const GridMap& map, const Pedestrian& before, Pedestrian after);

// One control step for one agent; mutates only `agent` and `ped`.
// Throws std::logic_error (naming the agent) on terminal states or broken invariants.
std::optional<Transition> tick(AgentController& agent, Pedestrian& ped, const World& world, double dt);

}  // namespace pedsim

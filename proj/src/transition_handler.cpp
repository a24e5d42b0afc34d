#include "pedsim/transition_handler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pedsim/pathfinder.hpp"

namespace pedsim {

std::string_view state_name(ControlState s) {
  switch (s) {
    case ControlState::Planning:
      return "PLANNING";
    case ControlState::Moving:
      return "MOVING";
    case ControlState::Done:
      return "DONE";
    case ControlState::Failed:
      return "FAILED";
  }
  return "UNKNOWN";
}

bool is_terminal(ControlState s) { return s == ControlState::Done || s == ControlState::Failed; }

PathSpine PathSpine::from_cells(const GridMap& map, const std::vector<Cell>& points, double radius) {
  if (points.empty()) throw std::invalid_argument("PathSpine: no points");
  if (!(radius > 0.0)) throw std::invalid_argument("PathSpine: radius must be positive");
  PathSpine spine;
  spine.radius = radius;
  if (points.size() == 1) {
    const WorldPoint p = map.cell_to_world(points.front());
    spine.segments.push_back({p, p});
    return spine;
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    spine.segments.push_back({map.cell_to_world(points[i - 1]), map.cell_to_world(points[i])});
  }
  return spine;
}

SpineProjection nearest_point_on_spine(const PathSpine& spine, WorldPoint p) {
  if (spine.segments.empty()) throw std::invalid_argument("nearest_point_on_spine: empty spine");
  SpineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spine.segments.size(); ++i) {
    const auto& [a, b] = spine.segments[i];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    const WorldPoint q = a + ab * t;
    const double d = distance(p, q);
    if (d < best.distance) best = {q, d, i};
  }
  return best;
}

bool detect_deviation(const PathSpine& spine, WorldPoint next_pos) {
  return nearest_point_on_spine(spine, next_pos).distance > spine.radius;
}

HandlerParams HandlerParams::for_cell_size(double cell_size) {
  HandlerParams p;
  p.spine_radius = 2.0 * cell_size;
  p.waypoint_tolerance = cell_size;
  return p;
}

void HandlerParams::validate() const {
  if (!(spine_radius > 0.0)) throw std::invalid_argument("handler 'spine_radius' must be positive");
  if (!(waypoint_tolerance > 0.0)) throw std::invalid_argument("handler 'waypoint_tolerance' must be positive");
  if (max_replans < 0) throw std::invalid_argument("handler 'max_replans' must be non-negative");
}

namespace {

[[noreturn]] void invariant_failure(const AgentController& agent, const std::string& what) {
  throw std::logic_error("agent " + std::to_string(agent.pedestrian_id) + ": " + what);
}

std::optional<Transition> move_to(AgentController& agent, ControlState to) {
  const Transition t{agent.state, to};
  agent.state = to;
  if (to != ControlState::Moving) agent.spine.reset();
  return t;
}

bool free_point(const GridMap& map, WorldPoint p) {
  const double s = map.cell_size();
  if (!is_finite(p) || p.x < 0.0 || p.y < 0.0 || p.x >= map.width() * s || p.y >= map.height() * s) return false;
  return map.is_traversable(map.world_to_cell(p));
}

std::optional<Transition> plan(AgentController& agent, Pedestrian& ped, const World& world) {
  const GridMap& map = world.map;
  if (!free_point(map, ped.position)) return move_to(agent, ControlState::Failed);
  const Cell start = map.world_to_cell(ped.position);
  if (!map.is_traversable(agent.goal)) return move_to(agent, ControlState::Failed);

  SearchResult result = jps_s_search(map, world.index, start, agent.goal);
  if (!result.found()) return move_to(agent, ControlState::Failed);
  if (!validate_path(map, *result.path)) invariant_failure(agent, "planner returned an invalid path");

  agent.waypoints = std::move(result.path->points);
  agent.spine = PathSpine::from_cells(map, agent.waypoints, world.handler.spine_radius);
  agent.waypoint_index = std::min<std::size_t>(1, agent.waypoints.size() - 1);
  ped.target = map.cell_to_world(agent.waypoints[agent.waypoint_index]);
  return move_to(agent, ControlState::Moving);
}

}  // namespace

std::optional<Transition> advance_waypoint(AgentController& agent, Pedestrian& ped, const GridMap& map,
                                           const HandlerParams& handler) {
  if (agent.state != ControlState::Moving) invariant_failure(agent, "advance_waypoint outside MOVING");
  if (agent.waypoint_index >= agent.waypoints.size()) invariant_failure(agent, "waypoint cursor past the path");
  const WorldPoint wp = map.cell_to_world(agent.waypoints[agent.waypoint_index]);
  if (distance(ped.position, wp) > handler.waypoint_tolerance) return std::nullopt;
  if (agent.waypoint_index + 1 == agent.waypoints.size()) return move_to(agent, ControlState::Done);
  ++agent.waypoint_index;
  ped.target = map.cell_to_world(agent.waypoints[agent.waypoint_index]);
  return std::nullopt;
}

Pedestrian constrain_to_free_space(const GridMap& map, const Pedestrian& before, Pedestrian after) {
  if (free_point(map, after.position)) return after;
  if (const WorldPoint slide_x{after.position.x, before.position.y}; free_point(map, slide_x)) {
    after.position = slide_x;
    after.velocity.y = 0.0;
    return after;
  }
  if (const WorldPoint slide_y{before.position.x, after.position.y}; free_point(map, slide_y)) {
    after.position = slide_y;
    after.velocity.x = 0.0;
    return after;
  }
  after.position = before.position;
  after.velocity = {};
  return after;
}

std::optional<Transition> tick(AgentController& agent, Pedestrian& ped, const World& world, double dt) {
  if (agent.pedestrian_id != ped.id) invariant_failure(agent, "controller bound to pedestrian " + std::to_string(ped.id));
  switch (agent.state) {
    case ControlState::Planning:
      if (agent.spine) invariant_failure(agent, "spine present while PLANNING");
      return plan(agent, ped, world);

    case ControlState::Moving: {
      if (!agent.spine) invariant_failure(agent, "MOVING without a spine");
      const Vec2 force = total_force(ped, world.crowd, world.obstacles, world.pois, world.now, world.forces);
      const Pedestrian next = constrain_to_free_space(world.map, ped, integrate_step(ped, force, dt, world.forces));
      if (detect_deviation(*agent.spine, next.position)) {
        // The deviating move is discarded; re-planning starts from here next tick.
        if (agent.replan_count >= world.handler.max_replans) return move_to(agent, ControlState::Failed);
        ++agent.replan_count;
        return move_to(agent, ControlState::Planning);
      }
      ped = next;
      return advance_waypoint(agent, ped, world.map, world.handler);
    }

    case ControlState::Done:
    case ControlState::Failed:
      break;
  }
  invariant_failure(agent, "tick on terminal state " + std::string(state_name(agent.state)));
}

}  // namespace pedsim

#include "pedsim/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "pedsim/pathfinder.hpp"
#include "pedsim/random.hpp"
#include "pedsim/static_jump_points.hpp"

namespace pedsim {

void Scenario::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("scenario: dt must be positive");
  if (max_steps <= 0) throw std::invalid_argument("scenario: max_steps must be positive");
  params.validate();
  handler.validate();
  for (std::size_t i = 0; i < pedestrians.size(); ++i) {
    const PedestrianSpec& p = pedestrians[i];
    const std::string who = "scenario: pedestrian " + std::to_string(i);
    const double s = map.cell_size();
    if (!is_finite(p.spawn) || p.spawn.x < 0 || p.spawn.y < 0 || p.spawn.x >= map.width() * s ||
        p.spawn.y >= map.height() * s || !map.is_traversable(map.world_to_cell(p.spawn))) {
      throw std::invalid_argument(who + " spawns outside free space");
    }
    if (!map.is_traversable(p.goal)) throw std::invalid_argument(who + " has a blocked goal " + to_string(p.goal));
    if (!(p.desired_speed > 0.0)) throw std::invalid_argument(who + " needs a positive desired_speed");
  }
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"narrow_walkway", "narrow_passage", "path_following"};
  return names;
}

namespace {

int cells_for(double meters, double cell_size) {
  const int n = static_cast<int>(std::ceil(meters / cell_size - 1e-9));
  if (n <= 0) throw std::invalid_argument("benchmark dimension must be positive");
  return n;
}

// Cell centre plus a small seeded offset that keeps the point inside the cell.
WorldPoint jittered(const GridMap& map, Cell c, Rng& rng) {
  const double j = 0.2 * map.cell_size();
  return map.cell_to_world(c) + Vec2{uniform(rng, -j, j), uniform(rng, -j, j)};
}

// Free cells of the block [x0, x1) x [y0, y1), column by column.
std::vector<Cell> block_cells(const GridMap& map, int x0, int x1, int y0, int y1) {
  std::vector<Cell> out;
  for (int x = x0; x < x1; ++x)
    for (int y = y0; y < y1; ++y)
      if (map.is_traversable(x, y)) out.push_back({x, y});
  return out;
}

void require_room(const std::vector<Cell>& cells, int needed, std::string_view what) {
  if (static_cast<int>(cells.size()) < needed) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(needed) + " pedestrians do not fit (" +
                                std::to_string(cells.size()) + " cells)");
  }
}

// 4 m x 40 m corridor between two wall rows; the groups start at opposite
// ends and swap places.
Scenario narrow_walkway(const BenchmarkOptions& o) {
  const double cs = o.cell_size;
  const int len = cells_for(o.corridor_length.value_or(40.0), cs);
  const int wide = cells_for(o.corridor_width.value_or(4.0), cs);
  const int group = o.group_size.value_or(50);
  Scenario s;
  s.name = "narrow_walkway";
  s.map = GridMap(len, wide + 2, cs);
  for (int x = 0; x < len; ++x) {
    s.map.set_blocked({x, 0}, true);
    s.map.set_blocked({x, wide + 1}, true);
  }
  const int depth = (group + wide - 1) / wide;
  if (2 * depth > len) throw std::invalid_argument("narrow_walkway: corridor too short for the groups");
  const auto left = block_cells(s.map, 0, depth, 1, wide + 1);
  require_room(left, group, "narrow_walkway");
  Rng rng(o.seed);
  for (int k = 0; k < group; ++k) {
    const Cell c = left[static_cast<std::size_t>(k)];
    const Cell mirror{len - 1 - c.x, c.y};
    s.pedestrians.push_back({jittered(s.map, c, rng), mirror, std::nullopt, 1.34});
    s.pedestrians.push_back({jittered(s.map, mirror, rng), c, std::nullopt, 1.34});
  }
  return s;
}

// Room split by a wall with one door; everyone starts on the west side.
Scenario narrow_passage(const BenchmarkOptions& o) {
  const double cs = o.cell_size;
  const int side = cells_for(10.0, cs);  // each half is 10 m x 10 m
  const int door = cells_for(o.door_width.value_or(1.2), cs);
  const int group = o.group_size.value_or(100);
  if (door >= side) throw std::invalid_argument("narrow_passage: door wider than the wall");
  Scenario s;
  s.name = "narrow_passage";
  s.map = GridMap(2 * side + 1, side, cs);
  const int door_lo = (side - door) / 2;
  for (int y = 0; y < side; ++y) {
    if (y < door_lo || y >= door_lo + door) s.map.set_blocked({side, y}, true);
  }
  // Spawn and goal blocks sit away from the walls, mirrored about the divider.
  const int margin = std::max(1, side / 10);
  const auto west = block_cells(s.map, margin, side - 2 * margin, margin, side - margin);
  require_room(west, group, "narrow_passage");
  Rng rng(o.seed);
  for (int k = 0; k < group; ++k) {
    const Cell c = west[static_cast<std::size_t>(k)];
    const Cell goal{2 * side - c.x, c.y};
    s.pedestrians.push_back({jittered(s.map, c, rng), goal, std::nullopt, 1.34});
  }
  return s;
}

// Open 30 m x 20 m area with pillars; two groups share one goal region.
Scenario path_following(const BenchmarkOptions& o) {
  const double cs = o.cell_size;
  const int w = cells_for(30.0, cs);
  const int h = cells_for(20.0, cs);
  const int group = o.group_size.value_or(100);
  Scenario s;
  s.name = "path_following";
  s.map = GridMap(w, h, cs);
  // Pillars in fractions of the map so other cell sizes keep the layout.
  const double pillars[][4] = {
      {0.33, 0.20, 0.40, 0.33}, {0.33, 0.65, 0.40, 0.78}, {0.53, 0.40, 0.60, 0.58},
      {0.73, 0.15, 0.80, 0.28}, {0.73, 0.70, 0.80, 0.83},
  };
  for (const auto& p : pillars) {
    for (int x = static_cast<int>(p[0] * w); x < static_cast<int>(p[2] * w); ++x)
      for (int y = static_cast<int>(p[1] * h); y < static_cast<int>(p[3] * h); ++y) s.map.set_blocked({x, y}, true);
  }
  const int x0 = w / 30;
  const int band = std::max(1, (group + h / 4 - 1) / (h / 4));
  const auto south = block_cells(s.map, x0, x0 + band, h / 20, h / 20 + h / 4);
  const auto north = block_cells(s.map, x0, x0 + band, h - h / 20 - h / 4, h - h / 20);
  require_room(south, group, "path_following");
  require_room(north, group, "path_following");
  const auto goals = block_cells(s.map, w - w / 6, w, h / 4, h - h / 4);
  require_room(goals, 2 * group, "path_following goal region");
  Rng rng(o.seed);
  for (int k = 0; k < group; ++k) {
    const auto i = static_cast<std::size_t>(k);
    s.pedestrians.push_back({jittered(s.map, south[i], rng), goals[2 * i], std::nullopt, 1.34});
    s.pedestrians.push_back({jittered(s.map, north[i], rng), goals[2 * i + 1], std::nullopt, 1.34});
  }
  return s;
}

}  // namespace

Scenario build_scenario(std::string_view name, const BenchmarkOptions& options) {
  if (!(options.cell_size > 0.0)) throw std::invalid_argument("benchmark cell_size must be positive");
  if (options.group_size && *options.group_size < 0) throw std::invalid_argument("group size must be non-negative");
  Scenario s;
  if (name == "narrow_walkway") {
    s = narrow_walkway(options);
  } else if (name == "narrow_passage") {
    s = narrow_passage(options);
  } else if (name == "path_following") {
    s = path_following(options);
  } else {
    std::string valid;
    for (const auto& n : benchmark_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown benchmark '" + std::string(name) + "' (valid: " + valid + ")");
  }
  s.handler = HandlerParams::for_cell_size(options.cell_size);
  s.seed = options.seed;
  return s;
}

std::string_view trace_header() { return "step,agent_id,x,y,vx,vy,state,waypoint_index"; }

void emit_trace(std::ostream& out, int step, const std::vector<AgentRecord>& agents) {
  for (const AgentRecord& a : agents) {
    out << step << ',' << a.agent_id << ',' << format_double(a.position.x) << ',' << format_double(a.position.y) << ','
        << format_double(a.velocity.x) << ',' << format_double(a.velocity.y) << ',';
    if (a.transition) {
      out << state_name(a.transition->from) << "->" << state_name(a.transition->to);
    } else {
      out << state_name(a.state);
    }
    out << ',' << a.waypoint_index << '\n';
  }
  if (!out) throw std::runtime_error("trace write failed at step " + std::to_string(step));
}

namespace {

ControlState parse_state(std::string_view s) {
  for (ControlState c : {ControlState::Planning, ControlState::Moving, ControlState::Done, ControlState::Failed}) {
    if (state_name(c) == s) return c;
  }
  throw std::invalid_argument("trace: unknown state '" + std::string(s) + "'");
}

template <typename T>
T parse_number(std::string_view field, std::string_view what) {
  T v{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || end != field.data() + field.size()) {
    throw std::invalid_argument("trace: bad " + std::string(what) + " '" + std::string(field) + "'");
  }
  return v;
}

bool inside_free_space(const GridMap& map, WorldPoint p) {
  const double s = map.cell_size();
  if (!is_finite(p) || p.x < 0.0 || p.y < 0.0 || p.x >= map.width() * s || p.y >= map.height() * s) return false;
  return map.is_traversable(map.world_to_cell(p));
}

}  // namespace

TraceRow parse_trace_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> f;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (f.size() != 8) throw std::invalid_argument("trace: expected 8 fields, got " + std::to_string(f.size()));
  TraceRow row;
  row.step = parse_number<int>(f[0], "step");
  AgentRecord& r = row.record;
  r.agent_id = parse_number<int>(f[1], "agent_id");
  r.position = {parse_number<double>(f[2], "x"), parse_number<double>(f[3], "y")};
  r.velocity = {parse_number<double>(f[4], "vx"), parse_number<double>(f[5], "vy")};
  if (const std::size_t arrow = f[6].find("->"); arrow != std::string_view::npos) {
    r.transition = Transition{parse_state(f[6].substr(0, arrow)), parse_state(f[6].substr(arrow + 2))};
    r.state = r.transition->to;
  } else {
    r.state = parse_state(f[6]);
  }
  r.waypoint_index = parse_number<std::size_t>(f[7], "waypoint_index");
  return row;
}

TraceAudit audit_trace(const GridMap& map, std::istream& in) {
  TraceAudit audit;
  std::string line;
  if (!std::getline(in, line) || line.substr(0, trace_header().size()) != trace_header()) {
    throw std::invalid_argument("trace: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const TraceRow row = parse_trace_row(line);
    ++audit.rows;
    if (row.record.transition) ++audit.transition_rows;
    if (!inside_free_space(map, row.record.position)) {
      if (!audit.first_penetration) audit.first_penetration = row;
      ++audit.penetrations;
    }
  }
  return audit;
}

SimulationResult run_simulation(const Scenario& s, std::ostream* trace) {
  s.validate();
  const auto started = std::chrono::steady_clock::now();
  const StaticJumpPointIndex index = precompute_sjp(s.map);
  const std::vector<Obstacle> obstacles = obstacles_from_map(s.map);

  // Ids are list positions, but agents are processed (and summed over) in an
  // order fixed by spawn and goal, so permuting the list only relabels them.
  const std::size_t n = s.pedestrians.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const PedestrianSpec& p = s.pedestrians[a];
    const PedestrianSpec& q = s.pedestrians[b];
    return std::tie(p.spawn.x, p.spawn.y, p.goal, p.desired_speed, p.group_id) <
           std::tie(q.spawn.x, q.spawn.y, q.goal, q.desired_speed, q.group_id);
  });
  std::vector<Pedestrian> peds(n);
  std::vector<AgentController> agents(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PedestrianSpec& spec = s.pedestrians[order[i]];
    peds[i].id = static_cast<int>(order[i]);
    peds[i].position = spec.spawn;
    peds[i].target = spec.spawn;
    peds[i].desired_speed = spec.desired_speed;
    peds[i].group_id = spec.group_id;
    agents[i].pedestrian_id = static_cast<int>(order[i]);
    agents[i].goal = spec.goal;
  }

  if (trace) *trace << trace_header() << '\n';
  SimulationResult result;
  result.total = static_cast<int>(n);
  std::vector<Pedestrian> snapshot;
  std::vector<std::size_t> live;
  std::vector<AgentRecord> records;
  for (int step = 0; step < s.max_steps; ++step) {
    live.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (!is_terminal(agents[i].state)) live.push_back(i);
    if (live.empty()) break;

    // Phase one reads only the snapshot, so the order of ticks is irrelevant.
    snapshot.clear();
    for (std::size_t i : live) snapshot.push_back(peds[i]);
    const World world{s.map, index, obstacles, snapshot, s.pois, s.params, s.handler, step * s.dt};
    records.clear();
    for (std::size_t k = 0; k < live.size(); ++k) {
      const std::size_t i = live[k];
      Pedestrian next = snapshot[k];
      std::optional<Transition> t;
      try {
        t = tick(agents[i], next, world, s.dt);
      } catch (const std::exception& e) {
        throw std::runtime_error("step " + std::to_string(step) + ": " + e.what());
      }
      peds[i] = next;  // phase two: commit
      AgentRecord r{agents[i].pedestrian_id, next.position, next.velocity, agents[i].state, agents[i].waypoint_index,
                    std::nullopt};
      if (t) {
        AgentRecord tr = r;
        tr.transition = t;
        records.push_back(tr);
      }
      records.push_back(r);
    }
    result.steps_used = step + 1;
    if (trace) {
      std::stable_sort(records.begin(), records.end(),
                       [](const AgentRecord& a, const AgentRecord& b) { return a.agent_id < b.agent_id; });
      emit_trace(*trace, step, records);
    }
  }

  for (const AgentController& a : agents) {
    if (a.state == ControlState::Done) ++result.completed;
    if (a.state == ControlState::Failed) ++result.failed;
    result.replans += a.replan_count;
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace pedsim

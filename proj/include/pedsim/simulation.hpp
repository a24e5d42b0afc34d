#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedsim/grid_map.hpp"
#include "pedsim/social_force.hpp"
#include "pedsim/transition_handler.hpp"

namespace pedsim {

struct PedestrianSpec {
  WorldPoint spawn;
  Cell goal;
  std::optional<int> group_id;
  double desired_speed = 1.34;
};

struct Scenario {
  std::string name = "custom";
  GridMap map{1, 1};
  std::vector<PedestrianSpec> pedestrians;
  std::vector<PointOfInterest> pois;
  ForceParams params;
  HandlerParams handler;
  double dt = 0.05;
  int max_steps = 20000;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument: spawns and goals must be traversable,
  // dt > 0, max_steps > 0, parameters valid.
  void validate() const;
};

// Geometry knobs of the named benchmarks. Unset fields keep the defaults
// of the chosen benchmark.
struct BenchmarkOptions {
  double cell_size = kDefaultCellSize;
  std::optional<double> corridor_length;  // narrow_walkway [m]
  std::optional<double> corridor_width;   // narrow_walkway [m]
  std::optional<double> door_width;       // narrow_passage [m]
  std::optional<int> group_size;          // pedestrians per group
  std::uint64_t seed = 1;                 // spawn jitter
};

const std::vector<std::string>& benchmark_names();

// narrow_walkway, narrow_passage or path_following. Throws
// std::invalid_argument listing the valid names otherwise.
Scenario build_scenario(std::string_view name, const BenchmarkOptions& options = {});

struct AgentRecord {
  int agent_id = 0;
  WorldPoint position;
  Vec2 velocity;
  ControlState state = ControlState::Planning;
  std::size_t waypoint_index = 0;
  std::optional<Transition> transition;  // set on transition rows
};

struct SimulationResult {
  int total = 0;
  int completed = 0;
  int failed = 0;
  int steps_used = 0;
  double wall_time = 0.0;  // seconds
  int replans = 0;         // summed over agents
};

// Steps until every agent is terminal or max_steps is reached. Each step
// ticks every live agent against one snapshot and commits afterwards. Trace
// rows go to `trace` when given. Errors from a tick are rethrown as
// std::runtime_error carrying the step number.
SimulationResult run_simulation(const Scenario& s, std::ostream* trace = nullptr);

// CSV header line without newline.
std::string_view trace_header();

// One row per record; transition rows carry "FROM->TO" in the state column.
void emit_trace(std::ostream& out, int step, const std::vector<AgentRecord>& agents);

struct TraceRow {
  int step = 0;
  AgentRecord record;
};

// Parses one data row. Throws std::invalid_argument on malformed input.
TraceRow parse_trace_row(std::string_view line);

struct TraceAudit {
  std::size_t rows = 0;
  std::size_t transition_rows = 0;
  std::size_t penetrations = 0;  // positions outside free space
  std::optional<TraceRow> first_penetration;
};

// Reads a full trace (header first) and checks every position against `map`.
TraceAudit audit_trace(const GridMap& map, std::istream& in);

}  // namespace pedsim

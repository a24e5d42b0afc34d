#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "pedsim/bench.hpp"
#include "pedsim/config.hpp"
#include "pedsim/grid_map.hpp"
#include "pedsim/map_generators.hpp"
#include "pedsim/pathfinder.hpp"
#include "pedsim/random.hpp"
#include "pedsim/simulation.hpp"
#include "pedsim/static_jump_points.hpp"

namespace pedsim::cli {

LogLevel log_level_from_env() {
  const char* v = std::getenv("PEDSIM_LOG");
  if (!v) return LogLevel::Warn;
  const std::string s(v);
  if (s == "error") return LogLevel::Error;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

void Io::log(LogLevel at, const std::string& msg) const {
  if (at > level) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  err << "[" << names[static_cast<int>(at)] << "] " << msg << "\n";
}

namespace {

Cell parse_cell(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    const int x = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("");
    const std::string rest = text.substr(comma + 1);
    const int y = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
    return {x, y};
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + " must look like x,y (got '" + text + "')");
  }
}

void check_endpoint(const GridMap& map, Cell c, const char* what) {
  if (!map.in_bounds(c)) throw std::invalid_argument(std::string(what) + " " + to_string(c) + " is outside the map");
  if (!map.is_traversable(c)) throw std::invalid_argument(std::string(what) + " " + to_string(c) + " is blocked");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int cmd_plan(const PlanArgs& a, const Io& io) {
  try {
    const GridMap map = GridMap::load(a.map_file, a.cell_size);
    const Cell start = parse_cell(a.start, "--start");
    const Cell goal = parse_cell(a.goal, "--goal");
    check_endpoint(map, start, "start");
    check_endpoint(map, goal, "goal");
    io.log(LogLevel::Info, "map " + std::to_string(map.width()) + "x" + std::to_string(map.height()));

    std::optional<Path> path;
    std::size_t expanded = 0;
    double elapsed = 0.0;
    if (a.algorithm == "jps") {
      const SearchResult r = jps_search(map, start, goal);
      path = r.path;
      expanded = r.stats.expanded_nodes;
      elapsed = r.stats.elapsed;
    } else if (a.algorithm == "jpss") {
      const auto t0 = std::chrono::steady_clock::now();
      const StaticJumpPointIndex index = precompute_sjp(map);
      io.log(LogLevel::Info, "preprocessing " + format_double(seconds_since(t0)) + " s, " +
                                 std::to_string(index.size()) + " static jump points");
      const SearchResult r = jps_s_search(map, index, start, goal);
      path = r.path;
      expanded = r.stats.expanded_nodes;
      elapsed = r.stats.elapsed;
    } else if (a.algorithm == "oracle") {
      // The oracle yields a length only; the path block carries no points.
      const auto t0 = std::chrono::steady_clock::now();
      const auto cells = dijkstra_oracle(map, start, goal);
      elapsed = seconds_since(t0);
      if (cells) path = Path{{}, *cells * map.cell_size()};
    } else {
      throw std::invalid_argument("unknown algorithm '" + a.algorithm + "' (jps, jpss, oracle)");
    }

    if (!path) {
      io.err << "no path from " << to_string(start) << " to " << to_string(goal) << "\n";
      return kNoPath;
    }
    if (a.out_file.empty()) {
      io.out << serialize_path(*path);
    } else {
      std::ofstream f(a.out_file);
      f << serialize_path(*path);
      if (!f) throw std::runtime_error("cannot write '" + a.out_file + "'");
    }
    io.out << "algorithm=" << a.algorithm << " length=" << format_double(path->length) << " expanded=" << expanded
           << " time=" << format_double(elapsed) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int cmd_simulate(const SimulateArgs& a, const Io& io) {
  Scenario s;
  try {
    bool named = false;
    for (const auto& n : benchmark_names()) named = named || n == a.scenario;
    if (named) {
      BenchmarkOptions o;
      if (a.seed) o.seed = *a.seed;
      s = build_scenario(a.scenario, o);
    } else {
      s = load_scenario_config(a.scenario, a.seed);
    }
    if (a.max_steps) {
      if (*a.max_steps <= 0) throw std::invalid_argument("--max-steps must be positive");
      s.max_steps = *a.max_steps;
    }
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsage;
  }
  io.log(LogLevel::Info, "scenario " + s.name + ": " + std::to_string(s.pedestrians.size()) + " pedestrians on " +
                             std::to_string(s.map.width()) + "x" + std::to_string(s.map.height()));

  SimulationResult r;
  try {
    std::ofstream file;
    std::ostream* trace = nullptr;
    if (a.trace_file == "-") {
      trace = &io.out;
    } else if (!a.trace_file.empty()) {
      file.open(a.trace_file);
      if (!file) throw std::runtime_error("cannot write '" + a.trace_file + "'");
      trace = &file;
    }
    r = run_simulation(s, trace);
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::ostream& summary = a.trace_file == "-" ? io.err : io.out;
  summary << "completed=" << r.completed << " failed=" << r.failed << " steps=" << r.steps_used << "\n";
  const int unfinished = r.total - r.completed - r.failed;
  io.log(LogLevel::Info, "replans=" + std::to_string(r.replans) + " wall_time=" + format_double(r.wall_time));
  if (unfinished > 0) io.log(LogLevel::Warn, std::to_string(unfinished) + " agents still running at max_steps");
  return r.failed == 0 && unfinished == 0 ? kOk : kValidationFailed;
}

int cmd_bench(const BenchArgs& a, const Io& io) {
  try {
    if (a.queries <= 0 || a.reps <= 0 || a.threads <= 0) {
      throw std::invalid_argument("--queries, --reps and --threads must be positive");
    }
    GridMap map(1, 1);
    if (!a.map_file.empty()) {
      map = GridMap::load(a.map_file, a.cell_size);
    } else {
      if (a.size <= 1) throw std::invalid_argument("--size must be at least 2");
      map = random_block_map(a.size, a.size, a.coverage, a.map_seed, 3, 14, a.cell_size);
    }
    io.log(LogLevel::Info, "bench map " + std::to_string(map.width()) + "x" + std::to_string(map.height()) + ", " +
                               std::to_string(map.blocked_count()) + " blocked cells");
    const BenchReport r = bench_pathfinding(map, a.queries, a.reps, a.seed, a.threads);
    io.out << format_report_table(r) << "\n" << format_report_csv(r);
    if (!a.csv_file.empty()) {
      std::ofstream f(a.csv_file);
      f << format_report_csv(r);
      if (!f) throw std::runtime_error("cannot write '" + a.csv_file + "'");
    }
    return kOk;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int cmd_validate(const ValidateArgs& a, const Io& io) {
  if (a.trials < 0) {
    io.err << "error: --trials must be non-negative\n";
    return kUsage;
  }
  std::optional<GridMap> fixed;
  try {
    if (!a.map_file.empty()) fixed = GridMap::load(a.map_file, a.cell_size);
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (a.trials == 0) {
    io.err << "warning: 0 trials, nothing checked\n";
    io.out << "trials=0 passed=0 failed=0 solvable=0\n";
    return kOk;
  }

  Rng rng(a.seed);
  std::optional<StaticJumpPointIndex> fixed_index;
  int passed = 0, failed = 0, solvable = 0;
  const double densities[] = {0.10, 0.20, 0.35};
  for (int t = 0; t < a.trials; ++t) {
    const GridMap map = fixed ? *fixed : random_scatter_map(64, 64, densities[t % 3], rng(), a.cell_size);
    std::optional<StaticJumpPointIndex> own;
    if (!fixed || !fixed_index) {
      StaticJumpPointIndex built = precompute_sjp(map);
      if (a.corrupt_index) built = corrupt_index_for_testing(std::move(built));
      (fixed ? fixed_index : own) = std::move(built);
    }
    const StaticJumpPointIndex& index = fixed ? *fixed_index : *own;
    Cell s, g;
    int guard = 0;
    do {
      s = {uniform_int(rng, map.width()), uniform_int(rng, map.height())};
      g = {uniform_int(rng, map.width()), uniform_int(rng, map.height())};
    } while ((!map.is_traversable(s) || !map.is_traversable(g)) && ++guard < 100000);
    if (guard >= 100000) {
      io.err << "error: map has no traversable cells\n";
      return kUsage;
    }

    const auto oracle = dijkstra_oracle(map, s, g);
    const SearchResult a1 = jps_search(map, s, g);
    const SearchResult a2 = jps_s_search(map, index, s, g);
    auto agrees = [&](const SearchResult& r) {
      if (!oracle) return !r.found();
      if (!r.found() || !validate_path(map, *r.path)) return false;
      const double want = *oracle * map.cell_size();
      return std::abs(r.path->length - want) <= 1e-9 * std::max(1.0, want);
    };
    if (oracle) ++solvable;
    if (agrees(a1) && agrees(a2)) {
      ++passed;
      continue;
    }
    ++failed;
    if (failed == 1) {
      auto len = [&](const SearchResult& r) { return r.found() ? format_double(r.path->length) : std::string("none"); };
      io.err << "counterexample (trial " << t << "):\n"
             << map.to_ascii() << "start=" << to_string(s) << " goal=" << to_string(g)
             << " cell_size=" << format_double(map.cell_size()) << "\n"
             << "oracle=" << (oracle ? format_double(*oracle * map.cell_size()) : std::string("none"))
             << " jps=" << len(a1) << " jpss=" << len(a2) << "\n";
    }
  }
  io.out << "trials=" << a.trials << " passed=" << passed << " failed=" << failed << " solvable=" << solvable << "\n";
  return failed == 0 ? kOk : kValidationFailed;
}

}  // namespace pedsim::cli

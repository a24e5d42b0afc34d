#include <algorithm>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace pedsim::cli;
  CLI::App app{"Grid pathfinding (JPS / JPS-S) and social-force crowd simulation"};
  app.require_subcommand(1);
  const Io io{std::cout, std::cerr, log_level_from_env()};

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Find a path on a map file");
  p->add_option("map", plan.map_file, "Map file (W H header, movingai, or bare rows)")->required();
  p->add_option("--start", plan.start, "Start cell x,y")->required();
  p->add_option("--goal", plan.goal, "Goal cell x,y")->required();
  p->add_option("--algorithm,-a", plan.algorithm, "jps, jpss or oracle")
      ->check(CLI::IsMember({"jps", "jpss", "oracle"}))
      ->capture_default_str();
  p->add_option("--out,-o", plan.out_file, "Write the path here instead of stdout");
  p->add_option("--cell-size", plan.cell_size, "Cell edge in meters")->capture_default_str();

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run a named benchmark or a JSON scenario");
  s->add_option("scenario", sim.scenario, "narrow_walkway, narrow_passage, path_following or a config file")
      ->required();
  s->add_option("--trace,-t", sim.trace_file, "CSV trace output ('-' for stdout)");
  s->add_option("--seed", sim.seed, "Seed for spawn placement");
  s->add_option("--max-steps", sim.max_steps, "Override the step budget");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time JPS against JPS-S over random queries");
  b->add_option("--map", bench.map_file, "Map file (default: generated block map)");
  b->add_option("--size", bench.size, "Side of the generated map")->capture_default_str();
  b->add_option("--coverage", bench.coverage, "Blocked fraction of the generated map")->capture_default_str();
  b->add_option("--map-seed", bench.map_seed, "Seed of the generated map")->capture_default_str();
  b->add_option("--queries", bench.queries, "Queries per repetition")->capture_default_str();
  b->add_option("--reps", bench.reps, "Repetitions")->capture_default_str();
  b->add_option("--seed", bench.seed, "Query seed")->capture_default_str();
  b->add_option("--threads", bench.threads, "Threads per batch (1 = single-threaded timing)")->capture_default_str();
  b->add_flag_callback("--parallel", [&] { bench.threads = 0; }, "Use every hardware thread");
  b->add_option("--csv", bench.csv_file, "Also write the CSV block here");
  b->add_option("--cell-size", bench.cell_size, "Cell edge in meters")->capture_default_str();

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check JPS and JPS-S against the Dijkstra oracle");
  v->add_option("map", val.map_file, "Map file (default: random 64x64 maps)");
  v->add_option("--trials", val.trials, "Random instances")->capture_default_str();
  v->add_option("--seed", val.seed, "Seed")->capture_default_str();
  v->add_option("--cell-size", val.cell_size, "Cell edge in meters")->capture_default_str();
  v->add_flag("--corrupt-index", val.corrupt_index)->group("");  // test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  if (*p) return cmd_plan(plan, io);
  if (*s) return cmd_simulate(sim, io);
  if (*b) {
    if (bench.threads == 0) bench.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return cmd_bench(bench, io);
  }
  return cmd_validate(val, io);
}

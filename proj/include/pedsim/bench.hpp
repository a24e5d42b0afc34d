#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pedsim/grid_map.hpp"

namespace pedsim {

struct TimingStats {
  double mean = 0.0;  // seconds per repetition (all queries)
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // population
  std::vector<double> samples;
};

TimingStats summarize(std::vector<double> samples);

struct BenchReport {
  int query_count = 0;
  int repetition_count = 0;
  int threads = 1;
  TimingStats jps;
  TimingStats jpss;
  double preprocessing_seconds = 0.0;  // building the static jump point index
  std::size_t static_jump_points = 0;
  double speedup_percent = 0.0;  // (mean_jps - mean_jpss) / mean_jps * 100
  double total_length = 0.0;     // sum of path lengths [m], identical for both
  std::size_t jps_jump_points = 0;
  std::size_t jpss_jump_points = 0;
};

// `count` (start, goal) pairs with both endpoints traversable, distinct and
// in the same connected component. Throws std::invalid_argument when no
// component holds two cells.
std::vector<std::pair<Cell, Cell>> generate_queries(const GridMap& map, int count, std::uint64_t seed);

// Times JPS and JPS-S over the same query set `repetitions` times, alternating
// which algorithm runs first. Throws std::runtime_error if any query yields
// different path lengths. threads > 1 splits each batch across threads.
BenchReport bench_pathfinding(const GridMap& map, int query_count, int repetitions, std::uint64_t seed,
                              int threads = 1);

// Human-readable table and a CSV block (header + one row per algorithm).
std::string format_report_table(const BenchReport& r);
std::string format_report_csv(const BenchReport& r);

}  // namespace pedsim

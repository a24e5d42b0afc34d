#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace pedsim::cli {

// Stable exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kNoPath = 2;
inline constexpr int kValidationFailed = 3;

enum class LogLevel { Error, Warn, Info, Debug };

// From PEDSIM_LOG (error|warn|info|debug); warn when unset or unknown.
LogLevel log_level_from_env();

struct Io {
  std::ostream& out;
  std::ostream& err;
  LogLevel level = LogLevel::Warn;

  void log(LogLevel at, const std::string& msg) const;
};

struct PlanArgs {
  std::string map_file;
  std::string start;  // "x,y"
  std::string goal;
  std::string algorithm = "jpss";  // jps | jpss | oracle
  std::string out_file;            // empty: stdout
  double cell_size = 0.5;
};
int cmd_plan(const PlanArgs& a, const Io& io);

struct SimulateArgs {
  std::string scenario;    // benchmark name or JSON config path
  std::string trace_file;  // empty: no trace, "-": stdout
  std::optional<std::uint64_t> seed;
  std::optional<int> max_steps;
};
int cmd_simulate(const SimulateArgs& a, const Io& io);

struct BenchArgs {
  std::string map_file;  // empty: generated block map
  int size = 250;
  double coverage = 0.2;
  std::uint64_t map_seed = 1;
  int queries = 10000;
  int reps = 30;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string csv_file;
  double cell_size = 0.5;
};
int cmd_bench(const BenchArgs& a, const Io& io);

struct ValidateArgs {
  std::string map_file;  // empty: random 64x64 maps at 10/20/35% density
  int trials = 1000;
  std::uint64_t seed = 1;
  bool corrupt_index = false;  // test hook
  double cell_size = 0.5;
};
int cmd_validate(const ValidateArgs& a, const Io& io);

}  // namespace pedsim::cli

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "pedsim/simulation.hpp"

namespace pedsim {

// Bad scenario configuration; line() is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

// JSON scenario configuration with optional sections map, pedestrians, pois,
// forces, handler and run. A "benchmark" key starts from a named benchmark
// and the sections override it. Relative map files resolve against base_dir.
// `seed` overrides run.seed when given.
Scenario parse_scenario_config(const std::string& text, const std::string& base_dir = ".",
                               std::optional<std::uint64_t> seed = std::nullopt);
Scenario load_scenario_config(const std::string& path, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace pedsim

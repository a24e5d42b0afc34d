#include "pedsim/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace pedsim {

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Reads sections of the parsed document and reports problems against the
// line where the offending key appears in the source text.
class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::string dotted;
    for (const auto& k : path) dotted += (dotted.empty() ? "" : ".") + k;
    throw ConfigError("'" + dotted + "': " + what, locate(path));
  }

  void only_keys(const json& obj, const std::vector<std::string>& path, const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) {
        auto p = path;
        p.push_back(key);
        fail(p, "unknown key");
      }
    }
  }

  double number(const json& obj, const std::vector<std::string>& path, const std::string& key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(extend(path, key), "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const json& obj, const std::vector<std::string>& path, const std::string& key,
                       std::int64_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(extend(path, key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::string string(const json& obj, const std::vector<std::string>& path, const std::string& key) const {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(extend(path, key), "expected a string");
    return v.get<std::string>();
  }

  Vec2 pair(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(path, "expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  Cell cell(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
      fail(path, "expected an integer cell [x, y]");
    }
    return {v[0].get<int>(), v[1].get<int>()};
  }

  static std::vector<std::string> extend(std::vector<std::string> path, const std::string& key) {
    path.push_back(key);
    return path;
  }

 private:
  // Line of the deepest key of `path` found in order in the source; array
  // indices ("[3]") are skipped and report their parent's line.
  int locate(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    int line = 0;
    for (const auto& key : path) {
      if (!key.empty() && key.front() == '[') continue;
      const std::size_t hit = text_.find('"' + key + '"', pos);
      if (hit == std::string::npos) break;
      pos = hit + key.size() + 2;
      line = line_of_offset(text_, hit);
    }
    return line;
  }

  const std::string& text_;
};

void read_forces(const Reader& r, const json& j, ForceParams& f) {
  const std::vector<std::string> at = {"forces"};
  r.only_keys(j, at,
              {"tau", "V0", "sigma", "U0", "R", "view_half_angle_deg", "anisotropy_floor", "group_strength",
               "group_distance", "max_speed_factor"});
  f.tau = r.number(j, at, "tau", f.tau);
  f.V0 = r.number(j, at, "V0", f.V0);
  f.sigma = r.number(j, at, "sigma", f.sigma);
  f.U0 = r.number(j, at, "U0", f.U0);
  f.R = r.number(j, at, "R", f.R);
  f.view_half_angle = r.number(j, at, "view_half_angle_deg", f.view_half_angle * 180.0 / kPi) * kPi / 180.0;
  f.anisotropy_floor = r.number(j, at, "anisotropy_floor", f.anisotropy_floor);
  f.group_strength = r.number(j, at, "group_strength", f.group_strength);
  f.group_distance = r.number(j, at, "group_distance", f.group_distance);
  f.max_speed_factor = r.number(j, at, "max_speed_factor", f.max_speed_factor);
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(at, e.what());
  }
}

void read_handler(const Reader& r, const json& j, HandlerParams& h) {
  const std::vector<std::string> at = {"handler"};
  r.only_keys(j, at, {"spine_radius", "waypoint_tolerance", "max_replans"});
  h.spine_radius = r.number(j, at, "spine_radius", h.spine_radius);
  h.waypoint_tolerance = r.number(j, at, "waypoint_tolerance", h.waypoint_tolerance);
  h.max_replans = static_cast<int>(r.integer(j, at, "max_replans", h.max_replans));
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(at, e.what());
  }
}

GridMap read_map(const Reader& r, const json& j, const std::string& base_dir, double cell_size) {
  const std::vector<std::string> at = {"map"};
  try {
    if (j.contains("file")) {
      std::filesystem::path p = r.string(j, at, "file");
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      return GridMap::load(p.string(), cell_size);
    }
    if (j.contains("rows")) {
      const json& rows = j.at("rows");
      if (!rows.is_array()) r.fail(Reader::extend(at, "rows"), "expected an array of strings");
      std::string ascii;
      for (const auto& row : rows) {
        if (!row.is_string()) r.fail(Reader::extend(at, "rows"), "expected an array of strings");
        ascii += row.get<std::string>() + "\n";
      }
      return GridMap::parse(ascii, cell_size);
    }
    const auto w = r.integer(j, at, "width", 0);
    const auto h = r.integer(j, at, "height", 0);
    if (w <= 0 || h <= 0) r.fail(at, "needs 'file', 'rows' or positive 'width' and 'height'");
    return GridMap(static_cast<int>(w), static_cast<int>(h), cell_size);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(at, e.what());
  }
}

}  // namespace

Scenario parse_scenario_config(const std::string& text, const std::string& base_dir,
                               std::optional<std::uint64_t> seed) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const Reader r(text);
  r.only_keys(doc, {}, {"benchmark", "map", "pedestrians", "pois", "forces", "handler", "run"});

  const json empty = json::object();
  const json& map_j = doc.contains("map") ? doc.at("map") : empty;
  const json& run_j = doc.contains("run") ? doc.at("run") : empty;
  const json& peds_j = doc.contains("pedestrians") ? doc.at("pedestrians") : json::array();
  r.only_keys(run_j, {"run"}, {"dt", "max_steps", "seed"});
  r.only_keys(map_j, {"map"},
              {"file", "rows", "width", "height", "cell_size", "corridor_length", "corridor_width", "door_width"});

  const double cell_size = r.number(map_j, {"map"}, "cell_size", kDefaultCellSize);
  if (!(cell_size > 0.0)) r.fail({"map", "cell_size"}, "must be positive");
  const auto run_seed = r.integer(run_j, {"run"}, "seed", 1);
  if (run_seed < 0) r.fail({"run", "seed"}, "must be non-negative");

  Scenario s;
  if (doc.contains("benchmark")) {
    BenchmarkOptions o;
    o.cell_size = cell_size;
    o.seed = seed.value_or(static_cast<std::uint64_t>(run_seed));
    if (map_j.contains("corridor_length")) o.corridor_length = r.number(map_j, {"map"}, "corridor_length", 0);
    if (map_j.contains("corridor_width")) o.corridor_width = r.number(map_j, {"map"}, "corridor_width", 0);
    if (map_j.contains("door_width")) o.door_width = r.number(map_j, {"map"}, "door_width", 0);
    for (const char* k : {"file", "rows", "width", "height"}) {
      if (map_j.contains(k)) r.fail({"map", k}, "not allowed together with 'benchmark'");
    }
    if (peds_j.is_object()) {
      r.only_keys(peds_j, {"pedestrians"}, {"group_size"});
      if (peds_j.contains("group_size")) {
        o.group_size = static_cast<int>(r.integer(peds_j, {"pedestrians"}, "group_size", 0));
      }
    } else if (doc.contains("pedestrians")) {
      r.fail({"pedestrians"}, "with 'benchmark' only {\"group_size\": n} is accepted");
    }
    try {
      s = build_scenario(r.string(doc, {}, "benchmark"), o);
    } catch (const std::invalid_argument& e) {
      r.fail({"benchmark"}, e.what());
    }
  } else {
    s.map = read_map(r, map_j, base_dir, cell_size);
    s.handler = HandlerParams::for_cell_size(cell_size);
    if (!peds_j.is_array()) r.fail({"pedestrians"}, "expected an array");
    for (std::size_t i = 0; i < peds_j.size(); ++i) {
      const json& p = peds_j[i];
      const std::vector<std::string> at = {"pedestrians", "[" + std::to_string(i) + "]"};
      r.only_keys(p, at, {"spawn", "spawn_world", "goal", "group_id", "desired_speed"});
      PedestrianSpec spec;
      if (p.contains("spawn_world")) {
        spec.spawn = r.pair(p.at("spawn_world"), Reader::extend(at, "spawn_world"));
      } else if (p.contains("spawn")) {
        const Cell c = r.cell(p.at("spawn"), Reader::extend(at, "spawn"));
        if (!s.map.in_bounds(c)) r.fail(Reader::extend(at, "spawn"), "outside the map");
        spec.spawn = s.map.cell_to_world(c);
      } else {
        r.fail(at, "needs 'spawn' or 'spawn_world'");
      }
      if (!p.contains("goal")) r.fail(at, "needs 'goal'");
      spec.goal = r.cell(p.at("goal"), Reader::extend(at, "goal"));
      if (p.contains("group_id")) spec.group_id = static_cast<int>(r.integer(p, at, "group_id", 0));
      spec.desired_speed = r.number(p, at, "desired_speed", spec.desired_speed);
      s.pedestrians.push_back(spec);
    }
    s.seed = seed.value_or(static_cast<std::uint64_t>(run_seed));
  }

  if (doc.contains("pois")) {
    const json& pois = doc.at("pois");
    if (!pois.is_array()) r.fail({"pois"}, "expected an array");
    for (std::size_t i = 0; i < pois.size(); ++i) {
      const std::vector<std::string> at = {"pois", "[" + std::to_string(i) + "]"};
      const json& p = pois[i];
      r.only_keys(p, at, {"position", "strength", "range", "duration", "activated_at"});
      if (!p.contains("position")) r.fail(at, "needs 'position'");
      PointOfInterest poi;
      poi.position = r.pair(p.at("position"), Reader::extend(at, "position"));
      poi.strength0 = r.number(p, at, "strength", poi.strength0);
      poi.range = r.number(p, at, "range", poi.range);
      poi.duration = r.number(p, at, "duration", poi.duration);
      poi.activated_at = r.number(p, at, "activated_at", poi.activated_at);
      if (!(poi.range > 0.0) || !(poi.duration > 0.0)) r.fail(at, "range and duration must be positive");
      s.pois.push_back(poi);
    }
  }
  if (doc.contains("forces")) read_forces(r, doc.at("forces"), s.params);
  if (doc.contains("handler")) read_handler(r, doc.at("handler"), s.handler);
  s.dt = r.number(run_j, {"run"}, "dt", s.dt);
  const auto steps = r.integer(run_j, {"run"}, "max_steps", s.max_steps);
  if (steps <= 0 || steps > std::numeric_limits<int>::max()) r.fail({"run", "max_steps"}, "must be a positive int");
  s.max_steps = static_cast<int>(steps);
  if (!(s.dt > 0.0)) r.fail({"run", "dt"}, "must be positive");

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0);
  }
  return s;
}

Scenario load_scenario_config(const std::string& path, std::optional<std::uint64_t> seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'", 0);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_scenario_config(buf.str(), parent.empty() ? "." : parent.string(), seed);
}

}  // namespace pedsim

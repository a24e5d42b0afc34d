#include "pedsim/social_force.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace pedsim {

void ForceParams::validate() const {
  const std::pair<const char*, double> positive[] = {
      {"tau", tau},           {"V0", V0},
      {"sigma", sigma},       {"U0", U0},
      {"R", R},               {"view_half_angle", view_half_angle},
      {"group_strength", group_strength}, {"group_distance", group_distance},
      {"max_speed_factor", max_speed_factor},
  };
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string("force parameter '") + name + "' must be positive");
    }
  }
  if (!(anisotropy_floor >= 0.0 && anisotropy_floor <= 1.0)) {
    throw std::invalid_argument("force parameter 'anisotropy_floor' must lie in [0, 1]");
  }
}

std::vector<Obstacle> obstacles_from_map(const GridMap& map) {
  const int w = map.width();
  const int h = map.height();
  const double s = map.cell_size();

  // Label 8-connected blocked groups; the border gets its own label.
  std::vector<int> label(map.cell_count(), -1);
  int groups = 0;
  std::vector<Cell> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (map.is_traversable(x, y) || label[map.index(x, y)] != -1) continue;
      label[map.index(x, y)] = groups;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        for (Direction d : kAllDirections) {
          const Cell n = c + d;
          if (!map.in_bounds(n) || map.is_traversable(n) || label[map.index(n.x, n.y)] != -1) continue;
          label[map.index(n.x, n.y)] = groups;
          stack.push_back(n);
        }
      }
      ++groups;
    }
  }
  const int border = groups;

  // Unit edges keyed by (group, normal, line); value = start offsets along the line.
  // Horizontal edges lie on y = line, vertical edges on x = line.
  using Key = std::tuple<int, int, int, int>;  // group, nx, ny, line
  std::map<Key, std::vector<int>> edges;
  auto add = [&](int group, int nx, int ny, int line, int start) { edges[{group, nx, ny, line}].push_back(start); };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (map.is_traversable(x, y)) {
        if (x == 0) add(border, 1, 0, 0, y);
        if (x == w - 1) add(border, -1, 0, w, y);
        if (y == 0) add(border, 0, 1, 0, x);
        if (y == h - 1) add(border, 0, -1, h, x);
        continue;
      }
      const int g = label[map.index(x, y)];
      if (map.is_traversable(x - 1, y)) add(g, -1, 0, x, y);
      if (map.is_traversable(x + 1, y)) add(g, 1, 0, x + 1, y);
      if (map.is_traversable(x, y - 1)) add(g, 0, -1, y, x);
      if (map.is_traversable(x, y + 1)) add(g, 0, 1, y + 1, x);
    }
  }

  std::vector<Obstacle> obstacles(static_cast<std::size_t>(groups + 1));
  for (auto& [key, starts] : edges) {
    const auto [g, nx, ny, line] = key;
    std::sort(starts.begin(), starts.end());
    const Vec2 normal{static_cast<double>(nx), static_cast<double>(ny)};
    const bool vertical = nx != 0;
    std::size_t i = 0;
    while (i < starts.size()) {
      std::size_t j = i;
      while (j + 1 < starts.size() && starts[j + 1] == starts[j] + 1) ++j;
      const double lo = starts[i] * s;
      const double hi = (starts[j] + 1) * s;
      const double at = line * s;
      WallSegment seg = vertical ? WallSegment{{at, lo}, {at, hi}, normal} : WallSegment{{lo, at}, {hi, at}, normal};
      obstacles[static_cast<std::size_t>(g)].segments.push_back(seg);
      i = j + 1;
    }
  }
  std::erase_if(obstacles, [](const Obstacle& o) { return o.segments.empty(); });
  return obstacles;
}

std::optional<NearestWallPoint> nearest_wall_point(const Obstacle& obs, Vec2 p) {
  std::optional<NearestWallPoint> best;
  for (const WallSegment& seg : obs.segments) {
    const Vec2 ab = seg.b - seg.a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - seg.a, ab) / len2, 0.0, 1.0) : 0.0;
    const Vec2 q = seg.a + ab * t;
    const double d = distance(p, q);
    if (!best || d < best->distance) best = NearestWallPoint{q, d, seg.normal};
  }
  return best;
}

Vec2 acceleration_force(const Pedestrian& ped, const ForceParams& params) {
  const Vec2 to_target = ped.target - ped.position;
  const Vec2 desired = norm(to_target) > 1e-9 ? normalized(to_target) * ped.desired_speed : Vec2{};
  return (desired - ped.velocity) / params.tau;
}

double anisotropy(const Pedestrian& ped, WorldPoint other_pos, const ForceParams& params) {
  const Vec2 r = other_pos - ped.position;
  const double speed = norm(ped.velocity);
  const double dist = norm(r);
  if (speed == 0.0 || dist == 0.0) return 1.0;
  const double cos_angle = std::clamp(dot(ped.velocity, r) / (speed * dist), -1.0, 1.0);
  return std::acos(cos_angle) <= params.view_half_angle ? 1.0 : params.anisotropy_floor;
}

namespace {

// Direction for two pedestrians standing on the same spot: fixed per id pair
// and opposite for the two members of the pair.
Vec2 coincident_direction(int self, int other) {
  const auto lo = static_cast<std::uint64_t>(static_cast<std::uint32_t>(std::min(self, other)));
  const auto hi = static_cast<std::uint64_t>(static_cast<std::uint32_t>(std::max(self, other)));
  std::uint64_t z = (lo << 32 | hi) + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  const double angle = static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 * kPi;
  const Vec2 u{std::cos(angle), std::sin(angle)};
  return self < other ? u : -u;
}

}  // namespace

Vec2 repulsion_pedestrian(const Pedestrian& a, const Pedestrian& b, const ForceParams& params) {
  if (a.id == b.id) throw std::invalid_argument("repulsion_pedestrian: a pedestrian does not repel itself");
  const Vec2 away = a.position - b.position;
  const double d = norm(away);
  if (d == 0.0) return coincident_direction(a.id, b.id) * params.V0;
  return away / d * (params.V0 * std::exp(-d / params.sigma) * anisotropy(a, b.position, params));
}

Vec2 repulsion_boundary(const Pedestrian& a, const Obstacle& obs, const ForceParams& params) {
  const auto nearest = nearest_wall_point(obs, a.position);
  if (!nearest) return {};
  const Vec2 n = nearest->distance > 0.0 ? (a.position - nearest->point) / nearest->distance : nearest->normal;
  return n * (params.U0 * std::exp(-nearest->distance / params.R));
}

Vec2 attraction_poi(const Pedestrian& a, const PointOfInterest& poi, double now, const ForceParams&) {
  if (now < poi.activated_at) return {};
  const double decay = std::max(0.0, 1.0 - (now - poi.activated_at) / poi.duration);
  const Vec2 away = a.position - poi.position;
  const double d = norm(away);
  if (decay == 0.0 || d == 0.0) return {};
  const double strength = -poi.strength0 * decay;
  return away / d * (strength * std::exp(-d / poi.range));
}

Vec2 group_join_force(const Pedestrian& a, const Pedestrian& b, const ForceParams& params) {
  if (!a.group_id || !b.group_id || *a.group_id != *b.group_id || a.id == b.id) return {};
  const Vec2 toward = b.position - a.position;
  const double d = norm(toward);
  if (d == 0.0 || d <= params.group_distance) return {};
  return toward / d * params.group_strength;
}

Vec2 total_force(const Pedestrian& a, std::span<const Pedestrian> others, std::span<const Obstacle> obstacles,
                 std::span<const PointOfInterest> pois, double now, const ForceParams& params) {
  Vec2 f = acceleration_force(a, params);
  for (const Pedestrian& b : others) {
    if (b.id == a.id) continue;
    f += repulsion_pedestrian(a, b, params);
    f += group_join_force(a, b, params);
  }
  for (const Obstacle& obs : obstacles) f += repulsion_boundary(a, obs, params);
  for (const PointOfInterest& poi : pois) f += attraction_poi(a, poi, now, params);
  return f;
}

Pedestrian integrate_step(const Pedestrian& a, Vec2 force, double dt, const ForceParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be positive");
  if (!is_finite(force)) {
    throw std::runtime_error("integrate_step: non-finite force on pedestrian " + std::to_string(a.id));
  }
  Pedestrian out = a;
  Vec2 v = a.velocity + force * dt;
  const double limit = params.max_speed_factor * a.desired_speed;
  const double speed = norm(v);
  if (speed > limit) {
    v *= limit / speed;
    // Rounding can leave |v| one ulp above the limit.
    while (norm(v) > limit) v *= std::nextafter(1.0, 0.0);
  }
  out.velocity = v;
  out.position = a.position + v * dt;
  return out;
}

}  // namespace pedsim

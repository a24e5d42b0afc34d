#include "pedsim/grid_map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pedsim {

std::string to_string(Cell c) { return std::to_string(c.x) + "," + std::to_string(c.y); }

std::string to_string(Direction d) {
  return "(" + std::to_string(d.dx) + "," + std::to_string(d.dy) + ")";
}

MapParseError::MapParseError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

GridMap::GridMap(int width, int height, double cell_size)
    : width_(width), height_(height), cell_size_(cell_size) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw std::invalid_argument("cell size must be positive");
  }
  blocked_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

namespace {

struct Line {
  std::string_view text;
  int number;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, ++number});
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  // Trailing blank lines carry no rows.
  while (!lines.empty() && lines.back().text.find_first_not_of(" \t") == std::string_view::npos) {
    lines.pop_back();
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// "W H" on one line.
bool parse_dimensions(std::string_view s, int& w, int& h) {
  s = trim(s);
  const auto sep = s.find_first_of(" \t");
  if (sep == std::string_view::npos) return false;
  return parse_int(s.substr(0, sep), w) && parse_int(s.substr(sep), h);
}

// Value following `key` in a movingai header line such as "height 250".
int header_value(const Line& line, std::string_view key) {
  std::string_view s = trim(line.text);
  if (s.substr(0, key.size()) != key) {
    throw MapParseError("expected '" + std::string(key) + "' header", line.number);
  }
  int v = 0;
  if (!parse_int(s.substr(key.size()), v)) {
    throw MapParseError("malformed '" + std::string(key) + "' value", line.number);
  }
  return v;
}

bool blocked_char(char c, int line, int column) {
  switch (c) {
    case '.':
    case 'G':
    case 'S':
      return false;
    case '#':
    case '@':
    case 'O':
    case 'T':
    case 'W':
      return true;
    default:
      throw MapParseError("unknown map character '" + std::string(1, c) + "' at column " +
                              std::to_string(column + 1),
                          line);
  }
}

}  // namespace

GridMap GridMap::parse(std::string_view text, double cell_size) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty()) throw MapParseError("empty map", 1);

  int width = 0;
  int height = 0;
  std::size_t first_row = 0;
  const std::string_view head = trim(lines[0].text);
  if (head.substr(0, 4) == "type") {
    if (lines.size() < 4) throw MapParseError("truncated movingai header", lines.back().number);
    // Some exports swap the order of height/width.
    if (trim(lines[1].text).substr(0, 5) == "width") {
      width = header_value(lines[1], "width");
      height = header_value(lines[2], "height");
    } else {
      height = header_value(lines[1], "height");
      width = header_value(lines[2], "width");
    }
    if (trim(lines[3].text) != "map") throw MapParseError("expected 'map' line", lines[3].number);
    first_row = 4;
  } else if (parse_dimensions(head, width, height)) {
    first_row = 1;
  } else {
    width = static_cast<int>(lines[0].text.size());
    height = static_cast<int>(lines.size());
  }

  if (width <= 0 || height <= 0) throw MapParseError("zero map dimensions", lines[0].number);
  const std::size_t rows = lines.size() - first_row;
  if (rows != static_cast<std::size_t>(height)) {
    throw MapParseError("expected " + std::to_string(height) + " rows, found " + std::to_string(rows),
                        lines.back().number);
  }

  GridMap map(width, height, cell_size);
  for (int y = 0; y < height; ++y) {
    const Line& line = lines[first_row + static_cast<std::size_t>(y)];
    if (line.text.size() != static_cast<std::size_t>(width)) {
      throw MapParseError("ragged row: expected " + std::to_string(width) + " characters, found " +
                              std::to_string(line.text.size()),
                          line.number);
    }
    for (int x = 0; x < width; ++x) {
      if (blocked_char(line.text[static_cast<std::size_t>(x)], line.number, x)) {
        map.blocked_[map.index(x, y)] = 1;
      }
    }
  }
  return map;
}

GridMap GridMap::load(const std::string& path, double cell_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), cell_size);
}

std::vector<std::pair<Direction, Cell>> GridMap::step_neighbors(Cell c) const {
  if (!is_traversable(c)) {
    throw std::invalid_argument("step_neighbors: cell " + to_string(c) + " is not traversable");
  }
  std::vector<std::pair<Direction, Cell>> out;
  out.reserve(8);
  for (Direction d : kAllDirections) {
    if (can_step(c, d)) out.emplace_back(d, c + d);
  }
  return out;
}

WorldPoint GridMap::cell_to_world(Cell c) const {
  if (!in_bounds(c)) throw std::out_of_range("cell_to_world: cell " + to_string(c) + " out of bounds");
  return {(c.x + 0.5) * cell_size_, (c.y + 0.5) * cell_size_};
}

Cell GridMap::world_to_cell(WorldPoint p) const {
  if (!is_finite(p)) throw std::out_of_range("world_to_cell: non-finite point");
  const double ext_x = width_ * cell_size_;
  const double ext_y = height_ * cell_size_;
  if (p.x < -cell_size_ || p.y < -cell_size_ || p.x > ext_x + cell_size_ || p.y > ext_y + cell_size_) {
    throw std::out_of_range("world_to_cell: point outside map extent");
  }
  int x = static_cast<int>(std::floor(p.x / cell_size_));
  int y = static_cast<int>(std::floor(p.y / cell_size_));
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return {x, y};
}

void GridMap::set_blocked(Cell c, bool blocked) {
  if (!in_bounds(c)) throw std::out_of_range("set_blocked: cell " + to_string(c) + " out of bounds");
  blocked_[index(c.x, c.y)] = blocked ? 1 : 0;
}

std::size_t GridMap::blocked_count() const {
  std::size_t n = 0;
  for (auto b : blocked_) n += b;
  return n;
}

std::vector<Cell> GridMap::blocked_cells() const {
  std::vector<Cell> out;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (blocked_[index(x, y)]) out.push_back({x, y});
    }
  }
  return out;
}

std::string GridMap::to_ascii() const {
  std::string out = std::to_string(width_) + " " + std::to_string(height_) + "\n";
  out.reserve(out.size() + (static_cast<std::size_t>(width_) + 1) * static_cast<std::size_t>(height_));
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out.push_back(blocked_[index(x, y)] ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

}  // namespace pedsim

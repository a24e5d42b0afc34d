#include "pedsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pedsim/map_generators.hpp"
#include "pedsim/pathfinder.hpp"
#include "pedsim/random.hpp"
#include "pedsim/static_jump_points.hpp"

namespace pedsim {

TimingStats summarize(std::vector<double> samples) {
  TimingStats t;
  if (samples.empty()) return t;
  const double n = static_cast<double>(samples.size());
  t.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  t.min = *lo;
  t.max = *hi;
  double ss = 0.0;
  for (double s : samples) ss += (s - t.mean) * (s - t.mean);
  t.stddev = std::sqrt(ss / n);
  t.samples = std::move(samples);
  return t;
}

std::vector<std::pair<Cell, Cell>> generate_queries(const GridMap& map, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("query count must be non-negative");
  const std::vector<int> comp = connected_components(map);
  std::vector<int> sizes;
  for (int c : comp) {
    if (c < 0) continue;
    if (c >= static_cast<int>(sizes.size())) sizes.resize(static_cast<std::size_t>(c) + 1, 0);
    ++sizes[static_cast<std::size_t>(c)];
  }
  if (std::none_of(sizes.begin(), sizes.end(), [](int s) { return s >= 2; })) {
    throw std::invalid_argument("map has no two connected traversable cells");
  }
  Rng rng(seed);
  std::vector<std::pair<Cell, Cell>> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    const Cell s{uniform_int(rng, map.width()), uniform_int(rng, map.height())};
    const Cell g{uniform_int(rng, map.width()), uniform_int(rng, map.height())};
    if (s == g || !map.is_traversable(s) || !map.is_traversable(g)) continue;
    if (comp[map.index(s.x, s.y)] != comp[map.index(g.x, g.y)]) continue;
    out.emplace_back(s, g);
  }
  return out;
}

namespace {

struct BatchOutcome {
  double seconds = 0.0;
  std::vector<double> lengths;
  std::size_t jump_points = 0;
};

template <typename Search>
BatchOutcome run_batch(const std::vector<std::pair<Cell, Cell>>& queries, int threads, Search search) {
  BatchOutcome out;
  out.lengths.assign(queries.size(), -1.0);
  std::vector<std::size_t> jp(static_cast<std::size_t>(threads), 0);
  auto work = [&](std::size_t t, std::size_t begin, std::size_t end) {
    SearchWorkspace ws;
    for (std::size_t i = begin; i < end; ++i) {
      const SearchResult r = search(queries[i].first, queries[i].second, ws);
      if (r.found()) {
        out.lengths[i] = r.path->length;
        jp[t] += r.path->points.size();
      }
    }
  };
  const auto start = std::chrono::steady_clock::now();
  if (threads <= 1) {
    work(0, 0, queries.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (queries.size() + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = std::min(queries.size(), static_cast<std::size_t>(t) * chunk);
      const std::size_t e = std::min(queries.size(), b + chunk);
      pool.emplace_back(work, static_cast<std::size_t>(t), b, e);
    }
    for (auto& th : pool) th.join();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.jump_points = std::accumulate(jp.begin(), jp.end(), std::size_t{0});
  return out;
}

void require_equal(const std::vector<std::pair<Cell, Cell>>& queries, const BatchOutcome& a, const BatchOutcome& b) {
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double x = a.lengths[i];
    const double y = b.lengths[i];
    if (x < 0 || y < 0 || std::abs(x - y) > 1e-9 * std::max(1.0, std::abs(x))) {
      throw std::runtime_error("bench: query " + std::to_string(i) + " (" + to_string(queries[i].first) + " -> " +
                               to_string(queries[i].second) + ") JPS length " + format_double(x) + " vs JPS-S " +
                               format_double(y));
    }
  }
}

}  // namespace

BenchReport bench_pathfinding(const GridMap& map, int query_count, int repetitions, std::uint64_t seed, int threads) {
  if (query_count <= 0) throw std::invalid_argument("query_count must be positive");
  if (repetitions <= 0) throw std::invalid_argument("repetitions must be positive");
  if (threads <= 0) throw std::invalid_argument("threads must be positive");
  const auto queries = generate_queries(map, query_count, seed);

  BenchReport report;
  report.query_count = query_count;
  report.repetition_count = repetitions;
  report.threads = threads;

  const auto t0 = std::chrono::steady_clock::now();
  const StaticJumpPointIndex index = precompute_sjp(map);
  report.preprocessing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.static_jump_points = index.size();

  auto jps = [&](Cell s, Cell g, SearchWorkspace& ws) { return jps_search(map, s, g, &ws); };
  auto jpss = [&](Cell s, Cell g, SearchWorkspace& ws) { return jps_s_search(map, index, s, g, &ws); };

  std::vector<double> jps_times, jpss_times;
  for (int rep = 0; rep < repetitions; ++rep) {
    BatchOutcome a, b;
    if (rep % 2 == 0) {
      a = run_batch(queries, threads, jps);
      b = run_batch(queries, threads, jpss);
    } else {
      b = run_batch(queries, threads, jpss);
      a = run_batch(queries, threads, jps);
    }
    require_equal(queries, a, b);
    jps_times.push_back(a.seconds);
    jpss_times.push_back(b.seconds);
    if (rep == 0) {
      report.total_length = std::accumulate(a.lengths.begin(), a.lengths.end(), 0.0);
      report.jps_jump_points = a.jump_points;
      report.jpss_jump_points = b.jump_points;
    }
  }
  report.jps = summarize(std::move(jps_times));
  report.jpss = summarize(std::move(jpss_times));
  report.speedup_percent = (report.jps.mean - report.jpss.mean) / report.jps.mean * 100.0;
  return report;
}

std::string format_report_table(const BenchReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "queries=" << r.query_count << " repetitions=" << r.repetition_count << " threads=" << r.threads << "\n";
  out << "preprocessing " << r.preprocessing_seconds * 1e3 << " ms, " << r.static_jump_points
      << " static jump points\n";
  out << std::left << std::setw(10) << "algorithm" << std::right << std::setw(12) << "mean_ms" << std::setw(12)
      << "min_ms" << std::setw(12) << "max_ms" << std::setw(12) << "stddev_ms" << std::setw(14) << "us_per_query"
      << std::setw(13) << "jump_points" << "\n";
  auto row = [&](const char* name, const TimingStats& t, std::size_t jp) {
    out << std::left << std::setw(10) << name << std::right << std::setw(12) << t.mean * 1e3 << std::setw(12)
        << t.min * 1e3 << std::setw(12) << t.max * 1e3 << std::setw(12) << t.stddev * 1e3 << std::setw(14)
        << t.mean / r.query_count * 1e6 << std::setw(13) << jp << "\n";
  };
  row("jps", r.jps, r.jps_jump_points);
  row("jpss", r.jpss, r.jpss_jump_points);
  out << std::setprecision(2) << "speedup_percent=" << r.speedup_percent << "\n";
  return out.str();
}

std::string format_report_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "algorithm,queries,repetitions,mean_s,min_s,max_s,stddev_s,preprocessing_s,total_length_m,jump_points,"
         "speedup_percent\n";
  out << "jps," << r.query_count << ',' << r.repetition_count << ',' << format_double(r.jps.mean) << ','
      << format_double(r.jps.min) << ',' << format_double(r.jps.max) << ',' << format_double(r.jps.stddev) << ",0,"
      << format_double(r.total_length) << ',' << r.jps_jump_points << ",0\n";
  out << "jpss," << r.query_count << ',' << r.repetition_count << ',' << format_double(r.jpss.mean) << ','
      << format_double(r.jpss.min) << ',' << format_double(r.jpss.max) << ',' << format_double(r.jpss.stddev) << ','
      << format_double(r.preprocessing_seconds) << ',' << format_double(r.total_length) << ',' << r.jpss_jump_points
      << ',' << format_double(r.speedup_percent) << "\n";
  return out.str();
}

}  // namespace pedsim

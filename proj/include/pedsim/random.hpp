#pragma once

#include <cstdint>
#include <random>

namespace pedsim {

// mt19937_64 output is fixed by the standard; the helpers below avoid the
// implementation-defined <random> distributions so seeded runs reproduce
// across standard libraries.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Integer in [0, n). Modulo bias is negligible for the small n used here.
inline int uniform_int(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

}  // namespace pedsim

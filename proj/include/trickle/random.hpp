#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace trickle {

using random_engine = std::mt19937_64;

/// One step of the splitmix64 generator; advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the `stream`-th substream derived from a master seed. Depends only
/// on (seed, stream), so replications can run in any order.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t mixed_seed = splitmix64(state);
  state = mixed_seed ^ (stream * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return splitmix64(state);
}

inline random_engine make_stream(std::uint64_t seed, std::uint64_t stream) {
  return random_engine(stream_seed(seed, stream));
}

/// Uniform double on [0, 1) from the top 53 bits of a 64-bit engine.
template <class URBG>
double uniform01(URBG& gen) {
  static_assert(URBG::min() == 0 &&
                    URBG::max() == std::numeric_limits<std::uint64_t>::max(),
                "uniform01 expects a full-range 64-bit engine");
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

template <class URBG>
double uniform_real(URBG& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

/// Uniform integer on the closed range [lo, hi].
template <class URBG>
int uniform_int(URBG& gen, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // multiply-shift reduction; bias is below 2^-32 for the spans used here
  const auto hi_bits = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(gen()) * span) >> 64);
  return lo + static_cast<int>(hi_bits);
}

}  // namespace trickle

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace georoute {

// Deterministic random stream. Identical (seed, stream, call sequence)
// reproduces identical draws bit-exactly: mt19937_64 and the uniform mapping
// below are fully specified, no library distribution objects are involved.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1. Multiply-shift mapping.
  std::uint64_t uniform_below(std::uint64_t n);

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t fnv1a64(std::string_view s);

// Counter-based stream split: streams are keyed by a scope label plus two
// counters, so adding streams for a new policy never perturbs existing ones.
RngStream derive_stream(std::uint64_t master_seed, std::string_view scope,
                        std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace georoute

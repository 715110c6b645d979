#include "georoute/rng.hpp"

namespace georoute {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream & 0xffffffffu),
                    static_cast<std::uint32_t>(stream >> 32)};
  gen_.seed(seq);
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(gen_()) * n) >> 64);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RngStream derive_stream(std::uint64_t master_seed, std::string_view scope,
                        std::uint64_t a, std::uint64_t b) {
  std::uint64_t stream = fnv1a64(scope);
  stream ^= a * 0x9e3779b97f4a7c15ull;
  stream ^= (b + 0x2545f4914f6cdd1dull) * 0xbf58476d1ce4e5b9ull;
  return RngStream(master_seed, stream);
}

}  // namespace georoute

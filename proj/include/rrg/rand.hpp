#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace rrg {

// SplitMix64. Used instead of std:: distributions because the standard does
// not pin distribution output across library implementations, and generated
// sets must be byte-identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, n) via the multiply-shift reduction.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Per-study stream: the same (seed, study_id) pair always yields the same
// stream, so per-study generation order cannot change outputs.
inline SplitMix64 study_stream(std::uint64_t seed, std::string_view study_id) {
  return SplitMix64(seed ^ fnv1a64(study_id));
}

template <typename T>
void deterministic_shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.bounded(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace rrg

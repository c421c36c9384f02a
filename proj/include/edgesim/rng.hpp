#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace edgesim {

// SplitMix64 finalizer; used to derive decorrelated seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  return splitmix64(splitmix64(master) ^ fnv1a64(label));
}

/// Seedable random stream with portable distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std distributions are implementation-defined, so the bounded
/// integer and real draws below are done by hand to keep results identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

 private:
  std::mt19937_64 engine_;
};

/// Independent per-concern streams derived from one master seed by fixed
/// labels. Changing how one concern consumes draws never shifts the others.
struct RngStreams {
  explicit RngStreams(std::uint64_t master)
      : population(derive_seed(master, "population")),
        placement(derive_seed(master, "placement")),
        mobility(derive_seed(master, "mobility")),
        applicant(derive_seed(master, "applicant")),
        dissemination(derive_seed(master, "dissemination")) {}

  Rng population;     // initial end-node layout
  Rng placement;      // random edge-node placement
  Rng mobility;
  Rng applicant;
  Rng dissemination;
};

}  // namespace edgesim

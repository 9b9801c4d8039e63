#pragma once

#include <cstdint>

namespace linreg {

// SplitMix64: small, fast, and identical on every platform. All randomness
// in this project flows through it so runs replay bit-for-bit from one seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe to take logs of.
  double next_unit_open() { return 1.0 - next_unit(); }

  double next_range(double lo, double hi) { return lo + next_unit() * (hi - lo); }

  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

// Hash (root, stream) into a fresh seed so independent streams never share
// state even when their indices are adjacent.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  SplitMix64 g(root ^ (stream * 0x9e3779b97f4a7c15ULL + 0x853c49e6748fea9bULL));
  g.next_u64();
  return g.next_u64();
}

// Counter-based stream: rng.at(step) yields an engine that depends only on
// (root, step), so per-step draws are reproducible regardless of execution
// order across steps or runs.
class RngStream {
 public:
  explicit RngStream(std::uint64_t root) : root_(root) {}

  SplitMix64 at(std::uint64_t counter) const {
    return SplitMix64(derive_seed(root_, counter));
  }

  std::uint64_t root() const { return root_; }

 private:
  std::uint64_t root_;
};

}  // namespace linreg

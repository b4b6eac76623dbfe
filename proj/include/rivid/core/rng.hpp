#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace rivid {

/// Deterministic counter-style RNG (splitmix64 core). std::random distributions
/// are implementation-defined, so every draw here is spelled out explicitly:
/// the same seed yields the same stream on any platform and any worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Derives an independent stream from a seed and a list of labels/indices.
  /// Used so per-image streams depend only on (seed, image index), never on
  /// the order work happens to be scheduled in.
  template <typename... Parts>
  static Rng derive(std::uint64_t seed, Parts... parts) {
    Rng r(seed);
    (r.fold(parts), ...);
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi). Rejection-free Lemire-style reduction.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
    const unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * span;
    return lo + static_cast<std::int64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  void fold(std::uint64_t v) {
    state_ ^= v + 0x9e3779b97f4a7c15ull + (state_ << 6) + (state_ >> 2);
    next_u64();
  }
  void fold(std::int64_t v) { fold(static_cast<std::uint64_t>(v)); }
  void fold(int v) { fold(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }
  void fold(std::string_view s) {
    // FNV-1a over the label keeps named streams apart.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
    fold(h);
  }
  void fold(const char* s) { fold(std::string_view(s)); }

  std::uint64_t state_;
};

}  // namespace rivid

#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

#include "igenkrylov/types.hpp"

namespace igenkrylov::rng {

/// splitmix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a substream key from a parent key and one counter.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix(mix(key) ^ (counter * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

/// Derives a named substream (FNV-1a over the name, then mixed with the key).
constexpr std::uint64_t derive(std::uint64_t key, std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return derive(key, h);
}

/// xoshiro256** engine. Seeded from a single 64-bit key, so any
/// (seed, counters...) tuple maps to an independent, reproducible stream.
class Engine {
 public:
  using result_type = std::uint64_t;

  explicit Engine(std::uint64_t key) noexcept {
    std::uint64_t z = key;
    for (auto& s : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      s = mix(z);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

/// Standard-normal sampler over an Engine. The ziggurat sampler in Boost is
/// platform independent, unlike std::normal_distribution.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) : engine_(key) {}

  double operator()() { return dist_(engine_); }

  void fill(double* out, Index n) {
    for (Index i = 0; i < n; ++i) out[i] = dist_(engine_);
  }

  Vector vector(Index n) {
    Vector v(n);
    fill(v.data(), n);
    return v;
  }

 private:
  Engine engine_;
  boost::random::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace igenkrylov::rng

#pragma once

// Splittable, platform-independent random number generation.
//
// Every stream is addressed by a (seed, stream_id) pair. The pair is hashed
// through SplitMix64 into the 256-bit state of a xoshiro256** generator, so a
// bootstrap replicate keyed by its index draws the same numbers no matter
// which thread runs it. Variates are produced by code in this header only;
// nothing goes through <random> distributions, whose output is
// implementation-defined.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace maxinfer {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Mixes a parent seed with a tag into a child seed. Used to give each
/// experiment stage and each Monte Carlo replication its own seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (tag + 1));
  std::uint64_t out = splitmix64(s);
  out ^= splitmix64(s);
  return out;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a,
                                           std::uint64_t tag_b) noexcept {
  return derive_seed(derive_seed(seed, tag_a), tag_b);
}

class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t sm = seed ^ 0x6A09E667F3BCC909ULL;
    std::uint64_t mixed = splitmix64(sm);
    sm = mixed ^ (stream_id * 0x9E3779B97F4A7C15ULL + 0xBB67AE8584CAA73BULL);
    for (auto& word : state_) word = splitmix64(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept {
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

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [0, bound), Lemire's nearly-divisionless method.
  std::uint64_t uniform_index(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via the Marsaglia polar method; the second variate of
  /// each accepted pair is cached.
  double normal() noexcept {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * factor;
    has_cached_ = true;
    return u * factor;
  }

  /// Chi-square with an integer number of degrees of freedom, as a sum of
  /// squared normals.
  double chi_square(int dof) {
    if (dof < 1) throw std::domain_error("chi_square: dof must be >= 1");
    double acc = 0.0;
    for (int k = 0; k < dof; ++k) {
      const double g = normal();
      acc += g * g;
    }
    return acc;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_[4]{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

inline std::vector<double> sample_normal(SeededRng& rng, std::size_t count) {
  std::vector<double> out(count);
  for (auto& x : out) x = rng.normal();
  return out;
}

inline std::vector<double> sample_uniform(SeededRng& rng, std::size_t count, double lo = 0.0,
                                          double hi = 1.0) {
  std::vector<double> out(count);
  for (auto& x : out) x = lo + (hi - lo) * rng.uniform();
  return out;
}

/// One Student-t draw, N / sqrt(chi2_dof / dof). Scaled to unit variance when
/// requested, which needs dof >= 3.
inline double student_t(SeededRng& rng, int dof, bool unit_variance) {
  if (dof < 3) throw std::domain_error("student_t: dof must be >= 3 for finite variance");
  const double g = rng.normal();
  const double chi = rng.chi_square(dof);
  double t = g / std::sqrt(chi / dof);
  if (unit_variance) t *= std::sqrt(static_cast<double>(dof - 2) / dof);
  return t;
}

inline std::vector<double> sample_student_t(SeededRng& rng, int dof, std::size_t count,
                                            bool unit_variance) {
  if (dof < 3) throw std::domain_error("sample_student_t: dof must be >= 3 for finite variance");
  std::vector<double> out(count);
  for (auto& x : out) x = student_t(rng, dof, unit_variance);
  return out;
}

}  // namespace maxinfer

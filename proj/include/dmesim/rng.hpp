#pragma once

#include <cstdint>
#include <cmath>

namespace dmesim {

// SplitMix64, used only to expand seeds into generator state.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

inline uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// xoshiro256++ scalar generator.
struct Xoshiro256 {
  uint64_t s[4];

  explicit Xoshiro256(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s) w = sm.next();
  }

  uint64_t next() {
    const uint64_t result = rotl64(s[0] + s[3], 23) + s[0];
    const uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl64(s[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint, so
  // log/quantile transforms stay finite.
  double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

// Eight interleaved xoshiro256++ states. next8() yields one uniform per lane
// and the loop body vectorizes; the output sequence is a pure function of the
// seed, independent of how calls are batched.
struct XoshiroLanes8 {
  static constexpr int kLanes = 8;
  uint64_t s0[kLanes], s1[kLanes], s2[kLanes], s3[kLanes];

  explicit XoshiroLanes8(uint64_t seed) {
    SplitMix64 sm(seed);
    for (int i = 0; i < kLanes; ++i) {
      s0[i] = sm.next();
      s1[i] = sm.next();
      s2[i] = sm.next();
      s3[i] = sm.next();
    }
  }

  void next8(double* out) {
#pragma omp simd
    for (int i = 0; i < kLanes; ++i) {
      const uint64_t r = rotl64(s0[i] + s3[i], 23) + s0[i];
      const uint64_t t = s1[i] << 17;
      s2[i] ^= s0[i];
      s3[i] ^= s1[i];
      s1[i] ^= s2[i];
      s0[i] ^= s3[i];
      s2[i] ^= t;
      s3[i] = rotl64(s3[i], 45);
      out[i] = (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
    }
  }
};

// Every Monte Carlo trial owns two private streams derived from
// (seed, trial index), so results do not depend on worker count or
// scheduling. Sub-stream 0 drives the population count, 1 the user draws.
inline uint64_t trial_stream_seed(uint64_t seed, uint64_t trial, uint64_t substream) {
  SplitMix64 sm(seed ^ (0x9E3779B97F4A7C15ULL * (trial + 1)) ^
                (0xD1B54A32D192ED03ULL * (substream + 1)));
  return sm.next();
}

// Poisson sampler: inversion by unscaled product for small means, Hormann's
// PTRS transformed rejection for large ones.
uint64_t poisson_draw(Xoshiro256& rng, double mean);

}  // namespace dmesim

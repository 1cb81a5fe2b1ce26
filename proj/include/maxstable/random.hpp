#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace maxstable {

// Seeding mixer (Steele, Lea & Flood 2014; Vigna's fixed-increment variant).
// Used to expand one 64-bit seed into engine states.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna). Small, fast, and its algorithm is pinned
// here rather than delegated to the standard library, so identical seeds give
// identical draws on every platform and toolchain.
class Xoshiro256pp {
 public:
  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm(seed);
    // Stream k takes the k-th block of four mixer outputs.
    for (std::uint64_t skip = 0; skip < 4 * stream; ++skip) sm.next();
    for (auto& s : state_) s = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
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
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// One deterministic stream of variates. All distributions are driven through
// uniform() so that antithetic replay (1 - u substitution) covers every
// sampler uniformly, including rejection-based ones.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(seed, stream) {}

  // Uniform on the open interval (0, 1); 53-bit resolution, never 0 or 1.
  double uniform() {
    if (replaying_) {
      if (replay_pos_ < record_.size()) {
        double u = 1.0 - record_[replay_pos_++];
        if (u <= 0.0) u = 0x1.0p-54;  // guard: 1 - u can round to 0
        return u;
      }
      // Rejection samplers may need more draws on the mirrored path than
      // were recorded; fall back to fresh uniforms.
      return raw_uniform();
    }
    double u = raw_uniform();
    if (recording_) record_.push_back(u);
    return u;
  }

  double exponential() { return -std::log(uniform()); }

  // Standard Fréchet with shape theta > 0.
  double frechet(double theta) {
    return std::pow(-std::log(uniform()), -1.0 / theta);
  }

  // Box-Muller pair of independent standard normals.
  void normal_pair(double& z1, double& z2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    z1 = r * std::cos(a);
    z2 = r * std::sin(a);
  }

  double normal() {
    double z1, z2;
    normal_pair(z1, z2);
    return z1;
  }

  // Gamma(alpha, 1) via Marsaglia & Tsang (2000); boosted from alpha + 1 when
  // alpha < 1.
  double gamma(double alpha) {
    if (alpha < 1.0) {
      const double g = gamma(alpha + 1.0);
      return g * std::pow(uniform(), 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      const double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      const double v = t * t * t;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Antithetic pairing: record the uniforms of one draw, then replay their
  // reflections 1 - u for the mirrored draw.
  void begin_record() {
    record_.clear();
    recording_ = true;
    replaying_ = false;
  }

  void begin_replay() {
    recording_ = false;
    replaying_ = true;
    replay_pos_ = 0;
  }

  void end_replay() {
    replaying_ = false;
    record_.clear();
  }

 private:
  double raw_uniform() {
    // 53 random bits in (0,1); shift by half an ulp so 0 is excluded.
    return (static_cast<double>(engine_.next() >> 11) + 0.5) * 0x1.0p-53;
  }

  static constexpr double kPi = 3.14159265358979323846;

  Xoshiro256pp engine_;
  std::vector<double> record_;
  std::size_t replay_pos_ = 0;
  bool recording_ = false;
  bool replaying_ = false;
};

}  // namespace maxstable

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace quermass::rng {

// Stream kinds keep draws for different purposes decorrelated even when the
// same integer seed is reused across them.
inline constexpr std::uint64_t kHaar   = 0x47524153534d414eull;
inline constexpr std::uint64_t kSphere = 0x5350484552455054ull;
inline constexpr std::uint64_t kCorpus = 0x434f525055534742ull;
inline constexpr std::uint64_t kDerive = 0x4445524956454b59ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Key derivation for counter-based substreams: the state for a given
// (seed, kind, index) is a pure function of the triple, so substreams can be
// generated in any order, in parallel, and replayed exactly.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t kind,
                               std::uint64_t index) {
  constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ull;
  std::uint64_t h = mix64(seed + golden);
  h = mix64(h ^ (kind + golden));
  h = mix64(h ^ (index + golden));
  return h;
}

// splitmix64 stream seeded by derive(). Small, portable, replayable.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t kind, std::uint64_t index = 0)
      : state_(derive(seed, kind, index)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal deviate (Box-Muller, second value cached).
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = 1.0 - next_double();  // (0, 1], keeps the log finite
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Order-stable compensated (Neumaier) accumulator.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double total() const { return sum + comp; }
};

}  // namespace quermass::rng

#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace sofic {

/// Identifies a reproducible random stream: identical (seed, stream) pairs
/// produce identical sequences.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  friend bool operator==(const RngState&, const RngState&) = default;
};

std::string describe(const RngState& state);

/// Counter-based generator: output i is a SplitMix64 finaliser applied to a
/// key derived from (seed, stream) plus i. Streams are independent, so a
/// replica only needs its own stream number. Satisfies
/// UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngState state);
  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RngState{seed, stream}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform integer in [0, bound) without modulo bias.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double uniform();

  const RngState& state() const { return state_; }
  std::uint64_t counter() const { return counter_; }
  /// A fresh generator on a derived sub-stream.
  Rng split(std::uint64_t substream) const;

 private:
  RngState state_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sofic

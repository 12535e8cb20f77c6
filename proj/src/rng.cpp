#include "sofic/rng.hpp"

#include "sofic/errors.hpp"

namespace sofic {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::string describe(const RngState& state) {
  return "seed=" + std::to_string(state.seed) + " stream=" + std::to_string(state.stream);
}

Rng::Rng(RngState state)
    : state_(state), key_(mix64(mix64(state.seed) ^ (state.stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

Rng::result_type Rng::operator()() { return mix64(key_ + kGolden * ++counter_); }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InputError("empty range");
  // Lemire's multiply-shift rejection.
  unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

Rng Rng::split(std::uint64_t substream) const {
  return Rng(RngState{mix64(key_ ^ (substream + 1) * kGolden), state_.stream});
}

}  // namespace sofic

#include "fpgames/rng.hpp"

#include <limits>
#include <stdexcept>

namespace fpgames {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Rng::next_double() {
  // 53 high bits scaled by 2^-53; always in [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::next_below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::next_below: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

std::uint64_t stream_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t key = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) key = mix64(key + w);
  return key;
}

}  // namespace fpgames

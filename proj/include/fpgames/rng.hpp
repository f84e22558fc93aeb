#pragma once

#include <cstdint>
#include <initializer_list>

namespace fpgames {

// Counter-free substream RNG built on splitmix64. A stream is identified by a
// 64-bit key hashed from (seed, tag, indices...); draws within a stream walk
// the splitmix64 sequence from that key. Because every (step, player,
// replication) site derives its own key, adding or reordering draws at one
// site never perturbs another, which is what makes traces bitwise
// reproducible and replications order-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53 random bits.
  double next_double();

  // Uniform on {0, ..., n - 1} via rejection, exactly unbiased. Requires n > 0.
  int next_below(int n);

 private:
  std::uint64_t state_;
};

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Order-sensitive hash of the given words into a stream key.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> words);

}  // namespace fpgames

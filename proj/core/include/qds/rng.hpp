#pragma once

#include <cstdint>
#include <string_view>

namespace qds {

// Deterministic 64-bit generator (splitmix64).  Used everywhere instead of
// <random> engines/distributions so that outputs are byte-identical across
// platforms and standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0,1) with 53 random bits.
  double next_double();

  bool bernoulli(double p);

  // Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Stable seed derivation: mixes a label (FNV-1a) or an index into a master
// seed so independent streams never share state.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace qds

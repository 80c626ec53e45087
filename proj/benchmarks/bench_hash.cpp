#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "qds/bitstring.hpp"
#include "qds/gf2.hpp"
#include "qds/lfsr_hash.hpp"
#include "qds/rng.hpp"

namespace {

qds::HashSpec fixed_spec(std::size_t n, qds::Rng& rng) {
  return qds::make_hash_spec(
      qds::gen_irreducible(qds::BitString::random(n, rng), n),
      qds::BitString::random(n, rng));
}

// Streaming hash throughput over the message length.
void BM_ToeplitzHash(benchmark::State& state) {
  const std::size_t n = 16;
  const auto m = static_cast<std::size_t>(state.range(0));
  qds::Rng rng(7);
  const qds::HashSpec spec = fixed_spec(n, rng);
  const qds::BitString message = qds::BitString::random(m, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qds::toeplitz_hash(spec, message));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * m / 8));
}
BENCHMARK(BM_ToeplitzHash)->Arg(256)->Arg(4096)->Arg(65536);

// Re-keyed hashing with the message residue computed once: the inner loop
// of likely-set verification, which tries many keys against one message.
void BM_HashResidueReuse(benchmark::State& state) {
  const std::size_t n = 16;
  const auto keys = static_cast<std::size_t>(state.range(0));
  qds::Rng rng(11);
  const qds::HashSpec base = fixed_spec(n, rng);
  const qds::BitString message = qds::BitString::random(4096, rng);
  const qds::Gf2Poly residue = qds::message_residue(message, base.poly);
  std::vector<qds::BitString> inits;
  inits.reserve(keys);
  for (std::size_t i = 0; i < keys; ++i) {
    inits.push_back(qds::BitString::random(n, rng));
  }
  for (auto _ : state) {
    for (const qds::BitString& init : inits) {
      const qds::HashSpec spec{base.poly, init};
      benchmark::DoNotOptimize(qds::toeplitz_hash_residue(spec, residue));
    }
  }
  state.SetItemsProcessed(
      static_cast<std::int64_t>(state.iterations() * keys));
}
BENCHMARK(BM_HashResidueReuse)->Arg(64)->Arg(561);

// Deterministic irreducible-polynomial derivation from a seed.
void BM_GenIrreducible(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  qds::Rng rng(13);
  const qds::BitString seed = qds::BitString::random(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qds::gen_irreducible(seed, n));
  }
}
BENCHMARK(BM_GenIrreducible)->Arg(16)->Arg(24)->Arg(32);

}  // namespace

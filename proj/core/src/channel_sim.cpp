#include "qds/channel_sim.hpp"

#include <stdexcept>
#include <vector>

#include "qds/protocol.hpp"
#include "qds/rng.hpp"

namespace qds {
namespace {

void check_rate(double e) {
  if (!(e >= 0.0 && e < 0.5)) {
    throw std::invalid_argument("simulate_kgp: rate outside [0, 0.5)");
  }
}

// Peer copy of `base` differing in exactly floor(len*e) positions
// (exact_count) or with i.i.d. flips (bernoulli).
BitString noisy_copy(const BitString& base, double e, NoiseMode mode,
                     Rng& rng, std::size_t& flips) {
  BitString copy = base;
  flips = 0;
  if (mode == NoiseMode::exact_count) {
    const std::size_t want = std::size_t(double(base.size()) * e);
    // Partial Fisher-Yates over the index range picks distinct positions.
    std::vector<std::size_t> idx(base.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t k = 0; k < want; ++k) {
      const std::size_t pick = k + std::size_t(rng.below(idx.size() - k));
      std::swap(idx[k], idx[pick]);
      copy.flip_bit(idx[k]);
      ++flips;
    }
  } else {
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (rng.bernoulli(e)) {
        copy.flip_bit(i);
        ++flips;
      }
    }
  }
  return copy;
}

}  // namespace

KgpOutput simulate_kgp(std::size_t n, const PairRates& rates, NoiseMode mode,
                       std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("simulate_kgp: n < 2");
  check_rate(rates.e1);
  check_rate(rates.e2);
  check_rate(rates.e3);
  check_rate(rates.e4);

  KgpOutput out;
  out.rates = rates;
  out.mode = mode;

  Rng base_rng(derive_seed(seed, "kgp-base"));
  out.alice_xb = BitString::random(n, base_rng);
  out.alice_yb = BitString::random(2 * n, base_rng);
  out.alice_xc = BitString::random(n, base_rng);
  out.alice_yc = BitString::random(2 * n, base_rng);

  Rng noise_rng(derive_seed(seed, "kgp-noise"));
  out.bob_x = noisy_copy(out.alice_xb, rates.e1, mode, noise_rng, out.flips[0]);
  out.bob_y = noisy_copy(out.alice_yb, rates.e2, mode, noise_rng, out.flips[1]);
  out.charlie_x =
      noisy_copy(out.alice_xc, rates.e3, mode, noise_rng, out.flips[2]);
  out.charlie_y =
      noisy_copy(out.alice_yc, rates.e4, mode, noise_rng, out.flips[3]);
  return out;
}

AttackStats guessing_attack(const ReceiverState& bob_view, double p_e,
                            std::uint64_t trials, std::uint64_t seed) {
  if (!(p_e > 0.0 && p_e <= 0.5)) {
    throw std::invalid_argument("guessing_attack: p_e outside (0, 0.5]");
  }
  const std::size_t total_bits = bob_view.x_local.size() + bob_view.y_local.size();

  AttackStats stats;
  stats.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    bool all_correct = true;
    for (std::size_t b = 0; b < total_bits; ++b) {
      if (rng.bernoulli(p_e)) {
        all_correct = false;
        break;
      }
    }
    if (all_correct) ++stats.successes;
  }
  stats.rate = trials == 0 ? 0.0 : double(stats.successes) / double(trials);
  return stats;
}

AttackStats tamper_attack(const SessionFixture& fixture,
                          TamperStrategy strategy, std::uint64_t trials,
                          std::uint64_t seed) {
  AttackStats stats;
  stats.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, t);
    const KgpOutput keys = simulate_kgp(fixture.n, fixture.rates, fixture.mode,
                                        derive_seed(trial_seed, "kgp"));
    Rng rng(derive_seed(trial_seed, "fixture"));
    const BitString message = BitString::random(fixture.m, rng);

    const AliceState alice =
        make_alice_state(keys.alice_x(), keys.alice_y(),
                         BitString::random(fixture.n, rng));
    const Signature honest = sign(alice, message);

    BitString tampered = BitString::random(fixture.m, rng);
    while (tampered == message) tampered = BitString::random(fixture.m, rng);
    const Signature forged = strategy == TamperStrategy::random_message
                                 ? honest
                                 : Signature{BitString::random(2 * fixture.n, rng)};

    bool accepted;
    if (fixture.variant == ProtocolVariant::original) {
      const ReceiverState charlie{keys.charlie_x, keys.charlie_y, keys.bob_x,
                                  keys.bob_y, keys.rates};
      accepted = verify_likely(tampered, forged, charlie).accepted;
    } else {
      accepted = verify_improved(tampered, forged, alice.x_a, alice.y_a);
    }
    if (accepted) ++stats.successes;
  }
  stats.rate = trials == 0 ? 0.0 : double(stats.successes) / double(trials);
  return stats;
}

}  // namespace qds

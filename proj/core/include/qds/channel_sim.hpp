#pragma once

#include <array>
#include <cstdint>

#include "qds/bitstring.hpp"

namespace qds {

enum class ProtocolVariant { original, improved };

// Pairwise bit-flip rates of the four key-generation links:
// e1: signer/Bob X link, e2: signer/Bob Y link, e3/e4: Charlie's X/Y links.
struct PairRates {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
};

enum class NoiseMode {
  exact_count,  // exactly floor(len * e) flips at uniform random positions
  bernoulli,    // i.i.d. flips with probability e
};

// Raw keys produced by the simulated key-generation links.  The signer's
// strings are the XOR of her two halves.
struct KgpOutput {
  BitString alice_xb, bob_x;      // n bits each
  BitString alice_yb, bob_y;      // 2n bits each
  BitString alice_xc, charlie_x;  // n bits each
  BitString alice_yc, charlie_y;  // 2n bits each
  PairRates rates;
  NoiseMode mode = NoiseMode::exact_count;
  std::array<std::size_t, 4> flips{};  // realized flip count per link

  BitString alice_x() const { return alice_xb ^ alice_xc; }
  BitString alice_y() const { return alice_yb ^ alice_yc; }
};

// Generates uniform base strings and noisy receiver copies.  Deterministic
// given the seed.  Rates must lie in [0, 0.5); n >= 2.
KgpOutput simulate_kgp(std::size_t n, const PairRates& rates, NoiseMode mode,
                       std::uint64_t seed);

// Which misbehavior a session simulates, and its parameters.
struct AdversaryModel {
  enum class Kind { guess_keys, tamper_message, forge_pair };
  Kind kind = Kind::tamper_message;
  double p_e = 0.25;       // per-bit guessing error (guess_keys)
  std::uint64_t seed = 0;  // adversarial randomness stream
};

struct ReceiverState;  // protocol.hpp

struct AttackStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate = 0.0;
};

// Monte Carlo of the key-guessing forgery: per trial the attacker guesses
// the peer's X (n bits) and Y (2n bits) strings with independent per-bit
// error p_e; a trial succeeds only if every guessed bit is correct.
// p_e in (0, 0.5]; the closed end admits the uniform-guessing calibration.
AttackStats guessing_attack(const ReceiverState& bob_view, double p_e,
                            std::uint64_t trials, std::uint64_t seed);

enum class TamperStrategy {
  random_message,  // fresh M' != M, signature left intact
  random_pair,     // fresh M' and fresh random S'
};

// Fixture for tamper Monte Carlo: desk-scale sizes only.
struct SessionFixture {
  ProtocolVariant variant = ProtocolVariant::original;
  std::size_t n = 16;
  std::size_t m = 256;
  PairRates rates;
  NoiseMode mode = NoiseMode::exact_count;
};

// Empirical acceptance rate of tampered inputs at the second receiver.
AttackStats tamper_attack(const SessionFixture& fixture,
                          TamperStrategy strategy, std::uint64_t trials,
                          std::uint64_t seed);

}  // namespace qds

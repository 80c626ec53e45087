#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qds/bitstring.hpp"
#include "qds/channel_sim.hpp"
#include "qds/hamming_ball.hpp"
#include "qds/lfsr_hash.hpp"

namespace qds {

// The signer's secrets: key halves combined across both receivers' links,
// plus the seed that will generate the hashing polynomial.
struct AliceState {
  BitString x_a;     // n bits
  BitString y_a;     // 2n bits
  BitString p_seed;  // n bits
};

AliceState make_alice_state(BitString x_a, BitString y_a, BitString p_seed);

// One receiver's view: its own strings plus the peer strings obtained
// during the exchange, and the four link error rates.
struct ReceiverState {
  BitString x_local;  // n bits
  BitString y_local;  // 2n bits
  BitString x_peer;   // n bits
  BitString y_peer;   // 2n bits
  PairRates rates;
};

struct VerifyOutcome {
  bool accepted = false;
  std::uint64_t comparisons_made = 0;
  // (i, j) indices into the X- and Y-ball enumeration orders; present only
  // on acceptance, and minimal in the enumeration order.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> matched_pair;
};

struct TranscriptEvent {
  std::size_t step = 0;
  std::string sender;
  std::string receiver;
  std::string tag;
  std::size_t payload_bits = 0;
};

// Ordered record of the classical exchange; serializes one event per line:
// "<step> <sender> <receiver> <tag> <payload_bits>".
struct Transcript {
  std::vector<TranscriptEvent> events;

  void add(std::string sender, std::string receiver, std::string tag,
           std::size_t payload_bits);
  std::string to_log() const;
};

// S = (hash || p_seed) xor Y_A.  Appends the send event when a transcript
// is supplied.
Signature sign(const AliceState& alice, const BitString& message,
               Transcript* transcript = nullptr);

// Likely set around local xor peer with radius ceil(L * (e_a + e_b)).
// Refuses e_a + e_b >= 0.5 (InfeasibleError).
LikelySetSpec build_likely_set(const BitString& local, const BitString& peer,
                               double e_a, double e_b);

// Original-variant verification: scans candidate pads from the Y likely
// set (outer) and candidate keys from the X likely set (inner), accepting
// on the first digest match.  Stops early on acceptance.
VerifyOutcome verify_likely(const BitString& message,
                            const Signature& signature,
                            const ReceiverState& receiver);

// Improved-variant verification against the signer's published strings.
bool verify_improved(const BitString& message, const Signature& signature,
                     const BitString& published_x,
                     const BitString& published_y);

struct SessionResult {
  VerifyOutcome bob;
  VerifyOutcome charlie;
  Transcript transcript;
  bool aborted = false;  // improved variant only: a receipt never arrived
};

// Full three-party exchange.  Deterministic given session_seed; the
// optional adversary redirects what the first receiver forwards.
SessionResult run_session(ProtocolVariant variant, const KgpOutput& keys,
                          const BitString& message, std::uint64_t session_seed,
                          const AdversaryModel* adversary = nullptr);

}  // namespace qds

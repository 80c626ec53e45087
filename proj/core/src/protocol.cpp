#include "qds/protocol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qds/errors.hpp"
#include "qds/gf2.hpp"
#include "qds/rng.hpp"

namespace qds {
namespace {

void check_alice(const AliceState& alice) {
  const std::size_t n = alice.x_a.size();
  if (n < 2 || alice.y_a.size() != 2 * n || alice.p_seed.size() != n) {
    throw std::invalid_argument("AliceState: lengths must be (n, 2n, n)");
  }
}

void check_receiver(const ReceiverState& r) {
  const std::size_t n = r.x_local.size();
  if (n < 2 || r.y_local.size() != 2 * n || r.x_peer.size() != n ||
      r.y_peer.size() != 2 * n) {
    throw std::invalid_argument("ReceiverState: lengths must be (n, 2n)");
  }
}

}  // namespace

AliceState make_alice_state(BitString x_a, BitString y_a, BitString p_seed) {
  AliceState alice{std::move(x_a), std::move(y_a), std::move(p_seed)};
  check_alice(alice);
  return alice;
}

void Transcript::add(std::string sender, std::string receiver, std::string tag,
                     std::size_t payload_bits) {
  events.push_back(TranscriptEvent{events.size(), std::move(sender),
                                   std::move(receiver), std::move(tag),
                                   payload_bits});
}

std::string Transcript::to_log() const {
  std::ostringstream out;
  for (const auto& e : events) {
    out << e.step << ' ' << e.sender << ' ' << e.receiver << ' ' << e.tag
        << ' ' << e.payload_bits << '\n';
  }
  return out.str();
}

Signature sign(const AliceState& alice, const BitString& message,
               Transcript* transcript) {
  check_alice(alice);
  if (message.empty()) throw std::invalid_argument("sign: empty message");
  const std::size_t n = alice.x_a.size();

  const Gf2Poly poly = gen_irreducible(alice.p_seed, n);
  const HashSpec spec = make_hash_spec(poly, alice.x_a);
  const BitString h = toeplitz_hash(spec, message);
  const Signature s = encrypt_digest(make_digest(h, alice.p_seed), alice.y_a);
  if (transcript != nullptr) {
    transcript->add("alice", "bob", "message-signature",
                    message.size() + s.body.size());
  }
  return s;
}

LikelySetSpec build_likely_set(const BitString& local, const BitString& peer,
                               double e_a, double e_b) {
  if (local.size() != peer.size()) {
    throw std::invalid_argument("build_likely_set: length mismatch");
  }
  if (!(e_a >= 0.0) || !(e_b >= 0.0)) {
    throw std::invalid_argument("build_likely_set: negative rate");
  }
  const double e = e_a + e_b;
  if (e >= 0.5) {
    throw InfeasibleError("build_likely_set: summed error rate >= 0.5");
  }
  const auto radius =
      std::size_t(std::ceil(e * double(local.size())));
  return make_likely_set(local ^ peer, radius);
}

VerifyOutcome verify_likely(const BitString& message,
                            const Signature& signature,
                            const ReceiverState& receiver) {
  check_receiver(receiver);
  const std::size_t n = receiver.x_local.size();
  if (signature.body.size() != 2 * n) {
    throw std::invalid_argument("verify_likely: signature length != 2n");
  }
  if (message.empty()) {
    throw std::invalid_argument("verify_likely: empty message");
  }

  const LikelySetSpec x_set = build_likely_set(
      receiver.x_local, receiver.x_peer, receiver.rates.e1, receiver.rates.e3);
  const LikelySetSpec y_set = build_likely_set(
      receiver.y_local, receiver.y_peer, receiver.rates.e2, receiver.rates.e4);

  VerifyOutcome outcome;
  BallEnumerator y_enum(y_set.center, y_set.radius);
  BitString pad;
  std::uint64_t j = 0;
  const Gf2Poly message_poly = Gf2Poly::from_coefficients(message);
  while (y_enum.next(pad)) {
    // Candidate digest under this pad (Y-ball member).
    const Digest expected = decrypt_signature(signature, pad);
    const Gf2Poly poly = gen_irreducible(expected.seed, n);
    // The hash is init * M(x) mod poly; the residue is shared across the
    // whole inner scan.
    const Gf2Poly residue = gf2_mod(message_poly, poly);

    BallEnumerator x_enum(x_set.center, x_set.radius);
    BitString key;
    std::uint64_t i = 0;
    while (x_enum.next(key)) {
      const HashSpec spec{poly, key};
      const BitString recomputed = toeplitz_hash_residue(spec, residue);
      ++outcome.comparisons_made;
      if (recomputed == expected.hash) {
        outcome.accepted = true;
        outcome.matched_pair = std::make_pair(i, j);
        return outcome;
      }
      ++i;
    }
    ++j;
  }
  return outcome;
}

bool verify_improved(const BitString& message, const Signature& signature,
                     const BitString& published_x,
                     const BitString& published_y) {
  const std::size_t n = published_x.size();
  if (n < 2 || signature.body.size() != 2 * n ||
      published_y.size() != 2 * n) {
    throw std::invalid_argument("verify_improved: inconsistent lengths");
  }
  if (message.empty()) {
    throw std::invalid_argument("verify_improved: empty message");
  }
  const Digest expected = decrypt_signature(signature, published_y);
  const Gf2Poly poly = gen_irreducible(expected.seed, n);
  const HashSpec spec = make_hash_spec(poly, published_x);
  return toeplitz_hash(spec, message) == expected.hash;
}

namespace {

// What the first receiver forwards once an adversary is in play.
struct ForwardedPair {
  BitString message;
  Signature signature;
};

ForwardedPair apply_adversary(const AdversaryModel& adv,
                              const KgpOutput& keys, const BitString& message,
                              const Signature& signature) {
  const std::size_t n = keys.bob_x.size();
  const std::size_t m = message.size();
  Rng rng(derive_seed(adv.seed, "adversary"));

  switch (adv.kind) {
    case AdversaryModel::Kind::tamper_message: {
      BitString tampered = BitString::random(m, rng);
      while (tampered == message) tampered = BitString::random(m, rng);
      return ForwardedPair{tampered, signature};
    }
    case AdversaryModel::Kind::forge_pair: {
      BitString tampered = BitString::random(m, rng);
      while (tampered == message) tampered = BitString::random(m, rng);
      return ForwardedPair{tampered, Signature{BitString::random(2 * n, rng)}};
    }
    case AdversaryModel::Kind::guess_keys: {
      // Bob guesses Charlie's strings bit by bit, then forges the pair that
      // Charlie's center candidates would accept if every guess is right.
      BitString guess_x = keys.charlie_x;
      for (std::size_t i = 0; i < guess_x.size(); ++i) {
        if (rng.bernoulli(adv.p_e)) guess_x.flip_bit(i);
      }
      BitString guess_y = keys.charlie_y;
      for (std::size_t i = 0; i < guess_y.size(); ++i) {
        if (rng.bernoulli(adv.p_e)) guess_y.flip_bit(i);
      }
      BitString tampered = BitString::random(m, rng);
      while (tampered == message) tampered = BitString::random(m, rng);
      const BitString key_guess = keys.bob_x ^ guess_x;
      const BitString pad_guess = keys.bob_y ^ guess_y;
      const BitString forged_seed = BitString::random(n, rng);
      const Gf2Poly poly = gen_irreducible(forged_seed, n);
      const BitString h = toeplitz_hash(HashSpec{poly, key_guess}, tampered);
      const Signature forged =
          encrypt_digest(make_digest(h, forged_seed), pad_guess);
      return ForwardedPair{tampered, forged};
    }
  }
  throw std::logic_error("apply_adversary: unknown kind");
}

}  // namespace

SessionResult run_session(ProtocolVariant variant, const KgpOutput& keys,
                          const BitString& message, std::uint64_t session_seed,
                          const AdversaryModel* adversary) {
  const std::size_t n = keys.bob_x.size();
  if (message.empty()) {
    throw std::invalid_argument("run_session: empty message");
  }

  Rng p_rng(derive_seed(session_seed, "p-seed"));
  const AliceState alice = make_alice_state(
      keys.alice_x(), keys.alice_y(), BitString::random(n, p_rng));

  SessionResult result;
  const Signature s = sign(alice, message, &result.transcript);

  ForwardedPair forwarded{message, s};
  if (adversary != nullptr) {
    forwarded = apply_adversary(*adversary, keys, message, s);
  }
  result.transcript.add("bob", "charlie", "message-signature",
                        forwarded.message.size() + forwarded.signature.body.size());

  if (variant == ProtocolVariant::original) {
    result.transcript.add("bob", "charlie", "key-strings", 3 * n);
    result.transcript.add("charlie", "bob", "key-strings", 3 * n);

    const ReceiverState bob{keys.bob_x, keys.bob_y, keys.charlie_x,
                            keys.charlie_y, keys.rates};
    const ReceiverState charlie{keys.charlie_x, keys.charlie_y, keys.bob_x,
                                keys.bob_y, keys.rates};
    // Bob judges the pair he received from the signer; Charlie judges
    // whatever was forwarded to him.
    result.bob = verify_likely(message, s, bob);
    result.charlie =
        verify_likely(forwarded.message, forwarded.signature, charlie);
    return result;
  }

  // Improved flow: string exchange, receipt confirmations, then the
  // signer's publication strictly after both confirmations.
  result.transcript.add("bob", "charlie", "key-strings", 3 * n);
  result.transcript.add("bob", "alice", "receipt", 0);
  result.transcript.add("charlie", "bob", "key-strings", 3 * n);
  result.transcript.add("charlie", "alice", "receipt", 0);
  result.transcript.add("alice", "all", "publish-keys", 3 * n);

  result.bob.accepted = verify_improved(message, s, alice.x_a, alice.y_a);
  result.bob.comparisons_made = 1;
  result.charlie.accepted = verify_improved(
      forwarded.message, forwarded.signature, alice.x_a, alice.y_a);
  result.charlie.comparisons_made = 1;
  return result;
}

}  // namespace qds

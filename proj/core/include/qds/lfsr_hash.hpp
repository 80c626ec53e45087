#pragma once

#include <cstdint>
#include <vector>

#include "qds/bitstring.hpp"
#include "qds/gf2.hpp"

namespace qds {

// Keyed universal hash: columns of the implicit Toeplitz matrix are the
// successive states init * x^k mod poly of a Galois LFSR, so hashing M is
// the field product init * M(x) mod poly.
struct HashSpec {
  Gf2Poly poly;    // monic, degree n >= 2; irreducibility is the caller's
                   // contract (gen_irreducible output)
  BitString init;  // n bits, the first matrix column
};

// Validates degree/length consistency (cheap checks only).
HashSpec make_hash_spec(Gf2Poly poly, BitString init);

std::size_t hash_output_bits(const HashSpec& spec);

// Hash of a nonempty message; output has deg(poly) bits.
BitString toeplitz_hash(const HashSpec& spec, const BitString& message);

// M(x) mod poly, reusable across many inits for the same message.
Gf2Poly message_residue(const BitString& message, const Gf2Poly& poly);

// Hash evaluated as init * residue mod poly; residue must already be
// reduced modulo spec.poly.
BitString toeplitz_hash_residue(const HashSpec& spec, const Gf2Poly& residue);

// Hash value alongside the seed that generated the hashing polynomial;
// both halves have the same length n.
struct Digest {
  BitString hash;
  BitString seed;
};

Digest make_digest(BitString hash, BitString seed);

// One-time-pad envelope around a digest.
struct Signature {
  BitString body;  // 2n bits
};

BitString digest_bits(const Digest& digest);
Digest split_digest(const BitString& bits);

Signature encrypt_digest(const Digest& digest, const BitString& pad);
Digest decrypt_signature(const Signature& signature, const BitString& pad);

// Chance that two distinct messages of at most `message_bits` bits collide
// under a uniformly chosen spec: message_bits / 2^(hash_bits - 1), capped
// at 1.
double collision_bound(double message_bits, double hash_bits);

std::vector<std::uint8_t> serialize_digest(const Digest& digest);
Digest deserialize_digest(const std::vector<std::uint8_t>& wire);
std::vector<std::uint8_t> serialize_signature(const Signature& signature);
Signature deserialize_signature(const std::vector<std::uint8_t>& wire);

}  // namespace qds

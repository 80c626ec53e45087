#include "qds/lfsr_hash.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qds {
namespace {

void check_spec(const HashSpec& spec) {
  const int n = spec.poly.degree();
  if (n < 2) throw std::invalid_argument("HashSpec: polynomial degree < 2");
  if (spec.init.size() != std::size_t(n)) {
    throw std::invalid_argument("HashSpec: init length != degree");
  }
}

// In-place state <- state*x mod poly for state of degree < n = deg(poly);
// `state` is sized to hold n+1 bits.
void lfsr_step(std::vector<std::uint64_t>& state, const Gf2Poly& poly,
               std::size_t n) {
  std::uint64_t carry = 0;
  for (auto& w : state) {
    const std::uint64_t next = w >> 63;
    w = (w << 1) | carry;
    carry = next;
  }
  if ((state[n / 64] >> (n % 64)) & 1u) {
    for (std::size_t i = 0; i < poly.words().size(); ++i) {
      state[i] ^= poly.words()[i];
    }
  }
}

}  // namespace

HashSpec make_hash_spec(Gf2Poly poly, BitString init) {
  HashSpec spec{std::move(poly), std::move(init)};
  check_spec(spec);
  return spec;
}

std::size_t hash_output_bits(const HashSpec& spec) {
  return std::size_t(spec.poly.degree());
}

BitString toeplitz_hash(const HashSpec& spec, const BitString& message) {
  check_spec(spec);
  if (message.empty()) {
    throw std::invalid_argument("toeplitz_hash: empty message");
  }
  const std::size_t n = std::size_t(spec.poly.degree());
  const std::size_t nw = (n + 1 + 63) / 64;

  std::vector<std::uint64_t> column(nw, 0), acc(nw, 0);
  for (std::size_t i = 0; i < spec.init.words().size(); ++i) {
    column[i] = spec.init.words()[i];
  }
  for (std::size_t k = 0; k < message.size(); ++k) {
    if (message.bit(k)) {
      for (std::size_t i = 0; i < nw; ++i) acc[i] ^= column[i];
    }
    lfsr_step(column, spec.poly, n);
  }
  return Gf2Poly::from_words(std::move(acc)).coefficients(n);
}

Gf2Poly message_residue(const BitString& message, const Gf2Poly& poly) {
  if (message.empty()) {
    throw std::invalid_argument("message_residue: empty message");
  }
  return gf2_mod(Gf2Poly::from_coefficients(message), poly);
}

BitString toeplitz_hash_residue(const HashSpec& spec, const Gf2Poly& residue) {
  check_spec(spec);
  const std::size_t n = std::size_t(spec.poly.degree());
  const Gf2Poly init_poly = Gf2Poly::from_coefficients(spec.init);
  return gf2_mul_mod(init_poly, residue, spec.poly).coefficients(n);
}

Digest make_digest(BitString hash, BitString seed) {
  if (hash.size() != seed.size() || hash.empty()) {
    throw std::invalid_argument("make_digest: halves must be equal, nonzero");
  }
  return Digest{std::move(hash), std::move(seed)};
}

BitString digest_bits(const Digest& digest) {
  return digest.hash.concat(digest.seed);
}

Digest split_digest(const BitString& bits) {
  if (bits.size() % 2 != 0 || bits.empty()) {
    throw std::invalid_argument("split_digest: need even, nonzero length");
  }
  const std::size_t n = bits.size() / 2;
  return Digest{bits.slice(0, n), bits.slice(n, n)};
}

Signature encrypt_digest(const Digest& digest, const BitString& pad) {
  return Signature{digest_bits(digest) ^ pad};
}

Digest decrypt_signature(const Signature& signature, const BitString& pad) {
  return split_digest(signature.body ^ pad);
}

double collision_bound(double message_bits, double hash_bits) {
  if (!(message_bits >= 1.0) || !(hash_bits >= 2.0)) {
    throw std::domain_error("collision_bound: need m >= 1, n >= 2");
  }
  // message_bits / 2^(hash_bits - 1); exponent can be far below double
  // range, in which case the bound is indistinguishable from 0.
  const double x = std::ldexp(message_bits, -int(hash_bits - 1.0));
  return x >= 1.0 ? 1.0 : x;
}

std::vector<std::uint8_t> serialize_digest(const Digest& digest) {
  return digest_bits(digest).serialize();
}

Digest deserialize_digest(const std::vector<std::uint8_t>& wire) {
  return split_digest(BitString::deserialize(wire));
}

std::vector<std::uint8_t> serialize_signature(const Signature& signature) {
  return signature.body.serialize();
}

Signature deserialize_signature(const std::vector<std::uint8_t>& wire) {
  return Signature{BitString::deserialize(wire)};
}

}  // namespace qds

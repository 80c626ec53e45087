#pragma once

#include <cstdint>
#include <vector>

#include "qds/bitstring.hpp"

namespace qds {

// Polynomial over GF(2); bit i of the word vector is the coefficient of x^i.
// Always stored normalized (no trailing zero words).
class Gf2Poly {
 public:
  Gf2Poly() = default;  // the zero polynomial

  static Gf2Poly one();
  static Gf2Poly x();
  // coefficients low-to-high: bit k of the string is the coefficient of x^k.
  static Gf2Poly from_coefficients(const BitString& low_to_high);
  // Low-level: adopts a word vector (bit i = coefficient of x^i).
  static Gf2Poly from_words(std::vector<std::uint64_t> words);

  // -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return words_.empty(); }
  bool coefficient(std::size_t i) const;
  void set_coefficient(std::size_t i, bool value);

  Gf2Poly operator^(const Gf2Poly& other) const;
  Gf2Poly& operator^=(const Gf2Poly& other);
  bool operator==(const Gf2Poly& other) const = default;

  // Low `count` coefficients as a bit string (hash outputs, wire form).
  BitString coefficients(std::size_t count) const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  void normalize();

 private:
  std::vector<std::uint64_t> words_;
};

// Remainder of a modulo m; m must be nonzero.
Gf2Poly gf2_mod(Gf2Poly a, const Gf2Poly& m);

// (a * b) mod m; m must have degree >= 1.
Gf2Poly gf2_mul_mod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& m);

Gf2Poly gf2_gcd(Gf2Poly a, Gf2Poly b);

// Rabin's criterion: x^(2^n) == x mod p and gcd(x^(2^(n/r)) - x, p) = 1 for
// every prime r dividing n = deg p.  Degree must be >= 1.
bool is_irreducible(const Gf2Poly& p);

// Deterministically derives a monic irreducible polynomial of the given
// degree (>= 2) from a seed string of exactly `degree` bits.  Candidates are
// drawn with constant term fixed to 1 and rejected until irreducible.
Gf2Poly gen_irreducible(const BitString& seed, std::size_t degree);

}  // namespace qds

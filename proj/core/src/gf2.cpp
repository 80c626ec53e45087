#include "qds/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

#include "qds/rng.hpp"

namespace qds {
namespace {

std::size_t words_for_bits(std::size_t bits) { return (bits + 63) / 64; }

bool get_bit(const std::vector<std::uint64_t>& w, std::size_t i) {
  const std::size_t k = i / 64;
  return k < w.size() && ((w[k] >> (i % 64)) & 1u);
}

int degree_of(const std::vector<std::uint64_t>& w) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] != 0) return int(64 * i + (63 - std::countl_zero(w[i])));
  }
  return -1;
}

// a ^= (b << k), growing a as needed.
void xor_shifted(std::vector<std::uint64_t>& a,
                 const std::vector<std::uint64_t>& b, std::size_t k) {
  const std::size_t word_shift = k / 64;
  const std::size_t bit_shift = k % 64;
  const std::size_t need = b.size() + word_shift + (bit_shift != 0 ? 1 : 0);
  if (a.size() < need) a.resize(need, 0);
  if (bit_shift == 0) {
    for (std::size_t i = 0; i < b.size(); ++i) a[i + word_shift] ^= b[i];
  } else {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[i + word_shift] ^= (b[i] << bit_shift) | carry;
      carry = b[i] >> (64 - bit_shift);
    }
    a[b.size() + word_shift] ^= carry;
  }
}

}  // namespace

Gf2Poly Gf2Poly::one() { return from_words({1}); }

Gf2Poly Gf2Poly::x() { return from_words({2}); }

Gf2Poly Gf2Poly::from_coefficients(const BitString& low_to_high) {
  return from_words(low_to_high.words());
}

Gf2Poly Gf2Poly::from_words(std::vector<std::uint64_t> words) {
  Gf2Poly p;
  p.words_ = std::move(words);
  p.normalize();
  return p;
}

void Gf2Poly::normalize() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

int Gf2Poly::degree() const { return degree_of(words_); }

bool Gf2Poly::coefficient(std::size_t i) const { return get_bit(words_, i); }

void Gf2Poly::set_coefficient(std::size_t i, bool value) {
  const std::size_t w = i / 64;
  if (w >= words_.size()) {
    if (!value) return;
    words_.resize(w + 1, 0);
  }
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[w] |= mask;
  } else {
    words_[w] &= ~mask;
    normalize();
  }
}

Gf2Poly Gf2Poly::operator^(const Gf2Poly& other) const {
  Gf2Poly out = *this;
  out ^= other;
  return out;
}

Gf2Poly& Gf2Poly::operator^=(const Gf2Poly& other) {
  if (words_.size() < other.words_.size()) {
    words_.resize(other.words_.size(), 0);
  }
  for (std::size_t i = 0; i < other.words_.size(); ++i) {
    words_[i] ^= other.words_[i];
  }
  normalize();
  return *this;
}

BitString Gf2Poly::coefficients(std::size_t count) const {
  BitString out(count);
  const std::size_t limit = std::min(count, words_.size() * 64);
  for (std::size_t i = 0; i < limit; ++i) {
    if (coefficient(i)) out.set_bit(i, true);
  }
  return out;
}

Gf2Poly gf2_mod(Gf2Poly a, const Gf2Poly& m) {
  if (m.is_zero()) throw std::invalid_argument("gf2_mod: zero modulus");
  std::vector<std::uint64_t> aw = a.words();
  const int dm = m.degree();
  for (int da = degree_of(aw); da >= dm; da = degree_of(aw)) {
    xor_shifted(aw, m.words(), std::size_t(da - dm));
  }
  return Gf2Poly::from_words(std::move(aw));
}

Gf2Poly gf2_mul_mod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& m) {
  const int dm = m.degree();
  if (dm < 1) throw std::invalid_argument("gf2_mul_mod: modulus degree < 1");
  const Gf2Poly ra0 = gf2_mod(a, m);
  const Gf2Poly rb = gf2_mod(b, m);

  const std::size_t nw = words_for_bits(std::size_t(dm) + 1);
  std::vector<std::uint64_t> ra(nw, 0), acc(nw, 0);
  std::copy(ra0.words().begin(), ra0.words().end(), ra.begin());

  const int db = rb.degree();
  for (int k = 0; k <= db; ++k) {
    if (rb.coefficient(std::size_t(k))) {
      for (std::size_t i = 0; i < nw; ++i) acc[i] ^= ra[i];
    }
    // ra <- ra*x mod m.  Degree was below dm, so one subtraction suffices.
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < nw; ++i) {
      const std::uint64_t next = ra[i] >> 63;
      ra[i] = (ra[i] << 1) | carry;
      carry = next;
    }
    if (get_bit(ra, std::size_t(dm))) {
      for (std::size_t i = 0; i < m.words().size(); ++i) ra[i] ^= m.words()[i];
    }
  }
  return Gf2Poly::from_words(std::move(acc));
}

Gf2Poly gf2_gcd(Gf2Poly a, Gf2Poly b) {
  while (!b.is_zero()) {
    Gf2Poly r = gf2_mod(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

namespace {

std::vector<std::size_t> prime_divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_irreducible(const Gf2Poly& p) {
  const int deg = p.degree();
  if (deg < 1) throw std::invalid_argument("is_irreducible: degree < 1");
  if (deg == 1) return true;
  const std::size_t n = std::size_t(deg);

  std::vector<std::size_t> checkpoints;
  for (std::size_t r : prime_divisors(n)) checkpoints.push_back(n / r);

  const Gf2Poly x = gf2_mod(Gf2Poly::x(), p);
  Gf2Poly t = x;
  for (std::size_t i = 1; i <= n; ++i) {
    t = gf2_mul_mod(t, t, p);
    if (std::find(checkpoints.begin(), checkpoints.end(), i) !=
        checkpoints.end()) {
      if (gf2_gcd(t ^ x, p).degree() != 0) return false;
    }
  }
  return t == x;
}

Gf2Poly gen_irreducible(const BitString& seed, std::size_t degree) {
  if (degree < 2) throw std::invalid_argument("gen_irreducible: degree < 2");
  if (seed.size() != degree) {
    throw std::invalid_argument("gen_irreducible: seed length != degree");
  }

  // Fold every seed word into the stream seed.
  std::uint64_t s = 0x9ae16a3b2f90404fULL ^ std::uint64_t(degree);
  for (std::uint64_t w : seed.words()) s = derive_seed(s, w);
  Rng rng(s);

  for (;;) {
    // Monic candidate with constant term 1; inner coefficients random.
    std::vector<std::uint64_t> w(words_for_bits(degree + 1), 0);
    for (auto& word : w) word = rng.next_u64();
    w[0] |= 1;
    const std::size_t top = degree % 64;
    w.back() &= (~std::uint64_t{0}) >> (63 - top);
    w[degree / 64] |= std::uint64_t{1} << top;
    Gf2Poly cand = Gf2Poly::from_words(std::move(w));
    if (is_irreducible(cand)) return cand;
  }
}

}  // namespace qds

#include <bit>
#include <stdexcept>

#include "oracles.hpp"

namespace qds::test {

namespace {

int word_degree(std::uint32_t p) { return 31 - std::countl_zero(p); }

// Remainder of a / b over GF(2) on word-packed coefficients.
std::uint32_t word_mod(std::uint64_t a, std::uint32_t b) {
  const int db = word_degree(b);
  while (a != 0) {
    const int da = 63 - std::countl_zero(a);
    if (da < db) break;
    a ^= static_cast<std::uint64_t>(b) << (da - db);
  }
  return static_cast<std::uint32_t>(a);
}

}  // namespace

bool trial_division_irreducible(std::uint32_t poly_bits) {
  if (poly_bits == 0 || word_degree(poly_bits) < 1) {
    throw std::invalid_argument("trial_division_irreducible: degree < 1");
  }
  const int deg = word_degree(poly_bits);
  if (deg > 20) {
    throw std::invalid_argument("trial_division_irreducible: degree > 20");
  }
  if (deg == 1) return true;
  for (int d = 1; d <= deg / 2; ++d) {
    for (std::uint32_t div = std::uint32_t{1} << d;
         div < (std::uint32_t{1} << (d + 1)); ++div) {
      if (word_mod(poly_bits, div) == 0) return false;
    }
  }
  return true;
}

std::uint64_t count_irreducible_by_division(int degree) {
  if (degree < 1 || degree > 16) {
    throw std::invalid_argument("count_irreducible_by_division: bad degree");
  }
  std::uint64_t count = 0;
  for (std::uint32_t p = std::uint32_t{1} << degree;
       p < (std::uint32_t{1} << (degree + 1)); ++p) {
    if (trial_division_irreducible(p)) ++count;
  }
  return count;
}

}  // namespace qds::test

#include <stdexcept>
#include <vector>

#include "oracles.hpp"

namespace qds::test {

namespace {

// One Galois-LFSR step on an explicit bit vector: multiply the state by x
// and reduce by poly.  state[i] is the coefficient of x^i; poly has
// degree n and the state length is n.
std::vector<bool> lfsr_step(const std::vector<bool>& state,
                            const Gf2Poly& poly) {
  const std::size_t n = state.size();
  std::vector<bool> next(n, false);
  for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] = state[i];
  if (state[n - 1]) {
    // x^n folds back through the low n coefficients of poly.
    for (std::size_t i = 0; i < n; ++i) {
      if (poly.coefficient(i)) next[i] = !next[i];
    }
  }
  return next;
}

}  // namespace

BitString toeplitz_matrix_hash(const Gf2Poly& poly, const BitString& init,
                               const BitString& message) {
  const int degree = poly.degree();
  if (degree < 2 || init.size() != static_cast<std::size_t>(degree)) {
    throw std::invalid_argument("toeplitz_matrix_hash: bad spec");
  }
  if (message.empty()) {
    throw std::invalid_argument("toeplitz_matrix_hash: empty message");
  }
  const std::size_t n = init.size();
  const std::size_t m = message.size();

  // columns[k] is the LFSR state after k steps.
  std::vector<std::vector<bool>> columns;
  columns.reserve(m);
  std::vector<bool> state(n);
  for (std::size_t i = 0; i < n; ++i) state[i] = init.bit(i);
  for (std::size_t k = 0; k < m; ++k) {
    columns.push_back(state);
    state = lfsr_step(state, poly);
  }

  BitString out(n);
  for (std::size_t row = 0; row < n; ++row) {
    bool acc = false;
    for (std::size_t k = 0; k < m; ++k) {
      if (message.bit(k) && columns[k][row]) acc = !acc;
    }
    out.set_bit(row, acc);
  }
  return out;
}

}  // namespace qds::test

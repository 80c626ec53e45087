#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <vector>

#include "qds/bitstring.hpp"

namespace qds {

// Exact number of strings within Hamming distance `radius` of a fixed
// center in {0,1}^length: sum of C(length, k) for k = 0..radius.
mpz_class hamming_ball_size(std::size_t length, std::size_t radius);

// log2 of the same quantity for real-valued (integer-valued) arguments at
// scales where the exact integer is unrepresentable.  Within a few parts
// in 1e9 absolute even at length 1e6 (1e-14 relative); see tests for the
// cross-check against the exact count.
double log2_hamming_ball_size(double length, double radius);

// A likely set: all strings within `radius` of `center`, carried around as
// (center, radius, exact cardinality) rather than materialized.
struct LikelySetSpec {
  BitString center;
  std::size_t radius = 0;
  mpz_class cardinality;
};

LikelySetSpec make_likely_set(BitString center, std::size_t radius);

// Streams ball members in a canonical order: distance ascending, ties
// broken by ascending lexicographic order of the flipped index set.  The
// first element is always the center itself.
class BallEnumerator {
 public:
  BallEnumerator(const BitString& center, std::size_t radius);

  // Writes the next member to `out`; returns false when exhausted.
  bool next(BitString& out);

 private:
  BitString center_;
  std::size_t radius_;
  std::size_t distance_ = 0;
  std::vector<std::size_t> combo_;
  bool fresh_ = true;
  bool done_ = false;
};

// Convenience wrapper: invokes fn for each member (with its running index)
// until fn returns false or the ball is exhausted.  Returns the number of
// members visited.
std::size_t enumerate_ball(
    const BitString& center, std::size_t radius,
    const std::function<bool(const BitString&, std::size_t)>& fn);

}  // namespace qds

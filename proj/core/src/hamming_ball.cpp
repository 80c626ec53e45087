#include "qds/hamming_ball.hpp"

#include <cmath>
#include <stdexcept>

#include "qds/entropy.hpp"

namespace qds {

mpz_class hamming_ball_size(std::size_t length, std::size_t radius) {
  if (radius > length) {
    throw std::invalid_argument("hamming_ball_size: radius > length");
  }
  mpz_class total = 1;
  mpz_class binom = 1;
  for (std::size_t k = 1; k <= radius; ++k) {
    binom *= static_cast<unsigned long>(length - k + 1);
    mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                    static_cast<unsigned long>(k));
    total += binom;
  }
  return total;
}

double log2_hamming_ball_size(double length, double radius) {
  if (!(length >= 0.0) || !(radius >= 0.0) || radius > length) {
    throw std::invalid_argument("log2_hamming_ball_size: bad arguments");
  }
  if (radius == 0.0) return 0.0;
  if (radius == length) return length;
  // Sum C(n,k) downward from k = r; successive ratios r/(n-r+1), ... shrink
  // geometrically whenever r < n/2, so the loop exits after a few dozen
  // terms except very close to r = n/2, where it stays exact by running out.
  const double lc = log2_binomial(length, radius);
  double acc = 1.0;
  double factor = 1.0;
  for (double j = 1.0; j <= radius; j += 1.0) {
    factor *= (radius - j + 1.0) / (length - radius + j);
    acc += factor;
    if (factor < acc * 1e-18) break;
  }
  return lc + std::log2(acc);
}

LikelySetSpec make_likely_set(BitString center, std::size_t radius) {
  if (radius > center.size()) {
    throw std::invalid_argument("make_likely_set: radius > length");
  }
  LikelySetSpec spec;
  spec.cardinality = hamming_ball_size(center.size(), radius);
  spec.center = std::move(center);
  spec.radius = radius;
  return spec;
}

BallEnumerator::BallEnumerator(const BitString& center, std::size_t radius)
    : center_(center), radius_(radius) {
  if (radius > center.size()) {
    throw std::invalid_argument("BallEnumerator: radius > length");
  }
}

bool BallEnumerator::next(BitString& out) {
  if (done_) return false;
  const std::size_t n = center_.size();

  if (fresh_) {
    fresh_ = false;
    out = center_;
    return true;
  }

  // Advance to the next flip combination, lexicographically; move to the
  // next distance when the current one is exhausted.
  bool advanced = false;
  if (distance_ > 0) {
    std::size_t i = distance_;
    while (i-- > 0) {
      if (combo_[i] + (distance_ - i) < n) {
        ++combo_[i];
        for (std::size_t j = i + 1; j < distance_; ++j) {
          combo_[j] = combo_[j - 1] + 1;
        }
        advanced = true;
        break;
      }
    }
  }
  if (!advanced) {
    ++distance_;
    if (distance_ > radius_ || distance_ > n) {
      done_ = true;
      return false;
    }
    combo_.resize(distance_);
    for (std::size_t j = 0; j < distance_; ++j) combo_[j] = j;
  }

  out = center_;
  for (std::size_t idx : combo_) out.flip_bit(idx);
  return true;
}

std::size_t enumerate_ball(
    const BitString& center, std::size_t radius,
    const std::function<bool(const BitString&, std::size_t)>& fn) {
  BallEnumerator en(center, radius);
  BitString current;
  std::size_t index = 0;
  while (en.next(current)) {
    const bool keep_going = fn(current, index);
    ++index;
    if (!keep_going) break;
  }
  return index;
}

}  // namespace qds

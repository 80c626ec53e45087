#include "qds/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qds {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binary_entropy: p outside [0,1]");
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double inverse_binary_entropy(double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw std::domain_error("inverse_binary_entropy: y outside [0,1]");
  }
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-17) break;
  }
  return 0.5 * (lo + hi);
}

double logadd2(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

double log2_binomial(double n, double k) {
  if (!(n >= 0.0) || !(k >= 0.0) || k > n) {
    throw std::domain_error("log2_binomial: need 0 <= k <= n");
  }
  constexpr double kLog2e = 1.4426950408889634074;
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
          std::lgamma(n - k + 1.0)) *
         kLog2e;
}

}  // namespace qds

#pragma once

#include <gmpxx.h>

namespace qds {

// A probability carried together with its base-2 logarithm.  The bounds
// routinely sit far below the smallest positive double, where `value`
// underflows to zero but `log2` stays meaningful and comparable.
struct Prob {
  double value = 0.0;
  double log2 = 0.0;
};

Prob prob_from_log2(double log2);
Prob prob_from_value(double value);

// log2 of a positive big integer, exact to double precision.
double log2_mpz(const mpz_class& v);

// Attacker success probability against a receiver who must reproduce all
// key bits within the tolerated error rate.  p_e is the error rate an
// optimal guesser can reach; p_g = 2^(-n * H2(p_e)) with
// H2(p_e) = delta1 * (1 - H2(e_ph)).
struct GuessingBound {
  double p_e = 0.0;
  Prob p_g;
};

GuessingBound guessing_bound(double n, double delta1, double e_ph);

// Probability that a tampered message slips through a likely-set search
// that tries `pairs` = n_x * n_y key candidates against an n-bit hash of
// an m-bit message: 1 - (1-x) * (1-x^2)^(pairs-1) with x = m / 2^(n-1),
// clamped to [0,1].  The log2 overload takes log2(n_x * n_y) for set sizes
// far beyond integer range; the exact overload takes the cardinalities.
Prob hash_forgery_bound(double m, double n, double log2_pairs);
Prob hash_forgery_bound(double m, double n, const mpz_class& n_x,
                        const mpz_class& n_y);

// The assembled security level: robustness and repudiation terms are
// structurally zero for this scheme, so epsilon = p_f = max(p_g, p_h).
// Set-size parameters are carried as log2 values for the same underflow
// reason as Prob.
struct SecurityReport {
  Prob p_g;
  Prob p_h;
  Prob p_f;
  Prob p_re;
  Prob p_ro;
  Prob epsilon;
  double p_e = 0.0;
  double n = 0.0;
  double m = 0.0;
  double log2_nx = 0.0;
  double log2_ny = 0.0;
};

SecurityReport security_level(const Prob& p_g, const Prob& p_h,
                              double p_e = 0.0, double n = 0.0, double m = 0.0,
                              double log2_nx = 0.0, double log2_ny = 0.0);

}  // namespace qds

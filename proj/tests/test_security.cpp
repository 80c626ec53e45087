#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "qds/entropy.hpp"
#include "qds/security.hpp"

namespace {

bool close_rel(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

const double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("Prob carries value and log2 through underflow") {
  const qds::Prob small = qds::prob_from_log2(-7.0);
  CHECK(small.value == 0.0078125);
  CHECK(small.log2 == -7.0);

  // Far below the smallest subnormal the value leg underflows to zero
  // while the log2 leg stays exact and comparable.
  const qds::Prob deep = qds::prob_from_log2(-1e6);
  CHECK(deep.value == 0.0);
  CHECK(deep.log2 == -1e6);

  const qds::Prob quarter = qds::prob_from_value(0.25);
  CHECK(quarter.value == 0.25);
  CHECK(quarter.log2 == -2.0);

  const qds::Prob zero = qds::prob_from_value(0.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.log2 == kNegInf);
}

TEST_CASE("log2_mpz is exact on powers of two and beyond double range") {
  CHECK(qds::log2_mpz(mpz_class(1)) == 0.0);
  CHECK(qds::log2_mpz(mpz_class(2)) == 1.0);
  CHECK(qds::log2_mpz(mpz_class(1) << 100) == 100.0);
  CHECK(qds::log2_mpz(mpz_class(1) << 1030) == 1030.0);
  CHECK(close_rel(qds::log2_mpz(mpz_class(561)), std::log2(561.0), 1e-15));

  CHECK_THROWS_AS(qds::log2_mpz(mpz_class(0)), std::invalid_argument);
  CHECK_THROWS_AS(qds::log2_mpz(mpz_class(-5)), std::invalid_argument);
}

TEST_CASE("guessing_bound matches the frozen deep-underflow point") {
  // n = 1e6, delta1 = 1/2, e_ph = 0.05: the entropy term is
  // 0.35680152144202193, so p_g = 2^(-356801.52...), far below double
  // range; only the log2 leg survives.
  const qds::GuessingBound got = qds::guessing_bound(1e6, 0.5, 0.05);
  CHECK(close_rel(got.p_e, 0.06757324745139694, 1e-10));
  CHECK(got.p_g.value == 0.0);
  CHECK(close_rel(got.p_g.log2, -356801.52144202194, 1e-12));
}

TEST_CASE("guessing_bound composes the entropy primitives") {
  const double entropy = 1.0 * (1.0 - qds::binary_entropy(0.25));
  const qds::GuessingBound got = qds::guessing_bound(12.0, 1.0, 0.25);
  CHECK(got.p_g.log2 == -12.0 * entropy);
  CHECK(got.p_e == qds::inverse_binary_entropy(entropy));
  CHECK(close_rel(got.p_g.value, std::exp2(-12.0 * entropy), 1e-15));

  // No single-photon fraction or a fully noisy phase: no security.
  CHECK(qds::guessing_bound(100.0, 0.0, 0.05).p_g.value == 1.0);
  CHECK(qds::guessing_bound(100.0, 0.5, 0.5).p_g.value == 1.0);

  CHECK_THROWS_AS(qds::guessing_bound(0.5, 0.5, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(qds::guessing_bound(10, -0.1, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(qds::guessing_bound(10, 1.1, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(qds::guessing_bound(10, 0.5, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(qds::guessing_bound(10, 0.5, -0.1), std::invalid_argument);
}

TEST_CASE("hash_forgery_bound matches the desk reference") {
  // m = 256, n = 16, 17 * 33 = 561 candidate pairs.
  const qds::Prob exact =
      qds::hash_forgery_bound(256.0, 16.0, mpz_class(17), mpz_class(33));
  CHECK(close_rel(exact.value, 0.04115314389345676, 1e-12));
  CHECK(close_rel(exact.log2, -4.602853540264077, 1e-12));

  const qds::Prob via_log =
      qds::hash_forgery_bound(256.0, 16.0, std::log2(561.0));
  CHECK(close_rel(via_log.value, exact.value, 1e-12));
  CHECK(close_rel(via_log.log2, exact.log2, 1e-12));

  // A single candidate degenerates to x = m / 2^(n-1) itself.
  const qds::Prob single =
      qds::hash_forgery_bound(256.0, 16.0, mpz_class(1), mpz_class(1));
  CHECK(single.value == 0.0078125);
  CHECK(single.log2 == -7.0);
  const qds::Prob spec = qds::hash_forgery_bound(1.0, 128.0, 0.0);
  CHECK(close_rel(spec.value, 5.877471754111438e-39, 1e-12));
  CHECK(spec.log2 == -127.0);
}

TEST_CASE("hash_forgery_bound covers every magnitude regime") {
  // Message space reaches the hash range: certain forgery.
  const qds::Prob sure = qds::hash_forgery_bound(32768.0, 16.0, 10.0);
  CHECK(sure.value == 1.0);
  CHECK(sure.log2 == 0.0);

  // Enough candidates that the survival factor rounds to zero.
  const qds::Prob sat = qds::hash_forgery_bound(256.0, 16.0, 30.0);
  CHECK(sat.value == 1.0);
  CHECK(sat.log2 == 0.0);
  const mpz_class big = mpz_class(1) << 600;
  CHECK(qds::hash_forgery_bound(256.0, 500.0, big, big).value == 1.0);

  // Production scale: m = 1e20, n = 1e6, 2^50 pairs.  The bound keeps
  // only its log2 leg, pinned by lx = log2(m) - (n-1).
  const qds::Prob deep = qds::hash_forgery_bound(1e20, 1e6, 50.0);
  CHECK(deep.value == 0.0);
  CHECK(close_rel(deep.log2, -999932.5614381023, 1e-12));

  // Between the regimes the log-domain sum must reproduce
  // 1 - e^(-u) with u = (pairs-1) x^2 + x dominated by the x^2 term.
  const qds::Prob mid = qds::hash_forgery_bound(1.0, 1000.0, 1990.0);
  CHECK(close_rel(mid.value, -std::expm1(-std::exp2(-8.0)), 1e-10));
  CHECK(mid.log2 == std::log2(mid.value));
}

TEST_CASE("hash_forgery_bound validates its domain") {
  CHECK_THROWS_AS(qds::hash_forgery_bound(0.5, 16.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(qds::hash_forgery_bound(256.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(qds::hash_forgery_bound(256.0, 16.0, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      qds::hash_forgery_bound(256.0, 16.0, mpz_class(0), mpz_class(5)),
      std::invalid_argument);
}

TEST_CASE("security_level keeps the larger failure mode by log2") {
  const qds::Prob pg = qds::prob_from_log2(-128.0);
  const qds::Prob ph = qds::prob_from_log2(-4.6);
  const qds::SecurityReport hash_led =
      qds::security_level(pg, ph, 0.1, 16.0, 256.0, 3.0, 4.0);
  CHECK(hash_led.p_f.log2 == ph.log2);
  CHECK(hash_led.epsilon.log2 == ph.log2);

  // Underflowed values still compare correctly through the log2 leg.
  const qds::Prob tiny_g = qds::prob_from_log2(-2e6);
  const qds::Prob tiny_h = qds::prob_from_log2(-1e6);
  CHECK(qds::security_level(tiny_g, tiny_h).p_f.log2 == -1e6);

  // Robustness and repudiation are structurally zero for this scheme.
  CHECK(hash_led.p_re.value == 0.0);
  CHECK(hash_led.p_re.log2 == kNegInf);
  CHECK(hash_led.p_ro.value == 0.0);
  CHECK(hash_led.p_ro.log2 == kNegInf);

  CHECK(hash_led.p_e == 0.1);
  CHECK(hash_led.n == 16.0);
  CHECK(hash_led.m == 256.0);
  CHECK(hash_led.log2_nx == 3.0);
  CHECK(hash_led.log2_ny == 4.0);
}

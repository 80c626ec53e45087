#include "qds/security.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qds/entropy.hpp"

namespace qds {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Core of the forgery bound, parameterized by logs so both overloads share
// it: lx = log2(x) with x = m/2^(n-1) < 1, log2_km1 = log2(pairs - 1),
// km1 = pairs - 1 as a double.  km1 is only read on the branch where
// log2_km1 + 2*lx < 10 and lx >= -500, which keeps it finite.
Prob forgery_from_logs(double lx, double log2_km1, double km1) {
  double t = log2_km1 + 2.0 * lx;  // log2 of (pairs-1) * x^2
  if (t >= 10.0) {
    // 1 - p_h <= exp(-(pairs-1) x^2) <= exp(-1024): rounds to 1
    return {1.0, 0.0};
  }
  if (lx >= -500.0) {
    // x^2 is a normal double: compose the exact log-form
    double x = std::exp2(lx);
    double val = -std::expm1(km1 * std::log1p(-x * x) + std::log1p(-x));
    return {val, std::log2(val)};
  }
  // x^2 underflows; to relative error ~x^2 the bound is
  // u = (pairs-1) x^2 + x, then p_h = 1 - e^(-u)
  double lu = logadd2(t, lx);
  if (lu > -53.0) {
    double val = -std::expm1(-std::exp2(lu));
    return {val, std::log2(val)};
  }
  // u below 2^-53: 1 - e^(-u) = u to double precision
  return {std::exp2(lu), lu};
}

void check_message_hash(double m, double n) {
  if (!(m >= 1.0)) {
    throw std::invalid_argument("message length must be at least 1");
  }
  if (!(n >= 2.0)) {
    throw std::invalid_argument("hash length must be at least 2");
  }
}

}  // namespace

Prob prob_from_log2(double log2) {
  return {std::exp2(log2), log2};
}

Prob prob_from_value(double value) {
  if (value == 0.0) return {0.0, kNegInf};
  return {value, std::log2(value)};
}

double log2_mpz(const mpz_class& v) {
  if (v <= 0) {
    throw std::invalid_argument("log2_mpz needs a positive value");
  }
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(d) + static_cast<double>(exp);
}

GuessingBound guessing_bound(double n, double delta1, double e_ph) {
  if (!(n >= 1.0)) {
    throw std::invalid_argument("key length must be at least 1");
  }
  if (!(delta1 >= 0.0) || !(delta1 <= 1.0)) {
    throw std::invalid_argument("single-photon fraction must be in [0,1]");
  }
  if (!(e_ph >= 0.0) || !(e_ph <= 0.5)) {
    throw std::invalid_argument("phase-flip rate must be in [0,1/2]");
  }
  double entropy = delta1 * (1.0 - binary_entropy(e_ph));
  GuessingBound out;
  out.p_e = inverse_binary_entropy(entropy);
  out.p_g = prob_from_log2(-n * entropy);
  return out;
}

Prob hash_forgery_bound(double m, double n, double log2_pairs) {
  check_message_hash(m, n);
  if (!(log2_pairs >= 0.0)) {
    throw std::invalid_argument("candidate count must be at least 1");
  }
  double lx = std::log2(m) - (n - 1.0);
  if (lx >= 0.0) return {1.0, 0.0};

  double km1;
  double log2_km1;
  if (log2_pairs <= 53.0) {
    km1 = std::exp2(log2_pairs) - 1.0;
    if (km1 <= 0.0) return prob_from_log2(lx);  // single candidate
    log2_km1 = std::log2(km1);
  } else {
    km1 = std::exp2(log2_pairs);
    log2_km1 = log2_pairs;
  }
  return forgery_from_logs(lx, log2_km1, km1);
}

Prob hash_forgery_bound(double m, double n, const mpz_class& n_x,
                        const mpz_class& n_y) {
  check_message_hash(m, n);
  if (n_x < 1 || n_y < 1) {
    throw std::invalid_argument("ball cardinalities must be at least 1");
  }
  double lx = std::log2(m) - (n - 1.0);
  if (lx >= 0.0) return {1.0, 0.0};

  mpz_class km1_exact = n_x * n_y - 1;
  if (km1_exact == 0) return prob_from_log2(lx);
  double log2_km1 = log2_mpz(km1_exact);
  double km1 = log2_km1 < 1020.0
                   ? km1_exact.get_d()
                   : std::numeric_limits<double>::infinity();
  return forgery_from_logs(lx, log2_km1, km1);
}

SecurityReport security_level(const Prob& p_g, const Prob& p_h, double p_e,
                              double n, double m, double log2_nx,
                              double log2_ny) {
  SecurityReport out;
  out.p_g = p_g;
  out.p_h = p_h;
  out.p_f = p_g.log2 >= p_h.log2 ? p_g : p_h;
  out.p_re = {0.0, kNegInf};
  out.p_ro = {0.0, kNegInf};
  out.epsilon = out.p_f;
  out.p_e = p_e;
  out.n = n;
  out.m = m;
  out.log2_nx = log2_nx;
  out.log2_ny = log2_ny;
  return out;
}

}  // namespace qds

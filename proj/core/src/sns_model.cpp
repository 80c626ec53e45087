#include "qds/sns_model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qds {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// The four Chernoff exponent functions.  Each is strictly decreasing from 0
// and is evaluated through its power series below this cutoff, where the
// closed form loses digits to cancellation between two near-equal terms.
constexpr double kSeriesCutoff = 1e-3;

// d/(1+d) - ln(1+d) = -d^2/2 + 2d^3/3 - 3d^4/4 + ...
double exponent_expected_lower(double d) {
  if (d >= kSeriesCutoff) return d / (1.0 + d) - std::log1p(d);
  double sum = 0.0;
  double power = d * d;
  for (int k = 1; k <= 12; ++k) {
    double term = static_cast<double>(k) / (k + 1.0) * power;
    sum += (k % 2 == 1) ? -term : term;
    power *= d;
  }
  return sum;
}

// -d/(1-d) - ln(1-d) = -d^2/2 - 2d^3/3 - 3d^4/4 - ..., domain (0,1)
double exponent_expected_upper(double d) {
  if (d >= kSeriesCutoff) return -d / (1.0 - d) - std::log1p(-d);
  double sum = 0.0;
  double power = d * d;
  for (int k = 1; k <= 12; ++k) {
    sum -= static_cast<double>(k) / (k + 1.0) * power;
    power *= d;
  }
  return sum;
}

// d - (1+d) ln(1+d) = -d^2/2 + d^3/6 - d^4/12 + ...
double exponent_real_upper(double d) {
  if (d >= kSeriesCutoff) return d - (1.0 + d) * std::log1p(d);
  double sum = 0.0;
  double power = d * d;
  for (int k = 2; k <= 13; ++k) {
    double term = power / (k * (k - 1.0));
    sum += (k % 2 == 0) ? -term : term;
    power *= d;
  }
  return sum;
}

// -d - (1-d) ln(1-d) = -d^2/2 - d^3/6 - d^4/12 - ..., domain (0,1),
// bounded below by -1
double exponent_real_lower(double d) {
  if (d >= kSeriesCutoff) return -d - (1.0 - d) * std::log1p(-d);
  double sum = 0.0;
  double power = d * d;
  for (int k = 2; k <= 13; ++k) {
    sum -= power / (k * (k - 1.0));
    power *= d;
  }
  return sum;
}

// Root of scale * f(d) = target on (0, hi], given f decreasing, f(0) = 0,
// target < 0, and scale * f(hi) <= target.
double bisect_exponent(double (*f)(double), double scale, double target,
                       double hi) {
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (scale * f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_chernoff_inputs(double observed, double xi) {
  if (!(observed > 0.0)) {
    throw std::domain_error("chernoff bound needs a positive input");
  }
  if (!(xi > 0.0) || !(xi < 1.0)) {
    throw std::domain_error("chernoff failure probability must be in (0,1)");
  }
}

template <typename F>
double simpson(const F& f, double a, double b, int panels) {
  double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Panel-doubling Simpson with Richardson extrapolation.  The integrands are
// entire functions on an interval shorter than pi, so the error estimate
// |cur - prev|/15 collapses after a few doublings.
template <typename F>
double integrate(const F& f, double a, double b) {
  double prev = simpson(f, a, b, 8);
  for (int panels = 16; panels <= (1 << 20); panels *= 2) {
    double cur = simpson(f, a, b, panels);
    if (std::abs(cur - prev) <= 1.5e-14) {
      return cur + (cur - prev) / 15.0;
    }
    prev = cur;
  }
  return prev;
}

// I0(x) - 1 evaluated without the unit anchor.  bessel_i0(x) - 1.0 keeps
// an absolute error near ulp(1), which dominates the detection brackets
// once the channel transmission drops below ~1e-7.
double bessel_i0_minus_one(double x) {
  if (x >= 0.5) return bessel_i0(x) - 1.0;
  double quarter = 0.25 * x * x;
  double term = quarter;
  double sum = term;
  for (int k = 2; k <= 16 && term > 1e-18 * sum; ++k) {
    term *= quarter / (k * k);
    sum += term;
  }
  return sum;
}

// Counting rate of a decoy pair where one side sends intensity mu and the
// other sends vacuum; mu = 0 degenerates to the dark-count-only rate.
// Algebraically 2(s e^{-x/2} - s^2 e^{-x}); the factored form keeps full
// relative accuracy when the exponentials are both close to one.
double one_sided_rate(double eta, double mu, double p_d) {
  double s = 1.0 - p_d;
  double x = eta * mu;
  return 2.0 * s * std::exp(-x) * (std::expm1(x / 2.0) + p_d);
}

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

double ChannelParams::efficiency() const {
  return std::pow(10.0, -alpha * l / 10.0) * eta_d;
}

void validate_params(const ChannelParams& ch, const SnsParams& p,
                     const FailureProbs& fp) {
  require(ch.alpha > 0.0, "fiber loss must be positive");
  require(ch.l >= 0.0, "half-distance must be nonnegative");
  require(ch.eta_d >= 0.0 && ch.eta_d <= 1.0,
          "detector efficiency must be in [0,1]");
  require(ch.p_d >= 0.0 && ch.p_d < 1.0, "dark-count rate must be in [0,1)");
  require(ch.e_d >= 0.0 && ch.e_d < 0.5, "misalignment must be in [0,1/2)");
  require(p.N > 0.0, "pulse count must be positive");
  require(p.mu > 0.0, "signal intensity must be positive");
  require(p.mu1 > 0.0 && p.mu1 < p.mu2, "need 0 < mu1 < mu2");
  require(p.q > 0.0 && p.q < 1.0, "send probability must be in (0,1)");
  require(p.p_z > 0.0 && p.p_z < 1.0,
          "signal-window probability must be in (0,1)");
  require(p.p0 > 0.0 && p.p0 < 1.0 && p.p1 > 0.0 && p.p1 < 1.0 &&
              p.p0 + p.p1 < 1.0,
          "decoy probabilities must be in (0,1) with p0 + p1 < 1");
  require(p.Delta > 0.0 && p.Delta <= 2.0 * kPi,
          "phase slice must be in (0, 2*pi]");
  require(p.gamma > 0.0 && p.gamma < 1.0,
          "test fraction must be in (0,1)");
  require(fp.xi > 0.0 && fp.xi < 1.0,
          "chernoff failure probability must be in (0,1)");
  require(fp.eps_p > 0.0 && fp.eps_p < 1.0,
          "sampling failure probability must be in (0,1)");
}

CountingRates counting_rates(const ChannelParams& ch, const SnsParams& p) {
  double eta = ch.efficiency();
  double s = 1.0 - ch.p_d;
  double x = eta * p.mu;
  double decay = std::exp(-x);
  CountingRates out;
  // Algebraically 2(s e^{-x/2} - s^2 e^{-x}) and
  // 2(s e^{-x} I0(x) - s^2 e^{-2x}); factored so that no difference of
  // near-unit terms survives at high loss.
  out.s_c = 2.0 * s * decay * (std::expm1(x / 2.0) + ch.p_d);
  out.s_d = 2.0 * s * decay *
            (bessel_i0_minus_one(x) - std::expm1(-x) + ch.p_d * decay);
  out.s_v = 2.0 * ch.p_d * s;
  return out;
}

EventCounts event_counts(const SnsParams& p, const CountingRates& rates) {
  double base = p.N * p.p_z * p.p_z;
  EventCounts out;
  out.n_c = 2.0 * base * p.q * (1.0 - p.q) * rates.s_c;
  out.n_d = base * p.q * p.q * rates.s_d;
  out.n_v = base * (1.0 - p.q) * (1.0 - p.q) * rates.s_v;
  out.n_t = out.n_c + out.n_d + out.n_v;
  out.t = p.gamma * out.n_t;
  out.n = std::floor((out.n_t - out.t) / 3.0);
  out.feasible = out.n_t > 0.0 && out.t >= 1.0 && out.n >= 1.0;
  return out;
}

double bit_flip_error(double n_d, double n_v, double n_t) {
  if (!(n_t > 0.0)) {
    throw std::domain_error("bit-flip rate needs a positive event total");
  }
  return (n_d + n_v) / n_t;
}

double serfling_margin(double n, double t, double eps_p) {
  if (!(n >= 1.0) || !(t >= 1.0)) {
    throw std::domain_error("sampling margin needs n >= 1 and t >= 1");
  }
  if (!(eps_p > 0.0) || !(eps_p < 1.0)) {
    throw std::domain_error("sampling failure probability must be in (0,1)");
  }
  return std::sqrt((n - t + 1.0) * std::log(1.0 / eps_p) / (2.0 * n * t));
}

ChernoffBounds chernoff_expected_bounds(double x, double xi) {
  check_chernoff_inputs(x, xi);
  double target = std::log(xi / 2.0);
  ChernoffBounds out;

  double hi = 1.0;
  while (x * exponent_expected_lower(hi) > target && hi < 1e300) hi *= 2.0;
  if (x * exponent_expected_lower(hi) <= target) {
    out.delta_lower = bisect_exponent(exponent_expected_lower, x, target, hi);
    out.lower = x / (1.0 + out.delta_lower);
    out.lower_ok = true;
  }

  double edge = 1.0 - 1e-15;
  if (x * exponent_expected_upper(edge) <= target) {
    out.delta_upper = bisect_exponent(exponent_expected_upper, x, target, edge);
    out.upper = x / (1.0 - out.delta_upper);
    out.upper_ok = true;
  } else {
    out.upper = kInf;
  }

  assert(!out.lower_ok || out.lower <= x);
  assert(!out.upper_ok || out.upper >= x);
  return out;
}

ChernoffBounds chernoff_real_bounds(double y, double xi) {
  check_chernoff_inputs(y, xi);
  double target = std::log(xi / 2.0);
  ChernoffBounds out;

  double hi = 1.0;
  while (y * exponent_real_upper(hi) > target && hi < 1e300) hi *= 2.0;
  if (y * exponent_real_upper(hi) <= target) {
    out.delta_upper = bisect_exponent(exponent_real_upper, y, target, hi);
    out.upper = (1.0 + out.delta_upper) * y;
    out.upper_ok = true;
  } else {
    out.upper = kInf;
  }

  // The lower-side exponent is bounded below by -1, so a root exists only
  // when y >= ln(2/xi); smaller runs cannot be bounded away from zero.
  double edge = 1.0 - 1e-15;
  if (y * exponent_real_lower(edge) <= target) {
    out.delta_lower = bisect_exponent(exponent_real_lower, y, target, edge);
    out.lower = (1.0 - out.delta_lower) * y;
    out.lower_ok = true;
  }

  assert(!out.lower_ok || out.lower <= y);
  assert(!out.upper_ok || out.upper >= y);
  return out;
}

double bessel_i0(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("bessel_i0 domain is x >= 0");
  }
  double quarter = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  // The largest term sits near k = x/2, so the bound comfortably covers
  // every x below the overflow threshold (I0(x) > DBL_MAX for x > ~713).
  for (int k = 1; k <= 20000; ++k) {
    term *= quarter / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

PhaseIntegrals tx_sx(const ChannelParams& ch, const SnsParams& p) {
  if (!(p.Delta > 0.0)) {
    throw std::domain_error("phase slice width must be positive");
  }
  double eta = ch.efficiency();
  double s = 1.0 - ch.p_d;
  double twomu = 2.0 * eta * p.mu1;
  auto cos_part = [&](double d) {
    double c = std::cos(d / 2.0);
    return s * std::exp(-twomu * c * c);
  };
  auto sin_part = [&](double d) {
    double c = std::sin(d / 2.0);
    return s * std::exp(-twomu * c * c);
  };
  double a = -p.Delta / 2.0;
  double b = p.Delta / 2.0;
  double floor_term = s * s * std::exp(-twomu);
  PhaseIntegrals out;
  out.t_x = integrate(cos_part, a, b) / p.Delta - floor_term;
  out.s_x = integrate(sin_part, a, b) / p.Delta - floor_term + out.t_x;
  return out;
}

DecoyRates model_decoy_counting_rates(const ChannelParams& ch,
                                      const SnsParams& p) {
  double eta = ch.efficiency();
  DecoyRates out;
  out.s_00 = 2.0 * ch.p_d * (1.0 - ch.p_d);
  out.s_01 = out.s_10 = one_sided_rate(eta, p.mu1, ch.p_d);
  out.s_02 = out.s_20 = one_sided_rate(eta, p.mu2, ch.p_d);
  return out;
}

DecoyS1Result decoy_s1_lower(double s01_lower, double s10_lower,
                             double s02_upper, double s20_upper,
                             double s00_upper, double mu1, double mu2) {
  if (!(mu1 > 0.0) || !(mu2 > mu1)) {
    throw std::invalid_argument("decoy bound needs 0 < mu1 < mu2");
  }
  double denom = mu1 * mu2 * (mu2 - mu1);
  double weak = mu2 * mu2 * std::exp(mu1);
  double strong = mu1 * mu1 * std::exp(mu2);
  double vac = mu2 * mu2 - mu1 * mu1;
  DecoyS1Result out;
  out.s01 = (weak * s01_lower - strong * s02_upper - vac * s00_upper) / denom;
  out.s10 = (weak * s10_lower - strong * s20_upper - vac * s00_upper) / denom;
  double raw = 0.5 * (out.s01 + out.s10);
  out.s1 = std::clamp(raw, 0.0, 1.0);
  out.clamped = out.s1 != raw;
  return out;
}

TDeltaResult t_delta_upper(const ChannelParams& ch, const SnsParams& p,
                           double xi) {
  TDeltaResult out;
  PhaseIntegrals ph = tx_sx(ch, p);
  out.t_x = ph.t_x;
  out.s_x = ph.s_x;
  double off = 1.0 - p.p_z;
  out.window_count = p.Delta / (2.0 * kPi) * off * off * p.p1 * p.p1 * p.N;
  if (out.window_count < 1.0) return out;

  double per_detector =
    (ph.t_x * (1.0 - 2.0 * ch.e_d) + ch.e_d * ph.s_x) * out.window_count;
  out.event_count = 2.0 * per_detector;
  if (out.event_count <= 0.0) {
    out.zero_count = true;
    out.t_delta_upper = 0.0;
    out.ok = true;
    return out;
  }
  ChernoffBounds cb = chernoff_expected_bounds(out.event_count, xi);
  if (!cb.upper_ok) return out;
  out.t_delta_upper = cb.upper / (2.0 * out.window_count);
  out.ok = true;
  return out;
}

PhaseFlipResult phase_flip_upper(double t_delta_upper, double s00_lower,
                                 double s1_lower, double mu1) {
  if (!(mu1 > 0.0)) {
    throw std::domain_error("phase-flip bound needs mu1 > 0");
  }
  PhaseFlipResult out;
  if (!(s1_lower > 0.0)) return out;
  double scale = std::exp(-2.0 * mu1);
  double raw = (t_delta_upper - 0.5 * scale * s00_lower) /
               (2.0 * mu1 * scale * s1_lower);
  out.value = std::clamp(raw, 0.0, 0.5);
  out.clamped = out.value != raw;
  out.ok = true;
  return out;
}

RealizedEstimates realize_estimates(double delta1_expected,
                                    double e_ph_upper_expected, double n,
                                    double xi) {
  if (!(n >= 1.0)) {
    throw std::domain_error("realization needs a key length n >= 1");
  }
  if (delta1_expected < 0.0 || e_ph_upper_expected < 0.0) {
    throw std::domain_error("expected estimates must be nonnegative");
  }
  RealizedEstimates out;
  double expected_ones = n * delta1_expected;
  if (expected_ones <= 0.0) return out;
  ChernoffBounds cb1 = chernoff_real_bounds(expected_ones, xi);
  out.delta1 = cb1.lower / n;
  if (out.delta1 > 1.0) {
    out.delta1 = 1.0;
    out.clamped = true;
  }
  if (out.delta1 <= 0.0) return out;

  double expected_flips = n * out.delta1 * e_ph_upper_expected;
  if (expected_flips <= 0.0) return out;
  ChernoffBounds cb2 = chernoff_real_bounds(expected_flips, xi);
  double raw = cb2.upper / (n * out.delta1);
  out.e_ph = std::clamp(raw, 0.0, 0.5);
  out.clamped = out.clamped || out.e_ph != raw;
  return out;
}

std::string_view to_string(PipelineStatus status) {
  switch (status) {
    case PipelineStatus::ok: return "ok";
    case PipelineStatus::no_test_events: return "no_test_events";
    case PipelineStatus::window_infeasible: return "window_infeasible";
    case PipelineStatus::chernoff_infeasible: return "chernoff_infeasible";
    case PipelineStatus::zero_delta1: return "zero_delta1";
    case PipelineStatus::error_rate_too_high: return "error_rate_too_high";
  }
  return "unknown";
}

KgpEstimates run_kgp_model(const ChannelParams& ch, const SnsParams& p,
                           const FailureProbs& fp) {
  validate_params(ch, p, fp);
  KgpEstimates out;
  out.rates = counting_rates(ch, p);
  out.counts = event_counts(p, out.rates);
  if (!out.counts.feasible) {
    out.status = PipelineStatus::no_test_events;
    return out;
  }
  out.e_t = bit_flip_error(out.counts.n_d, out.counts.n_v, out.counts.n_t);
  out.margin = serfling_margin(out.counts.n, out.counts.t, fp.eps_p);
  out.e_bound = std::min(out.e_t + out.margin, 0.5);

  out.decoy = model_decoy_counting_rates(ch, p);
  double off = 1.0 - p.p_z;
  double decoy_windows = p.N * off * off;
  double p2 = 1.0 - p.p0 - p.p1;
  double w01 = decoy_windows * p.p0 * p.p1;
  double w02 = decoy_windows * p.p0 * p2;
  double w00 = decoy_windows * p.p0 * p.p0;

  auto rate_lower = [&](double rate, double windows) {
    double count = rate * windows;
    if (count <= 0.0) return 0.0;
    ChernoffBounds cb = chernoff_expected_bounds(count, fp.xi);
    return cb.lower_ok ? cb.lower / windows : 0.0;
  };
  bool upper_ok = true;
  auto rate_upper = [&](double rate, double windows) {
    double count = rate * windows;
    if (count <= 0.0) {
      upper_ok = false;
      return kInf;
    }
    ChernoffBounds cb = chernoff_expected_bounds(count, fp.xi);
    if (!cb.upper_ok) {
      upper_ok = false;
      return kInf;
    }
    double bounded = cb.upper / windows;
    if (bounded > 1.0) {
      bounded = 1.0;
      ++out.clamp_events;
    }
    return bounded;
  };

  out.s01_lower = rate_lower(out.decoy.s_01, w01);
  out.s10_lower = rate_lower(out.decoy.s_10, w01);
  out.s02_upper = rate_upper(out.decoy.s_02, w02);
  out.s20_upper = rate_upper(out.decoy.s_20, w02);
  out.s00_lower = rate_lower(out.decoy.s_00, w00);
  out.s00_upper = rate_upper(out.decoy.s_00, w00);
  if (!upper_ok) {
    out.status = PipelineStatus::chernoff_infeasible;
    return out;
  }

  DecoyS1Result s1 = decoy_s1_lower(out.s01_lower, out.s10_lower,
                                    out.s02_upper, out.s20_upper,
                                    out.s00_upper, p.mu1, p.mu2);
  if (s1.clamped) ++out.clamp_events;
  out.s1_lower = s1.s1;

  TDeltaResult td = t_delta_upper(ch, p, fp.xi);
  out.t_x = td.t_x;
  out.s_x = td.s_x;
  out.window_count = td.window_count;
  out.t_delta_upper = td.t_delta_upper;
  if (!td.ok) {
    out.status = td.window_count < 1.0 ? PipelineStatus::window_infeasible
                                       : PipelineStatus::chernoff_infeasible;
    return out;
  }

  PhaseFlipResult eph = phase_flip_upper(out.t_delta_upper, out.s00_lower,
                                         out.s1_lower, p.mu1);
  if (!eph.ok) {
    out.status = PipelineStatus::zero_delta1;
    return out;
  }
  if (eph.clamped) ++out.clamp_events;
  out.e_ph_upper_expected = eph.value;

  double raw_expected = 2.0 * p.N * p.p_z * p.p_z * p.q * (1.0 - p.q) *
                        p.mu * std::exp(-p.mu) * out.s1_lower / out.counts.n_t;
  out.delta1_expected = std::min(raw_expected, 1.0);
  if (out.delta1_expected != raw_expected) ++out.clamp_events;

  RealizedEstimates realized = realize_estimates(
    out.delta1_expected, out.e_ph_upper_expected, out.counts.n, fp.xi);
  if (realized.clamped) ++out.clamp_events;
  out.delta1 = realized.delta1;
  out.e_ph = realized.e_ph;
  if (out.delta1 <= 0.0) {
    out.status = PipelineStatus::zero_delta1;
    return out;
  }

  out.status = out.e_bound >= 0.5 ? PipelineStatus::error_rate_too_high
                  : PipelineStatus::ok;
  return out;
}

}  // namespace qds

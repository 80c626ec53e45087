#pragma once

#include <string_view>

namespace qds {

// Optical channel between one participant and the midpoint measurement
// node.  Losses are symmetric: `l` is half of the participant-to-participant
// distance, so the end-to-end link at distance D uses l = D/2.
struct ChannelParams {
  double alpha = 0.2;   // fiber loss, dB/km
  double l = 50.0;      // half-distance, km
  double eta_d = 0.5;   // detector efficiency
  double p_d = 1e-8;    // dark-count probability per window
  double e_d = 0.02;    // misalignment error rate

  // eta = 10^(-alpha*l/10) * eta_d
  double efficiency() const;
};

// Source-side knobs of one key-generation run.  Probabilities are per time
// window; mu0 = 0 is fixed, so the decoy intensities are {0, mu1, mu2} with
// probabilities {p0, p1, 1-p0-p1}.
struct SnsParams {
  double N = 1e12;       // total pulse count
  double mu = 0.45;      // signal intensity
  double mu1 = 0.05;     // weak decoy intensity
  double mu2 = 0.15;     // strong decoy intensity
  double q = 0.06;       // send probability inside a signal window
  double p_z = 0.7;      // signal-window probability
  double p0 = 0.5;       // vacuum probability inside a decoy window
  double p1 = 0.25;      // weak-decoy probability inside a decoy window
  double Delta = 0.20943951023931953;  // phase slice width, pi/15
  double gamma = 0.10;   // fraction of effective bits spent on testing
};

// Failure budgets of the two estimation layers.
struct FailureProbs {
  double xi = 1e-12;     // per-bound Chernoff failure probability
  double eps_p = 1e-10;  // random-sampling failure probability
};

// Throws std::invalid_argument when a field is outside its physical range.
// Free helpers below accept degenerate values (eta = 0, q = 0, ...) so they
// can be probed directly; only the full pipeline insists on this check.
void validate_params(const ChannelParams& ch, const SnsParams& p,
                     const FailureProbs& fp);

// Counting rates of the three effective-event classes: exactly one side
// sends (C), both send (D), neither sends (V).
struct CountingRates {
  double s_c = 0.0;
  double s_d = 0.0;
  double s_v = 0.0;
};

CountingRates counting_rates(const ChannelParams& ch, const SnsParams& p);

// Expected event counts are carried as reals; only the key length n floors.
// feasible = enough events to split off a test sample and a key at all.
struct EventCounts {
  double n_c = 0.0;
  double n_d = 0.0;
  double n_v = 0.0;
  double n_t = 0.0;   // total effective events
  double t = 0.0;     // test-sample size, gamma * n_t
  double n = 0.0;     // key length per string, floor((n_t - t)/3)
  bool feasible = false;
};

EventCounts event_counts(const SnsParams& p, const CountingRates& rates);

// (n_d + n_v) / n_t.  Requires n_t > 0.
double bit_flip_error(double n_d, double n_v, double n_t);

// One-sided random-sampling penalty for estimating the error rate of n
// remaining bits from a test sample of size t.  t is accepted as a real
// expectation; requires n >= 1, t >= 1, eps_p in (0,1).
double serfling_margin(double n, double t, double eps_p);

// Two-sided Chernoff interval.  `lower`/`upper` bracket the estimated
// quantity; delta_lower/delta_upper are the solved deviation parameters.
// A side whose defining equation has no numeric root reports ok = false
// and falls back to the honest trivial bound (0 below, +infinity above).
struct ChernoffBounds {
  double lower = 0.0;
  double upper = 0.0;
  double delta_lower = 0.0;
  double delta_upper = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
};

// Bounds on the expected value given an observed count x > 0:
// lower = x/(1+d1), upper = x/(1-d2) with d1, d2 solving
//   x*(d/(1+d) - ln(1+d)) = ln(xi/2)   and
//   x*(-d/(1-d) - ln(1-d)) = ln(xi/2),  d2 in (0,1).
// The second equation loses its numeric root for tiny x; that side then
// reports upper_ok = false.
ChernoffBounds chernoff_expected_bounds(double x, double xi);

// Bounds on the realized value given an expected count y > 0:
// lower = (1-d2')*y, upper = (1+d1')*y with d1', d2' solving
//   y*(d - (1+d)*ln(1+d)) = ln(xi/2)   and
//   y*(-d - (1-d)*ln(1-d)) = ln(xi/2),  d2' in (0,1).
// The lower equation has a root only when y >= ln(2/xi); below that the
// side reports lower_ok = false and lower = 0.
ChernoffBounds chernoff_real_bounds(double y, double xi);

// Modified Bessel function of the first kind, order zero; x >= 0.
double bessel_i0(double x);

// Averaged detector response of the phase-slice test windows.  t_x uses the
// cos^2 integrand, s_x the sin^2 integrand plus t_x, both normalized by the
// slice width.
struct PhaseIntegrals {
  double t_x = 0.0;
  double s_x = 0.0;
};

PhaseIntegrals tx_sx(const ChannelParams& ch, const SnsParams& p);

// Forward detector model for the decoy-window counting rates.  The pipeline
// treats these as the observables an experiment would report.
struct DecoyRates {
  double s_00 = 0.0;
  double s_01 = 0.0;
  double s_10 = 0.0;
  double s_02 = 0.0;
  double s_20 = 0.0;
};

DecoyRates model_decoy_counting_rates(const ChannelParams& ch,
                                      const SnsParams& p);

// Two-intensity decoy lower bound on the single-photon counting rate.
// Inputs are the already-bounded expected rates (lower bounds on s_01/s_10,
// upper bounds on s_02/s_20/s_00).  s1 is the clamped average of the two
// one-sided estimates; s01/s10 keep their raw values for diagnostics.
struct DecoyS1Result {
  double s01 = 0.0;
  double s10 = 0.0;
  double s1 = 0.0;
  bool clamped = false;
};

DecoyS1Result decoy_s1_lower(double s01_lower, double s10_lower,
                             double s02_upper, double s20_upper,
                             double s00_upper, double mu1, double mu2);

// Phase-slice test statistics: window count per detector sign, raw event
// count over both detectors, and the bounded average error rate.  ok turns
// false when the slice holds less than one window or the upper Chernoff
// bound has no root; zero_count marks the degenerate all-zero response.
struct TDeltaResult {
  double t_x = 0.0;
  double s_x = 0.0;
  double window_count = 0.0;
  double event_count = 0.0;
  double t_delta_upper = 0.0;
  bool zero_count = false;
  bool ok = false;
};

TDeltaResult t_delta_upper(const ChannelParams& ch, const SnsParams& p,
                           double xi);

// Upper bound on the expected phase-flip error rate.  Requires s1_lower > 0
// (ok = false otherwise); the ratio is clamped to [0, 1/2].
struct PhaseFlipResult {
  double value = 0.0;
  bool clamped = false;
  bool ok = false;
};

PhaseFlipResult phase_flip_upper(double t_delta_upper, double s00_lower,
                                 double s1_lower, double mu1);

// Realized single-photon fraction and phase-flip rate of one run of key
// length n, obtained from the expected values through the real-value
// Chernoff bounds.  delta1 = 0 is reported through ok = false by callers
// that need it strictly positive.
struct RealizedEstimates {
  double delta1 = 0.0;
  double e_ph = 0.0;
  bool clamped = false;
};

RealizedEstimates realize_estimates(double delta1_expected,
                                    double e_ph_upper_expected, double n,
                                    double xi);

// Where a pipeline run stopped, or `ok` when every stage produced a usable
// value.  Statuses other than `ok` mean the parameter point cannot back a
// signature at the requested failure budgets.
enum class PipelineStatus {
  ok,
  no_test_events,       // too few effective events to test and key
  window_infeasible,    // phase slice captures less than one window
  chernoff_infeasible,  // a required upper bound has no numeric root
  zero_delta1,          // single-photon fraction bounded by zero
  error_rate_too_high,  // bit-flip bound reached 1/2
};

std::string_view to_string(PipelineStatus status);

// Every intermediate of one end-to-end model evaluation.  Fields below
// `status` are valid only for the stages that ran; clamp_events counts how
// often an estimate had to be pulled back into its physical range.
struct KgpEstimates {
  CountingRates rates;
  EventCounts counts;
  double e_t = 0.0;       // observed bit-flip rate
  double margin = 0.0;    // sampling penalty
  double e_bound = 0.0;   // bit-flip bound E for the kept bits
  DecoyRates decoy;
  double s01_lower = 0.0;
  double s10_lower = 0.0;
  double s02_upper = 0.0;
  double s20_upper = 0.0;
  double s00_lower = 0.0;
  double s00_upper = 0.0;
  double s1_lower = 0.0;
  double t_x = 0.0;
  double s_x = 0.0;
  double window_count = 0.0;
  double t_delta_upper = 0.0;
  double e_ph_upper_expected = 0.0;
  double delta1_expected = 0.0;
  double delta1 = 0.0;
  double e_ph = 0.0;
  int clamp_events = 0;
  PipelineStatus status = PipelineStatus::no_test_events;
};

// Runs the full finite-size estimation chain: counting statistics, test
// sampling, decoy bounds, phase-slice test, and realization.  Stops at the
// first stage that cannot produce a usable value and records why.
KgpEstimates run_kgp_model(const ChannelParams& ch, const SnsParams& p,
                           const FailureProbs& fp);

}  // namespace qds

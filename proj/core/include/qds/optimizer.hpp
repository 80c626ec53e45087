#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qds/security.hpp"
#include "qds/sns_model.hpp"

namespace qds {

// A configuration is accepted when its security level stays at or below
// epsilon for a signed message of message_bits bits.
struct SecurityTarget {
  double epsilon = 1e-10;
  double message_bits = 1e20;
};

// Search-space limits.  Intensities move on a log scale; probabilities are
// clamped into [prob_min, prob_max]; pulse counts live on a quarter-octave
// log grid anchored at pulses_min.
struct SearchBounds {
  double mu_min = 1e-4;
  double mu_max = 1.0;
  double prob_min = 0.01;
  double prob_max = 0.99;
  double pulses_min = 1e8;
  double pulses_max = 1e14;
};

enum class FeasibilityReason {
  feasible,
  model_infeasible,      // model.status names the stage that failed
  epsilon_above_target,
};

// One evaluated configuration: the model trace, the security report built
// from it under symmetric link errors, and the signature rate R = m/(2N).
// An infeasible point reports rate 0: it cannot sign anything.
struct RatePoint {
  double distance_km = 0.0;
  double rate = 0.0;
  SnsParams params;
  KgpEstimates model;
  SecurityReport report;
  bool feasible = false;
  FeasibilityReason reason = FeasibilityReason::model_infeasible;
};

// Full pipeline for one parameter point: key-generation model, then the
// security bounds with both link error rates set to the model's bit-flip
// bound and likely-set radii derived from it.
RatePoint evaluate(const ChannelParams& ch, const SnsParams& p,
                   const FailureProbs& fp, const SecurityTarget& target);

// Smallest pulse count on the log grid that makes `p` feasible.  Assumes
// feasibility is monotone in N; the result is re-checked at N/2 and any
// non-monotone pocket is descended through, so the returned N* always
// satisfies: evaluate(N*) feasible, evaluate(floor(N*/2)) infeasible.
// absent = nothing feasible up to bounds.pulses_max, or the evaluation
// budget ran out first.
std::optional<double> minimize_pulse_count(
  const ChannelParams& ch, const SnsParams& p, const FailureProbs& fp,
  const SecurityTarget& target, const SearchBounds& bounds = {},
  std::uint64_t budget = UINT64_MAX, std::uint64_t* evals_used = nullptr);

// Deterministic derivative-free search.  Evaluates the starting point
// first (so budget 1 reports exactly that point), runs a coarse grid over
// (mu, q, p_z) when no start is given, then first-improvement coordinate
// descent over the seven source knobs with the pulse count reminimized for
// every candidate.  `budget` caps evaluate() calls; the candidate sequence
// does not depend on it, so a larger budget never returns a worse rate.
// Returns the best feasible point seen, or the starting point's
// evaluation (feasible = false) when nothing feasible was found.
RatePoint search(const ChannelParams& ch, const FailureProbs& fp,
                 const SecurityTarget& target, std::uint64_t budget,
                 const SearchBounds& bounds = {},
                 const SnsParams* start = nullptr);

// Per-distance search over ascending full distances (km), each warm-started
// from the previous feasible optimum.  Every distance gets the full budget.
std::vector<RatePoint> sweep(const std::vector<double>& distances_km,
                             const ChannelParams& ch, const FailureProbs& fp,
                             const SecurityTarget& target, std::uint64_t budget,
                             const SearchBounds& bounds = {});

}  // namespace qds

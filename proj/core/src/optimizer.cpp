#include "qds/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "qds/hamming_ball.hpp"

namespace qds {

namespace {

std::array<double, 7> knob_key(const SnsParams& p) {
  return {p.mu, p.mu1, p.mu2, p.q, p.p_z, p.p0, p.p1};
}

// best = highest rate; rate ties mean equal N, broken lexicographically so
// the selection is independent of evaluation order.
bool better(const RatePoint& a, const RatePoint& b) {
  if (a.rate != b.rate) return a.rate > b.rate;
  return knob_key(a.params) < knob_key(b.params);
}

// Symmetric-link security composition: both receivers' X and Y strings see
// the same bit-flip bound E, so each likely-set radius spans the summed
// rate 2E of the two strings being compared.
SecurityReport compose_report(const KgpEstimates& model, double m) {
  double n = model.counts.n;
  if (n < 2.0) {
    return security_level(prob_from_value(1.0), prob_from_value(1.0), 0.0,
                          n, m, 0.0, 0.0);
  }
  double spread = std::min(2.0 * model.e_bound, 1.0);
  double rx = std::min(std::ceil(spread * n), n);
  double ry = std::min(std::ceil(spread * 2.0 * n), 2.0 * n);
  double l2nx = log2_hamming_ball_size(n, rx);
  double l2ny = log2_hamming_ball_size(2.0 * n, ry);
  GuessingBound guess = guessing_bound(n, model.delta1, model.e_ph);
  Prob p_h = hash_forgery_bound(m, n, l2nx + l2ny);
  return security_level(guess.p_g, p_h, guess.p_e, n, m, l2nx, l2ny);
}

void check_target(const SecurityTarget& target) {
  if (!(target.epsilon > 0.0) || !(target.epsilon <= 1.0)) {
    throw std::invalid_argument("security target must be in (0,1]");
  }
  if (!(target.message_bits >= 1.0)) {
    throw std::invalid_argument("message length must be at least 1");
  }
}

// Serializes every evaluate() call of one search so a budget is a prefix
// of the same deterministic sequence; tracks the best feasible point.
struct EvalStream {
  const ChannelParams& ch;
  const FailureProbs& fp;
  const SecurityTarget& target;
  std::uint64_t remaining = 0;
  std::uint64_t used = 0;
  std::optional<RatePoint> first{};
  std::optional<RatePoint> best{};

  bool exhausted() const { return remaining == 0; }

  std::optional<RatePoint> eval(const SnsParams& p) {
    if (remaining == 0) return std::nullopt;
    --remaining;
    ++used;
    RatePoint pt = evaluate(ch, p, fp, target);
    if (!first) first = pt;
    if (pt.feasible && (!best || better(pt, *best))) best = pt;
    return pt;
  }
};

double grid_pulses(const SearchBounds& b, long j) {
  return b.pulses_min * std::exp2(0.25 * static_cast<double>(j));
}

// Grid-restricted minimization of N.  The index may go below zero: the
// N*/2 postcondition outranks the configured floor, and tiny N is always
// infeasible (no events survive the test split), so descent terminates.
std::optional<double> minimize_pulses_in(EvalStream& ev, const SearchBounds& b,
                                         SnsParams p) {
  auto feasible_at = [&](long j) -> std::optional<bool> {
    p.N = grid_pulses(b, j);
    auto pt = ev.eval(p);
    if (!pt) return std::nullopt;
    return pt->feasible;
  };

  long j_max = std::max<long>(
    0, std::lround(std::ceil(4.0 * std::log2(b.pulses_max / b.pulses_min))));
  auto top = feasible_at(j_max);
  if (!top.has_value() || !*top) return std::nullopt;
  long hi = j_max;

  // Establish an infeasible anchor below hi, then bisect the grid.
  // Returns false when the budget ran out.
  long lo = 0;
  auto bracket_below = [&](long from) -> std::optional<long> {
    for (long j = from;; j -= 4) {
      auto f = feasible_at(j);
      if (!f.has_value()) return std::nullopt;
      if (!*f) return j;
      hi = j;
      if (grid_pulses(b, j) < 2.0) return j - 1;  // unreachable floor
    }
  };
  auto anchor = bracket_below(0);
  if (!anchor.has_value()) return std::nullopt;
  lo = std::min(*anchor, hi - 1);

  while (true) {
    while (hi - lo > 1) {
      long mid = lo + (hi - lo) / 2;
      auto f = feasible_at(mid);
      if (!f.has_value()) return std::nullopt;
      (*f ? hi : lo) = mid;
    }
    double star = grid_pulses(b, hi);
    p.N = std::floor(star / 2.0);
    auto half = ev.eval(p);
    if (!half) return std::nullopt;
    if (!half->feasible) return star;
    // non-monotone pocket: the halved count is feasible again, so keep
    // descending from there
    hi -= 4;
    auto deeper = bracket_below(hi - 4);
    if (!deeper.has_value()) return std::nullopt;
    lo = std::min(*deeper, hi - 1);
  }
}

bool knobs_valid(const SnsParams& p) {
  return p.mu1 < p.mu2 && p.p0 + p.p1 < 1.0;
}

SnsParams apply_factor(const SearchBounds& b, const SnsParams& base, int knob,
                       double factor) {
  SnsParams out = base;
  auto scale = [&](double v, double lo, double hi) {
    return std::clamp(v * factor, lo, hi);
  };
  switch (knob) {
    case 0: out.mu = scale(base.mu, b.mu_min, b.mu_max); break;
    case 1: out.q = scale(base.q, b.prob_min, b.prob_max); break;
    case 2: out.p_z = scale(base.p_z, b.prob_min, b.prob_max); break;
    case 3: out.mu1 = scale(base.mu1, b.mu_min, b.mu_max); break;
    case 4: out.mu2 = scale(base.mu2, b.mu_min, b.mu_max); break;
    case 5: out.p0 = scale(base.p0, b.prob_min, b.prob_max); break;
    case 6: out.p1 = scale(base.p1, b.prob_min, b.prob_max); break;
  }
  return out;
}

}  // namespace

RatePoint evaluate(const ChannelParams& ch, const SnsParams& p,
                   const FailureProbs& fp, const SecurityTarget& target) {
  check_target(target);
  RatePoint out;
  out.distance_km = 2.0 * ch.l;
  out.params = p;
  out.model = run_kgp_model(ch, p, fp);
  out.report = compose_report(out.model, target.message_bits);
  if (out.model.status != PipelineStatus::ok) {
    out.reason = FeasibilityReason::model_infeasible;
  } else if (out.report.epsilon.log2 > std::log2(target.epsilon)) {
    out.reason = FeasibilityReason::epsilon_above_target;
  } else {
    out.feasible = true;
    out.reason = FeasibilityReason::feasible;
    out.rate = target.message_bits / (2.0 * p.N);
  }
  return out;
}

std::optional<double> minimize_pulse_count(
  const ChannelParams& ch, const SnsParams& p, const FailureProbs& fp,
  const SecurityTarget& target, const SearchBounds& bounds,
  std::uint64_t budget, std::uint64_t* evals_used) {
  check_target(target);
  EvalStream ev{ch, fp, target, budget};
  auto out = minimize_pulses_in(ev, bounds, p);
  if (evals_used) *evals_used = ev.used;
  return out;
}

RatePoint search(const ChannelParams& ch, const FailureProbs& fp,
                 const SecurityTarget& target, std::uint64_t budget,
                 const SearchBounds& bounds, const SnsParams* start) {
  check_target(target);
  if (budget < 1) {
    throw std::invalid_argument("search budget must be at least 1");
  }
  EvalStream ev{ch, fp, target, budget};
  SnsParams cur = start ? *start : SnsParams{};
  ev.eval(cur);

  std::optional<double> cur_n = minimize_pulses_in(ev, bounds, cur);
  auto consider = [&](const SnsParams& cand) -> bool {
    auto n = minimize_pulses_in(ev, bounds, cand);
    if (n && (!cur_n || *n < *cur_n)) {
      cur = cand;
      cur.N = *n;
      cur_n = n;
      return true;
    }
    return false;
  };

  if (!start) {
    for (double mu : {0.1, 0.2, 0.4}) {
      for (double q : {0.02, 0.06, 0.18}) {
        for (double p_z : {0.5, 0.7, 0.9}) {
          if (ev.exhausted()) break;
          SnsParams cand;
          cand.mu = mu;
          cand.q = q;
          cand.p_z = p_z;
          consider(cand);
        }
      }
    }
  }

  double step = std::sqrt(2.0);
  while (!ev.exhausted() && step > 1.001) {
    bool moved = false;
    for (int knob = 0; knob < 7 && !ev.exhausted(); ++knob) {
      for (double f : {step, 1.0 / step, step * step,
                       1.0 / (step * step)}) {
        SnsParams cand = apply_factor(bounds, cur, knob, f);
        if (!knobs_valid(cand) || knob_key(cand) == knob_key(cur)) {
          continue;
        }
        if (consider(cand)) {
          moved = true;
          break;
        }
        if (ev.exhausted()) break;
      }
    }
    if (!moved) step = std::sqrt(step);
  }

  if (ev.best) return *ev.best;
  return *ev.first;
}

std::vector<RatePoint> sweep(const std::vector<double>& distances_km,
                             const ChannelParams& ch, const FailureProbs& fp,
                             const SecurityTarget& target, std::uint64_t budget,
                             const SearchBounds& bounds) {
  for (std::size_t i = 0; i < distances_km.size(); ++i) {
    if (!(distances_km[i] >= 0.0)) {
      throw std::invalid_argument("distances must be nonnegative");
    }
    if (i > 0 && distances_km[i] < distances_km[i - 1]) {
      throw std::invalid_argument("distances must be sorted ascending");
    }
  }
  std::vector<RatePoint> out;
  out.reserve(distances_km.size());
  std::optional<SnsParams> warm;
  for (double d : distances_km) {
    ChannelParams c = ch;
    c.l = d / 2.0;
    RatePoint pt = search(c, fp, target, budget, bounds,
                          warm ? &*warm : nullptr);
    if (pt.feasible) warm = pt.params;
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace qds

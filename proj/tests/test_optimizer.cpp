#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qds/optimizer.hpp"

using qds::ChannelParams;
using qds::FailureProbs;
using qds::FeasibilityReason;
using qds::RatePoint;
using qds::SearchBounds;
using qds::SecurityTarget;
using qds::SnsParams;

namespace {

bool close_rel(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

bool same_point(const RatePoint& a, const RatePoint& b) {
  return a.rate == b.rate && a.feasible == b.feasible &&
         a.params.N == b.params.N && a.params.mu == b.params.mu &&
         a.params.mu1 == b.params.mu1 && a.params.mu2 == b.params.mu2 &&
         a.params.q == b.params.q && a.params.p_z == b.params.p_z &&
         a.params.p0 == b.params.p0 && a.params.p1 == b.params.p1;
}

}  // namespace

TEST_CASE("evaluate reproduces the frozen baseline composition") {
  const RatePoint pt =
      qds::evaluate(ChannelParams{}, SnsParams{}, FailureProbs{},
                    SecurityTarget{});
  CHECK(pt.distance_km == 100.0);
  REQUIRE(pt.model.status == qds::PipelineStatus::ok);
  CHECK(pt.report.n == 390003012.0);
  CHECK(pt.report.m == 1e20);
  CHECK(close_rel(pt.report.log2_nx, 205601918.49765864, 1e-10));
  CHECK(close_rel(pt.report.log2_ny, 411203847.3702001, 1e-10));
  CHECK(close_rel(pt.report.p_e, 0.11215586030908338, 1e-9));
  CHECK(close_rel(pt.report.p_g.log2, -197491531.78647453, 1e-9));
  CHECK(close_rel(pt.report.p_h.log2, -163200123.25501746, 1e-9));
  CHECK(pt.report.p_g.value == 0.0);  // far below double range
  CHECK(pt.report.p_h.value == 0.0);

  // The forgery bound is the weaker of the two failure modes here.
  CHECK(pt.report.epsilon.log2 == pt.report.p_h.log2);
  CHECK(pt.feasible);
  CHECK(pt.reason == FeasibilityReason::feasible);
  CHECK(pt.rate == 5e7);  // 1e20 message bits / (2 * 1e12 pulses)
}

TEST_CASE("evaluate embeds the model trace verbatim") {
  const ChannelParams ch;
  const SnsParams p;
  const FailureProbs fp;
  const RatePoint pt = qds::evaluate(ch, p, fp, SecurityTarget{});
  const qds::KgpEstimates direct = qds::run_kgp_model(ch, p, fp);
  CHECK(pt.model.status == direct.status);
  CHECK(pt.model.counts.n == direct.counts.n);
  CHECK(pt.model.delta1 == direct.delta1);
  CHECK(pt.model.e_ph == direct.e_ph);
  CHECK(pt.params.N == p.N);
}

TEST_CASE("evaluate separates the two failure reasons") {
  const SecurityTarget target;

  // Enough pulses for the model to complete, too few for the bounds: a
  // 7800-bit key cannot carry a 1e20-bit message at epsilon 1e-10.
  SnsParams small;
  small.N = 2e7;
  const RatePoint weak =
      qds::evaluate(ChannelParams{}, small, FailureProbs{}, target);
  CHECK(weak.model.status == qds::PipelineStatus::ok);
  CHECK_FALSE(weak.feasible);
  CHECK(weak.reason == FeasibilityReason::epsilon_above_target);
  CHECK(weak.rate == 0.0);

  // Too few pulses for the model itself; the degenerate report pins
  // epsilon at one.
  SnsParams tiny;
  tiny.N = 10;
  const RatePoint dead =
      qds::evaluate(ChannelParams{}, tiny, FailureProbs{}, target);
  CHECK(dead.model.status == qds::PipelineStatus::no_test_events);
  CHECK(dead.reason == FeasibilityReason::model_infeasible);
  CHECK(dead.report.epsilon.value == 1.0);
  CHECK(dead.rate == 0.0);

  ChannelParams far;
  far.l = 500.0;
  const RatePoint lost =
      qds::evaluate(far, SnsParams{}, FailureProbs{}, target);
  CHECK(lost.model.status != qds::PipelineStatus::ok);
  CHECK(lost.reason == FeasibilityReason::model_infeasible);
  CHECK_FALSE(lost.feasible);
}

TEST_CASE("target and argument validation") {
  SecurityTarget bad;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(qds::evaluate(ChannelParams{}, SnsParams{}, FailureProbs{},
                                bad),
                  std::invalid_argument);
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(qds::evaluate(ChannelParams{}, SnsParams{}, FailureProbs{},
                                bad),
                  std::invalid_argument);
  bad = SecurityTarget{};
  bad.message_bits = 0.5;
  CHECK_THROWS_AS(qds::evaluate(ChannelParams{}, SnsParams{}, FailureProbs{},
                                bad),
                  std::invalid_argument);

  CHECK_THROWS_AS(qds::search(ChannelParams{}, FailureProbs{},
                              SecurityTarget{}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(qds::sweep({150.0, 100.0}, ChannelParams{}, FailureProbs{},
                             SecurityTarget{}, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(qds::sweep({-5.0}, ChannelParams{}, FailureProbs{},
                             SecurityTarget{}, 10),
                  std::invalid_argument);
}

TEST_CASE("minimize_pulse_count lands on the grid with a tight certificate") {
  const ChannelParams ch;
  const FailureProbs fp;
  const SecurityTarget target;
  const SearchBounds bounds;

  std::uint64_t used = 0;
  const auto nstar = qds::minimize_pulse_count(ch, SnsParams{}, fp, target,
                                               bounds, 10000, &used);
  REQUIRE(nstar.has_value());
  CHECK(used >= 3);
  CHECK(used <= 10000);

  // Certificate: feasible exactly at N*, infeasible at half of it.
  SnsParams at;
  at.N = *nstar;
  CHECK(qds::evaluate(ch, at, fp, target).feasible);
  at.N = std::floor(*nstar / 2.0);
  CHECK_FALSE(qds::evaluate(ch, at, fp, target).feasible);

  // N* sits on the quarter-octave grid anchored at pulses_min; the index
  // may be negative when the certificate descends under the floor.
  const double j = 4.0 * std::log2(*nstar / bounds.pulses_min);
  CHECK(std::fabs(j - std::round(j)) < 1e-9);

  const auto again = qds::minimize_pulse_count(ch, SnsParams{}, fp, target,
                                               bounds, 10000);
  REQUIRE(again.has_value());
  CHECK(*again == *nstar);

  // A two-evaluation budget cannot finish the bracket.
  std::uint64_t spent = 0;
  const auto starved = qds::minimize_pulse_count(ch, SnsParams{}, fp, target,
                                                 bounds, 2, &spent);
  CHECK_FALSE(starved.has_value());
  CHECK(spent == 2);
}

TEST_CASE("search is deterministic and budget-monotone") {
  const ChannelParams ch;
  const FailureProbs fp;
  const SecurityTarget target;

  const RatePoint a = qds::search(ch, fp, target, 2000);
  const RatePoint b = qds::search(ch, fp, target, 2000);
  CHECK(same_point(a, b));
  CHECK(a.feasible);
  CHECK(a.rate >= 5e7);  // never worse than the baseline configuration

  // A budget prefix of the same candidate sequence cannot do better.
  const RatePoint short_run = qds::search(ch, fp, target, 500);
  CHECK(short_run.rate <= a.rate);

  // Budget one reports exactly the starting point's evaluation.
  const SnsParams start;
  const RatePoint one = qds::search(ch, fp, target, 1, SearchBounds{}, &start);
  const RatePoint direct = qds::evaluate(ch, start, fp, target);
  CHECK(same_point(one, direct));

  // Same at a hopeless distance: the single infeasible evaluation comes
  // back unchanged rather than nothing.
  ChannelParams far;
  far.l = 500.0;
  const RatePoint stuck =
      qds::search(far, fp, target, 1, SearchBounds{}, &start);
  CHECK_FALSE(stuck.feasible);
  CHECK(stuck.rate == 0.0);
  CHECK(stuck.params.N == start.N);
}

TEST_CASE("sweep walks ascending distances and keeps determinism") {
  const ChannelParams ch;
  const FailureProbs fp;
  const SecurityTarget target;

  const std::vector<RatePoint> sw =
      qds::sweep({100.0, 150.0}, ch, fp, target, 300);
  REQUIRE(sw.size() == 2);
  CHECK(sw[0].distance_km == 100.0);
  CHECK(sw[1].distance_km == 150.0);
  CHECK(sw[0].feasible);
  CHECK(sw[1].feasible);
  CHECK(sw[0].rate >= sw[1].rate);  // more loss cannot raise the rate

  const std::vector<RatePoint> rerun =
      qds::sweep({100.0, 150.0}, ch, fp, target, 300);
  CHECK(same_point(sw[0], rerun[0]));
  CHECK(same_point(sw[1], rerun[1]));
}

TEST_CASE("sweep reports an out-of-reach distance honestly") {
  const std::vector<RatePoint> far =
      qds::sweep({1000.0}, ChannelParams{}, FailureProbs{}, SecurityTarget{},
                 400);
  REQUIRE(far.size() == 1);
  CHECK_FALSE(far[0].feasible);
  CHECK(far[0].rate == 0.0);
  CHECK(far[0].reason == FeasibilityReason::model_infeasible);
}

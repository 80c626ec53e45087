// qds-forge: command-line front end for the qds library.  Subcommands map
// one-to-one onto library layers: hash (keyed hashing), session (three-party
// protocol runs), attack (adversary Monte Carlo), security (bound reports),
// rate/sweep (signature-rate CSV over distance).
//
// Exit codes: 0 success, 2 invalid input, 3 infeasible configuration.
// Every command routes its primary output through one sink (stdout, or the
// --out file), so reruns with the same seed are byte-identical.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qds/bitstring.hpp"
#include "qds/channel_sim.hpp"
#include "qds/entropy.hpp"
#include "qds/errors.hpp"
#include "qds/gf2.hpp"
#include "qds/hamming_ball.hpp"
#include "qds/lfsr_hash.hpp"
#include "qds/optimizer.hpp"
#include "qds/protocol.hpp"
#include "qds/rng.hpp"
#include "qds/security.hpp"
#include "qds/sns_model.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // never print "-0"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Options shared by every subcommand.
struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_path;
  json config = json::object();
};

void load_config(CommonOpts& c) {
  if (c.config_path.empty()) return;
  std::ifstream in(c.config_path);
  if (!in) {
    throw std::invalid_argument("config file not readable: " + c.config_path);
  }
  try {
    in >> c.config;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config parse error: " + std::string(e.what()));
  }
  if (!c.config.is_object()) {
    throw std::invalid_argument("config root must be a JSON object");
  }
}

double jget(const json& cfg, const char* section, const char* key,
            double fallback) {
  auto s = cfg.find(section);
  if (s == cfg.end()) return fallback;
  auto k = s->find(key);
  if (k == s->end()) return fallback;
  if (!k->is_number()) {
    throw std::invalid_argument(std::string("config ") + section + "." + key +
                                " must be a number");
  }
  return k->get<double>();
}

std::string jget_str(const json& cfg, const char* section, const char* key,
                     const std::string& fallback) {
  auto s = cfg.find(section);
  if (s == cfg.end()) return fallback;
  auto k = s->find(key);
  if (k == s->end()) return fallback;
  if (!k->is_string()) {
    throw std::invalid_argument(std::string("config ") + section + "." + key +
                                " must be a string");
  }
  return k->get<std::string>();
}

bool jhas(const json& cfg, const char* section, const char* key) {
  auto s = cfg.find(section);
  return s != cfg.end() && s->find(key) != s->end();
}

qds::ChannelParams channel_from(const json& cfg) {
  qds::ChannelParams ch;
  ch.alpha = jget(cfg, "channel", "alpha", ch.alpha);
  ch.l = jget(cfg, "channel", "l", ch.l);
  ch.eta_d = jget(cfg, "channel", "eta_d", ch.eta_d);
  ch.p_d = jget(cfg, "channel", "p_d", ch.p_d);
  ch.e_d = jget(cfg, "channel", "e_d", ch.e_d);
  return ch;
}

qds::SnsParams sns_from(const json& cfg) {
  qds::SnsParams p;
  p.N = jget(cfg, "sns", "N", p.N);
  p.mu = jget(cfg, "sns", "mu", p.mu);
  p.mu1 = jget(cfg, "sns", "mu1", p.mu1);
  p.mu2 = jget(cfg, "sns", "mu2", p.mu2);
  p.q = jget(cfg, "sns", "q", p.q);
  p.p_z = jget(cfg, "sns", "p_z", p.p_z);
  p.p0 = jget(cfg, "sns", "p0", p.p0);
  p.p1 = jget(cfg, "sns", "p1", p.p1);
  p.Delta = jget(cfg, "sns", "Delta", p.Delta);
  p.gamma = jget(cfg, "sns", "gamma", p.gamma);
  return p;
}

qds::FailureProbs failure_from(const json& cfg) {
  qds::FailureProbs fp;
  fp.xi = jget(cfg, "failure", "xi", fp.xi);
  fp.eps_p = jget(cfg, "failure", "eps_p", fp.eps_p);
  return fp;
}

qds::SecurityTarget target_from(const json& cfg) {
  qds::SecurityTarget t;
  t.epsilon = jget(cfg, "target", "epsilon", t.epsilon);
  t.message_bits = jget(cfg, "target", "message_bits", t.message_bits);
  return t;
}

qds::SearchBounds bounds_from(const json& cfg) {
  qds::SearchBounds b;
  b.mu_min = jget(cfg, "bounds", "mu_min", b.mu_min);
  b.mu_max = jget(cfg, "bounds", "mu_max", b.mu_max);
  b.prob_min = jget(cfg, "bounds", "prob_min", b.prob_min);
  b.prob_max = jget(cfg, "bounds", "prob_max", b.prob_max);
  b.pulses_min = jget(cfg, "bounds", "pulses_min", b.pulses_min);
  b.pulses_max = jget(cfg, "bounds", "pulses_max", b.pulses_max);
  return b;
}

qds::NoiseMode noise_from(const json& cfg, const char* section) {
  std::string mode = jget_str(cfg, section, "noise", "exact_count");
  if (mode == "exact_count") return qds::NoiseMode::exact_count;
  if (mode == "bernoulli") return qds::NoiseMode::bernoulli;
  throw std::invalid_argument("unknown noise mode: " + mode);
}

qds::PairRates rates_from(const json& cfg, const char* section,
                          const qds::PairRates& fallback) {
  qds::PairRates r;
  r.e1 = jget(cfg, section, "e1", fallback.e1);
  r.e2 = jget(cfg, section, "e2", fallback.e2);
  r.e3 = jget(cfg, section, "e3", fallback.e3);
  r.e4 = jget(cfg, section, "e4", fallback.e4);
  return r;
}

// Desk-scale session/attack defaults: radii (1,1) at n=16.
constexpr qds::PairRates kDeskRates{0.03, 0.015, 0.03, 0.015};

void emit(const CommonOpts& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("output path not writable: " + c.out_path);
  }
  out << text;
  if (!out) {
    throw std::invalid_argument("write failed: " + c.out_path);
  }
}

// ---------------------------------------------------------------------------
// hash

int cmd_hash(const CommonOpts& c, const std::string& message_path,
             std::optional<long> bits_flag) {
  long bits = bits_flag ? *bits_flag : long(jget(c.config, "hash", "bits", 16));
  if (bits < 2) throw std::invalid_argument("hash length must be >= 2");

  std::ifstream in(message_path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("message file not readable: " + message_path);
  }
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  if (bytes.empty()) {
    throw std::invalid_argument("message file is empty: " + message_path);
  }
  const qds::BitString message =
      qds::BitString::from_bytes(bytes, 8 * bytes.size());

  qds::Rng seed_rng(qds::derive_seed(c.seed, "hash-seed"));
  qds::Rng key_rng(qds::derive_seed(c.seed, "hash-key"));
  const qds::BitString p_seed = qds::BitString::random(std::size_t(bits), seed_rng);
  const qds::BitString init = qds::BitString::random(std::size_t(bits), key_rng);
  const qds::Gf2Poly poly = qds::gen_irreducible(p_seed, std::size_t(bits));
  const qds::BitString digest =
      qds::toeplitz_hash(qds::make_hash_spec(poly, init), message);

  std::ostringstream out;
  out << "bits=" << bits << "\n";
  out << "message_bits=" << message.size() << "\n";
  out << "poly=" << poly.coefficients(std::size_t(bits) + 1).to_hex() << "\n";
  out << "key=" << init.to_hex() << "\n";
  out << "hash=" << digest.to_hex() << "\n";
  emit(c, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// session

struct SessionOpts {
  std::size_t n = 16;
  std::size_t m = 256;
  qds::PairRates rates = kDeskRates;
  qds::NoiseMode mode = qds::NoiseMode::exact_count;
  double p_e = 0.25;
  std::size_t n_cap = 32;          // original-variant enumeration guard
  double max_log2_pairs = 24.0;    // candidate-pair budget, log2
};

SessionOpts session_from(const json& cfg, const char* section) {
  SessionOpts s;
  s.n = std::size_t(jget(cfg, section, "n", double(s.n)));
  s.m = std::size_t(jget(cfg, section, "m", double(s.m)));
  s.rates = rates_from(cfg, section, kDeskRates);
  s.mode = noise_from(cfg, section);
  s.p_e = jget(cfg, section, "p_e", s.p_e);
  s.n_cap = std::size_t(jget(cfg, section, "n_cap", double(s.n_cap)));
  s.max_log2_pairs =
      jget(cfg, section, "max_log2_pairs", s.max_log2_pairs);
  return s;
}

std::optional<qds::AdversaryModel> adversary_from(const std::string& name,
                                                  double p_e,
                                                  std::uint64_t seed) {
  if (name == "none") return std::nullopt;
  qds::AdversaryModel adv;
  adv.p_e = p_e;
  adv.seed = seed;
  if (name == "guess") {
    adv.kind = qds::AdversaryModel::Kind::guess_keys;
  } else if (name == "tamper") {
    adv.kind = qds::AdversaryModel::Kind::tamper_message;
  } else if (name == "forge") {
    adv.kind = qds::AdversaryModel::Kind::forge_pair;
  } else {
    throw std::invalid_argument("unknown adversary: " + name);
  }
  return adv;
}

const char* verdict(bool accepted) { return accepted ? "accept" : "reject"; }

// Radii and candidate-pair count of the original-variant likely sets; the
// zero strings only pin the lengths.  Throws InfeasibleError when a summed
// rate reaches 0.5, and when enumeration would exceed the pair budget.
struct BallPlan {
  std::size_t radius_x = 0;
  std::size_t radius_y = 0;
  mpz_class n_x;
  mpz_class n_y;
};

BallPlan plan_balls(const SessionOpts& s) {
  BallPlan plan;
  const qds::LikelySetSpec x = qds::build_likely_set(
      qds::BitString(s.n), qds::BitString(s.n), s.rates.e1, s.rates.e3);
  const qds::LikelySetSpec y = qds::build_likely_set(
      qds::BitString(2 * s.n), qds::BitString(2 * s.n), s.rates.e2,
      s.rates.e4);
  plan.radius_x = x.radius;
  plan.radius_y = y.radius;
  plan.n_x = x.cardinality;
  plan.n_y = y.cardinality;
  const double log2_pairs =
      qds::log2_mpz(plan.n_x) + qds::log2_mpz(plan.n_y);
  if (log2_pairs > s.max_log2_pairs) {
    throw qds::InfeasibleError("likely sets too large to enumerate: log2(pairs) = " +
                               fmt(log2_pairs));
  }
  return plan;
}

int cmd_session(const CommonOpts& c, const std::string& variant_name,
                const std::string& adversary_name, std::uint64_t trials,
                std::optional<long> n_flag, std::optional<long> m_flag) {
  SessionOpts s = session_from(c.config, "session");
  if (n_flag) s.n = std::size_t(*n_flag);
  if (m_flag) s.m = std::size_t(*m_flag);
  if (s.n < 2) throw std::invalid_argument("n must be >= 2");
  if (s.m < 1) throw std::invalid_argument("m must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  const qds::ProtocolVariant variant = variant_name == "improved"
                                           ? qds::ProtocolVariant::improved
                                           : qds::ProtocolVariant::original;
  qds::Prob forgery_bound;
  if (variant == qds::ProtocolVariant::original) {
    if (s.n > s.n_cap) {
      throw std::invalid_argument("n exceeds the original-variant cap (" +
                                  std::to_string(s.n_cap) + ")");
    }
    const BallPlan plan = plan_balls(s);
    forgery_bound = qds::hash_forgery_bound(double(s.m), double(s.n),
                                            plan.n_x, plan.n_y);
  } else {
    // Exact verification checks a single published candidate.
    forgery_bound =
        qds::hash_forgery_bound(double(s.m), double(s.n), 0.0);
  }

  const auto run_one = [&](std::uint64_t trial_seed) {
    const qds::KgpOutput keys = qds::simulate_kgp(
        s.n, s.rates, s.mode, qds::derive_seed(trial_seed, "session-kgp"));
    qds::Rng msg_rng(qds::derive_seed(trial_seed, "session-message"));
    const qds::BitString message = qds::BitString::random(s.m, msg_rng);
    const auto adv = adversary_from(
        adversary_name, s.p_e, qds::derive_seed(trial_seed, "session-adversary"));
    return qds::run_session(variant, keys, message,
                            qds::derive_seed(trial_seed, "session-run"),
                            adv ? &*adv : nullptr);
  };

  std::ostringstream out;
  if (trials == 1) {
    const qds::SessionResult res = run_one(c.seed);
    out << res.transcript.to_log();
    out << "bob=" << verdict(res.bob.accepted)
        << " charlie=" << verdict(res.charlie.accepted) << " comparisons="
        << res.bob.comparisons_made + res.charlie.comparisons_made << "\n";
    emit(c, out.str());
    return 0;
  }

  std::uint64_t bob_accepts = 0;
  std::uint64_t charlie_accepts = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const qds::SessionResult res = run_one(qds::derive_seed(c.seed, t));
    bob_accepts += res.bob.accepted ? 1 : 0;
    charlie_accepts += res.charlie.accepted ? 1 : 0;
  }
  out << "variant=" << variant_name << "\n";
  out << "adversary=" << adversary_name << "\n";
  out << "trials=" << trials << "\n";
  out << "bob_accepts=" << bob_accepts << "\n";
  out << "charlie_accepts=" << charlie_accepts << "\n";
  out << "bob_accept_rate=" << fmt(double(bob_accepts) / double(trials))
      << "\n";
  out << "charlie_accept_rate="
      << fmt(double(charlie_accepts) / double(trials)) << "\n";
  if (adversary_name != "none") {
    // The adversary corrupts what Bob forwards, so Charlie is the attacked
    // verifier; his acceptance frequency is the attack success rate.
    out << "attacked_accept_rate="
        << fmt(double(charlie_accepts) / double(trials)) << "\n";
    if (adversary_name == "guess") {
      const qds::Prob p_g = qds::prob_from_log2(
          -double(s.n) * qds::binary_entropy(s.p_e));
      out << "log2_pg=" << fmt(p_g.log2) << "\n";
      out << "p_g=" << fmt(p_g.value) << "\n";
    } else {
      out << "log2_ph=" << fmt(forgery_bound.log2) << "\n";
      out << "p_h=" << fmt(forgery_bound.value) << "\n";
    }
  }
  emit(c, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// attack

int cmd_attack(const CommonOpts& c, const std::string& kind,
               const std::string& variant_name, std::uint64_t trials,
               std::optional<double> p_e_flag, std::optional<long> n_flag,
               std::optional<long> m_flag) {
  SessionOpts s = session_from(c.config, "attack");
  if (n_flag) s.n = std::size_t(*n_flag);
  if (m_flag) s.m = std::size_t(*m_flag);
  const double p_e = p_e_flag ? *p_e_flag : s.p_e;
  if (s.n < 2) throw std::invalid_argument("n must be >= 2");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  std::ostringstream out;
  if (kind == "guess") {
    const qds::KgpOutput keys = qds::simulate_kgp(
        s.n, s.rates, s.mode, qds::derive_seed(c.seed, "attack-kgp"));
    const qds::ReceiverState bob{keys.bob_x, keys.bob_y, keys.charlie_x,
                                 keys.charlie_y, keys.rates};
    const qds::AttackStats stats = qds::guessing_attack(
        bob, p_e, trials, qds::derive_seed(c.seed, "attack-run"));
    // Exact success chance of the simulated all-bits strategy, and the
    // min-entropy bound it is compared against.
    const double expected = std::pow(1.0 - p_e, 3.0 * double(s.n));
    const qds::Prob p_g =
        qds::prob_from_log2(-double(s.n) * qds::binary_entropy(p_e));
    out << "kind=guess\n";
    out << "n=" << s.n << "\n";
    out << "p_e=" << fmt(p_e) << "\n";
    out << "trials=" << stats.trials << "\n";
    out << "successes=" << stats.successes << "\n";
    out << "success_rate=" << fmt(stats.rate) << "\n";
    out << "expected_rate=" << fmt(expected) << "\n";
    out << "log2_pg=" << fmt(p_g.log2) << "\n";
    out << "p_g=" << fmt(p_g.value) << "\n";
    emit(c, out.str());
    return 0;
  }

  qds::TamperStrategy strategy;
  if (kind == "tamper") {
    strategy = qds::TamperStrategy::random_message;
  } else if (kind == "forge") {
    strategy = qds::TamperStrategy::random_pair;
  } else {
    throw std::invalid_argument("unknown attack kind: " + kind);
  }

  const qds::ProtocolVariant variant = variant_name == "improved"
                                           ? qds::ProtocolVariant::improved
                                           : qds::ProtocolVariant::original;
  qds::Prob bound;
  BallPlan plan;
  if (variant == qds::ProtocolVariant::original) {
    plan = plan_balls(s);
    bound = qds::hash_forgery_bound(double(s.m), double(s.n), plan.n_x,
                                    plan.n_y);
  } else {
    bound = qds::hash_forgery_bound(double(s.m), double(s.n), 0.0);
  }

  const qds::SessionFixture fixture{variant, s.n, s.m, s.rates, s.mode};
  const qds::AttackStats stats = qds::tamper_attack(
      fixture, strategy, trials, qds::derive_seed(c.seed, "attack-run"));
  out << "kind=" << kind << "\n";
  out << "variant=" << variant_name << "\n";
  out << "n=" << s.n << "\n";
  out << "m=" << s.m << "\n";
  out << "radius_x=" << plan.radius_x << "\n";
  out << "radius_y=" << plan.radius_y << "\n";
  out << "trials=" << stats.trials << "\n";
  out << "successes=" << stats.successes << "\n";
  out << "success_rate=" << fmt(stats.rate) << "\n";
  out << "log2_ph=" << fmt(bound.log2) << "\n";
  out << "p_h=" << fmt(bound.value) << "\n";
  emit(c, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// security

void append_report(std::ostringstream& out, const qds::SecurityReport& rep) {
  out << "p_e=" << fmt(rep.p_e) << "\n";
  out << "log2_pg=" << fmt(rep.p_g.log2) << "\n";
  out << "p_g=" << fmt(rep.p_g.value) << "\n";
  out << "log2_ph=" << fmt(rep.p_h.log2) << "\n";
  out << "p_h=" << fmt(rep.p_h.value) << "\n";
  out << "log2_pf=" << fmt(rep.p_f.log2) << "\n";
  out << "p_f=" << fmt(rep.p_f.value) << "\n";
  out << "p_re=" << fmt(rep.p_re.value) << "\n";
  out << "p_ro=" << fmt(rep.p_ro.value) << "\n";
  out << "log2_eps=" << fmt(rep.epsilon.log2) << "\n";
  out << "epsilon=" << fmt(rep.epsilon.value) << "\n";
}

int cmd_security(const CommonOpts& c, std::optional<double> distance,
                 std::optional<double> n_flag, std::optional<double> delta1,
                 std::optional<double> eph, std::optional<double> mbits,
                 std::optional<double> log2_nx, std::optional<double> log2_ny) {
  const bool direct = delta1 || eph || jhas(c.config, "security", "delta1");
  std::ostringstream out;

  if (direct) {
    const double n = n_flag ? *n_flag : jget(c.config, "security", "n", 0.0);
    const double d1 =
        delta1 ? *delta1 : jget(c.config, "security", "delta1", -1.0);
    const double e = eph ? *eph : jget(c.config, "security", "eph", -1.0);
    const double m =
        mbits ? *mbits : jget(c.config, "security", "message_bits", 0.0);
    const double lnx =
        log2_nx ? *log2_nx : jget(c.config, "security", "log2_nx", 0.0);
    const double lny =
        log2_ny ? *log2_ny : jget(c.config, "security", "log2_ny", 0.0);
    if (!(n >= 2.0)) throw std::invalid_argument("security needs --n >= 2");
    if (!(d1 >= 0.0) || d1 > 1.0) {
      throw std::invalid_argument("delta1 must be in [0,1]");
    }
    if (!(e >= 0.0) || e > 0.5) {
      throw std::invalid_argument("eph must be in [0,0.5]");
    }
    if (!(m >= 1.0)) {
      throw std::invalid_argument("security needs --message-bits >= 1");
    }
    if (lnx < 0.0 || lny < 0.0) {
      throw std::invalid_argument("log2 set sizes must be >= 0");
    }
    const qds::GuessingBound gb = qds::guessing_bound(n, d1, e);
    const qds::Prob ph = qds::hash_forgery_bound(m, n, lnx + lny);
    const qds::SecurityReport rep =
        qds::security_level(gb.p_g, ph, gb.p_e, n, m, lnx, lny);
    out << "mode=direct\n";
    out << "n=" << fmt(n) << "\n";
    out << "m=" << fmt(m) << "\n";
    out << "delta1=" << fmt(d1) << "\n";
    out << "eph=" << fmt(e) << "\n";
    out << "log2_nx=" << fmt(lnx) << "\n";
    out << "log2_ny=" << fmt(lny) << "\n";
    append_report(out, rep);
    emit(c, out.str());
    return 0;
  }

  qds::ChannelParams ch = channel_from(c.config);
  const qds::SnsParams p = sns_from(c.config);
  const qds::FailureProbs fp = failure_from(c.config);
  const qds::SecurityTarget target = target_from(c.config);
  const double d = distance ? *distance : 2.0 * ch.l;
  if (!(d > 0.0)) throw std::invalid_argument("distance must be positive");
  ch.l = d / 2.0;

  const qds::RatePoint pt = qds::evaluate(ch, p, fp, target);
  out << "mode=pipeline\n";
  out << "distance_km=" << fmt(pt.distance_km) << "\n";
  out << "status=" << qds::to_string(pt.model.status) << "\n";
  out << "N=" << fmt(pt.params.N) << "\n";
  out << "n=" << fmt(pt.model.counts.n) << "\n";
  out << "E=" << fmt(pt.model.e_bound) << "\n";
  out << "Delta1=" << fmt(pt.model.delta1) << "\n";
  out << "eph=" << fmt(pt.model.e_ph) << "\n";
  out << "m=" << fmt(pt.report.m) << "\n";
  out << "log2_nx=" << fmt(pt.report.log2_nx) << "\n";
  out << "log2_ny=" << fmt(pt.report.log2_ny) << "\n";
  append_report(out, pt.report);
  out << "feasible=" << (pt.feasible ? "true" : "false") << "\n";
  out << "rate=" << fmt(pt.rate) << "\n";
  emit(c, out.str());
  return pt.model.status == qds::PipelineStatus::ok ? 0 : 3;
}

// ---------------------------------------------------------------------------
// rate / sweep

std::string csv_from(const std::vector<qds::RatePoint>& points) {
  std::ostringstream out;
  out << "# qds-forge csv v1\n";
  out << "distance_km,N,mu,mu1,mu2,q,pz,p0,p1,n,E,Delta1,eph,log2_pg,"
         "log2_ph,log2_eps,R,feasible\n";
  for (const qds::RatePoint& pt : points) {
    out << fmt(pt.distance_km) << "," << fmt(pt.params.N) << ","
        << fmt(pt.params.mu) << "," << fmt(pt.params.mu1) << ","
        << fmt(pt.params.mu2) << "," << fmt(pt.params.q) << ","
        << fmt(pt.params.p_z) << "," << fmt(pt.params.p0) << ","
        << fmt(pt.params.p1) << "," << fmt(pt.model.counts.n) << ","
        << fmt(pt.model.e_bound) << "," << fmt(pt.model.delta1) << ","
        << fmt(pt.model.e_ph) << "," << fmt(pt.report.p_g.log2) << ","
        << fmt(pt.report.p_h.log2) << "," << fmt(pt.report.epsilon.log2)
        << "," << fmt(pt.rate) << "," << (pt.feasible ? "true" : "false")
        << "\n";
  }
  return out.str();
}

int cmd_rate(const CommonOpts& c, std::vector<double> distances,
             std::uint64_t budget, bool default_sweep) {
  if (distances.empty()) {
    if (!default_sweep) {
      throw std::invalid_argument("rate needs a nonempty --distance-km list");
    }
    for (double d = 100.0; d <= 500.0; d += 50.0) distances.push_back(d);
  }
  qds::ChannelParams ch = channel_from(c.config);
  const qds::FailureProbs fp = failure_from(c.config);
  const qds::SecurityTarget target = target_from(c.config);
  const qds::SearchBounds bounds = bounds_from(c.config);

  std::vector<qds::RatePoint> points;
  if (budget == 0) {
    // No search: evaluate the configured parameter point at each distance.
    const qds::SnsParams p = sns_from(c.config);
    for (std::size_t i = 0; i < distances.size(); ++i) {
      if (!(distances[i] > 0.0) ||
          (i > 0 && distances[i] < distances[i - 1])) {
        throw std::invalid_argument(
            "distances must be positive and ascending");
      }
      ch.l = distances[i] / 2.0;
      points.push_back(qds::evaluate(ch, p, fp, target));
    }
  } else {
    points = qds::sweep(distances, ch, fp, target, budget, bounds);
  }
  emit(c, csv_from(points));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"likely-bit-string digital signatures: hashing, protocol "
               "sessions, attacks, security bounds, rate sweeps"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string variant = "original";
  std::string adversary = "none";
  std::string attack_kind = "tamper";
  std::string message_path;
  std::uint64_t trials = 1;
  std::uint64_t attack_trials = 10000;
  std::uint64_t budget = 2000;
  std::vector<double> distances;
  std::optional<long> n_flag, m_flag;
  std::optional<double> p_e_flag, distance_flag, n_real_flag, delta1_flag,
      eph_flag, mbits_flag, log2_nx_flag, log2_ny_flag;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path,
                    "JSON config file; flags win over config values");
    sub->add_option("--seed", common.seed, "master seed (default 1)");
    sub->add_option("--out", common.out_path,
                    "write primary output to this file instead of stdout");
  };

  CLI::App* hash = app.add_subcommand("hash", "hash a message file");
  add_common(hash);
  hash->add_option("--message", message_path, "message file (bytes)")
      ->required();
  hash->add_option("--bits", n_flag, "hash length in bits");

  CLI::App* session =
      app.add_subcommand("session", "run three-party signing sessions");
  add_common(session);
  session->add_option("--variant", variant)
      ->check(CLI::IsMember({"original", "improved"}));
  session->add_option("--adversary", adversary)
      ->check(CLI::IsMember({"none", "guess", "tamper", "forge"}));
  session->add_option("--trials", trials, "session count (1 = transcript)");
  session->add_option("--n", n_flag, "key length");
  session->add_option("--m", m_flag, "message length");

  CLI::App* attack =
      app.add_subcommand("attack", "Monte Carlo attack simulations");
  add_common(attack);
  attack->add_option("--kind", attack_kind)
      ->check(CLI::IsMember({"guess", "tamper", "forge"}));
  attack->add_option("--variant", variant)
      ->check(CLI::IsMember({"original", "improved"}));
  attack->add_option("--trials", attack_trials, "Monte Carlo trials");
  attack->add_option("--p-e", p_e_flag, "per-bit guessing error");
  attack->add_option("--n", n_flag, "key length");
  attack->add_option("--m", m_flag, "message length");

  CLI::App* security =
      app.add_subcommand("security", "security-level report");
  add_common(security);
  security->add_option("--distance-km", distance_flag,
                       "pipeline mode: full distance");
  security->add_option("--n", n_real_flag, "direct mode: hash length");
  security->add_option("--delta1", delta1_flag,
                       "direct mode: single-photon fraction");
  security->add_option("--eph", eph_flag, "direct mode: phase-flip rate");
  security->add_option("--message-bits", mbits_flag,
                       "direct mode: message length");
  security->add_option("--log2-nx", log2_nx_flag,
                       "direct mode: log2 X-candidate count");
  security->add_option("--log2-ny", log2_ny_flag,
                       "direct mode: log2 Y-candidate count");

  CLI::App* rate = app.add_subcommand("rate", "signature-rate CSV");
  add_common(rate);
  rate->add_option("--distance-km", distances, "full distances, km")
      ->delimiter(',');
  rate->add_option("--budget", budget,
                   "evaluations per distance (0 = no search)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "default-distance signature-rate CSV");
  add_common(sweep);
  sweep->add_option("--distance-km", distances, "full distances, km")
      ->delimiter(',');
  sweep->add_option("--budget", budget,
                    "evaluations per distance (0 = no search)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    load_config(common);
    if (hash->parsed()) return cmd_hash(common, message_path, n_flag);
    if (session->parsed()) {
      return cmd_session(common, variant, adversary, trials, n_flag, m_flag);
    }
    if (attack->parsed()) {
      return cmd_attack(common, attack_kind, variant, attack_trials, p_e_flag,
                        n_flag, m_flag);
    }
    if (security->parsed()) {
      return cmd_security(common, distance_flag, n_real_flag, delta1_flag,
                          eph_flag, mbits_flag, log2_nx_flag, log2_ny_flag);
    }
    if (rate->parsed()) return cmd_rate(common, distances, budget, false);
    if (sweep->parsed()) return cmd_rate(common, distances, budget, true);
  } catch (const qds::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

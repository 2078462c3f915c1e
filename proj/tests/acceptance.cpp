// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "cli_runner.hpp"
#include "oracles/intercept.hpp"
#include "qss/access.hpp"
#include "qss/decoder.hpp"
#include "qss/errors.hpp"
#include "qss/protocol.hpp"
#include "qss/qecc.hpp"
#include "qss/report.hpp"

using namespace qss;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: ";
      if (pass) detail << what;
      pass = false;
    }
  }
};

const double kLog3 = std::log2(3.0);

std::map<std::string, AccessReport>& analyses() {
  static std::map<std::string, AccessReport> cache;
  return cache;
}

const AccessReport& analysis(const Scheme& s) {
  auto& cache = analyses();
  auto it = cache.find(s.name());
  if (it == cache.end()) it = cache.emplace(s.name(), analyze_access_structure(s)).first;
  return it->second;
}

PureState haar(int q, std::uint64_t seed, std::uint64_t i) {
  CounterRng rng(seed, i);
  return random_secret(q, rng);
}

double window(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

double sifted_error_rate(const SessionTranscript& tr) {
  std::uint64_t err = 0, n = 0;
  for (const RoundRecord& r : tr.rounds) {
    if (!r.sifted) continue;
    ++n;
    err += r.r != r.s;
  }
  return n ? static_cast<double>(err) / static_cast<double>(n) : 0.0;
}

// ---------------------------------------------------------------------------

void complementarity(Outcome& o) {
  double worst = 0.0;
  for (int q : {2, 3, 5, 7}) {
    std::vector<OrthonormalBasis> b;
    for (int t = 0; t <= q; ++t) b.push_back(mub_basis(q, t));
    const Scheme s = ghz_scheme(2, q);
    for (int t = 0; t <= q; ++t) {
      for (int u = t + 1; u <= q; ++u) {
        for (int i = 0; i < q; ++i) {
          for (int j = 0; j < q; ++j) {
            worst = std::max(worst, std::abs(std::norm(b[t].vectors[i].dot(b[u].vectors[j])) - 1.0 / q));
            const double lov = std::norm(
                logical_basis_state(s, t, i).amplitudes().dot(logical_basis_state(s, u, j).amplitudes()));
            worst = std::max(worst, std::abs(lov - 1.0 / q));
          }
        }
      }
    }
  }
  for (const Scheme& s : {cgl_qutrit_23(), reed_solomon_threshold(2, 5)}) {
    const int q = s.q();
    for (int t = 0; t <= q; ++t) {
      for (int u = t + 1; u <= q; ++u) {
        for (int i = 0; i < q; ++i) {
          for (int j = 0; j < q; ++j) {
            const double lov = std::norm(
                logical_basis_state(s, t, i).amplitudes().dot(logical_basis_state(s, u, j).amplitudes()));
            worst = std::max(worst, std::abs(lov - 1.0 / q));
          }
        }
      }
    }
  }
  o.detail << "max |overlap - 1/q| = " << worst << " ";
  o.require(worst < 1e-10, "overlap deviation");
}

void cgl_structure(Outcome& o) {
  const AccessReport& r = analysis(cgl_qutrit_23());
  o.require(r.subsets.size() == 7, "subset count");
  for (const auto& c : r.subsets) {
    const bool single = c.players.size() == 1;
    const double want_i = single ? 0.0 : 2.0 * kLog3;
    const double want_chi = single ? 0.0 : kLog3;
    o.require(std::abs(c.i_quantum - want_i) < 1e-7, "I on {" + format_players(c.players) + "}");
    for (const BasisChi& x : c.chi) o.require(std::abs(x.bits - want_chi) < 1e-7, "chi on {" + format_players(c.players) + "}");
  }
  o.require(r.k == 2 && r.k_prime == 1 && r.n_active == 3, "ramp (2,1,3)");
  o.detail << "ramp (" << r.k.value_or(-1) << "," << r.k_prime << "," << r.n_active << ") ";
}

void prop1(Outcome& o) {
  double min_margin = 1e9;
  for (const Scheme& s : bundled_schemes()) {
    const AccessReport& r = analysis(s);
    o.require(r.prop1.all_pass, "Prop-1 implications on " + s.name());
    min_margin = std::min(min_margin, r.prop1.min_lemma_margin);
  }
  const AccessReport& g = analysis(ghz_scheme(3, 2));
  double tight = 0.0;
  for (std::size_t j = 0; j < g.subsets.size(); ++j) {
    if (g.subsets[j].players.size() == 1) tight = std::max(tight, std::abs(g.prop1.per_subset[j].lemma_margin));
  }
  o.require(min_margin >= -1e-7, "lemma margin");
  o.require(tight < 1e-7, "GHZ(3,2) singleton margin");
  o.detail << "min lemma margin " << min_margin << ", GHZ(3,2) singleton margin " << tight << " ";
}

void duality(Outcome& o) {
  int exceptions = 0;
  for (const Scheme& s : bundled_schemes()) {
    if (!s.is_pure()) continue;
    const AccessReport& a = analysis(s);
    const QeccReport r = bound_report(s, a);
    exceptions += r.duality_exceptions;
    if (a.is_perfect_threshold()) o.require(a.k_prime == a.n_active - *a.k, "k' = n - k on " + s.name());
  }
  o.require(exceptions == 0, "duality exceptions");
  o.detail << exceptions << " exceptions ";
}

void distances(Outcome& o) {
  const std::vector<std::pair<Scheme, int>> cases{
      {cgl_qutrit_23(), 2}, {five_qubit_35(), 3}, {reed_solomon_threshold(3, 7), 3}};
  for (const auto& [s, want] : cases) {
    const QeccReport r = bound_report(s, analysis(s));
    const int k = analysis(s).k.value_or(-1);
    o.require(r.d == want, "d on " + s.name());
    o.require(r.d && *r.d == s.num_active() - k + 1, "d = n-k+1 on " + s.name());
    o.detail << s.name() << " d=" << r.d.value_or(-1) << " ";
  }
}

void bounds(Outcome& o) {
  const Scheme s = five_qubit_35();
  const QeccReport r = bound_report(s, analysis(s));
  auto status = [](const std::vector<BoundCheck>& v, const std::string& name) {
    for (const BoundCheck& c : v) {
      if (c.name == name) return c.status;
    }
    return BoundStatus::kNotApplicable;
  };
  o.require(status(r.bounds, "singleton_kappa") == BoundStatus::kPass, "kappa <= q");
  o.require(status(r.bounds, "threshold_relation") == BoundStatus::kPass, "k = (n+1)/2");
  o.require(status(r.bounds, "share_size") == BoundStatus::kPass, "q^2 >= (n+2)/2");
  const auto synthetic = check_bounds({5, 4, 9, 2, 2, true});
  o.require(status(synthetic, "share_size") == BoundStatus::kFail && !bounds_pass(synthetic), "(5,9) q=2 flagged");
  o.detail << "five_qubit bounds pass; (k=5,n=9,q=2) share_size "
           << to_string(status(synthetic, "share_size")) << " ";
}

void decoders(Outcome& o) {
  int sets = 0, refused = 0;
  double worst = 1.0;
  for (const Scheme& s : bundled_schemes()) {
    if (!s.is_pure()) continue;
    for (const auto& c : analysis(s).subsets) {
      if (c.qq_class == AccessClass::kAuthorised) {
        const Decoder dec = synthesize_decoder(s, c.players);
        for (std::uint64_t i = 0; i < 100; ++i) worst = std::min(worst, recovery_fidelity(s, dec, haar(s.kappa(), 17, i)));
        ++sets;
      } else {
        bool threw = false;
        try {
          synthesize_decoder(s, c.players);
        } catch (const Error& e) {
          threw = e.code() == ErrorCode::kNotAuthorized;
        }
        o.require(threw, "NotAuthorized on " + s.name() + " {" + format_players(c.players) + "}");
        ++refused;
      }
    }
  }
  o.require(worst >= 1.0 - 1e-9, "recovery fidelity");
  o.detail << sets << " authorised sets, worst fidelity " << worst << "; " << refused << " refused ";
}

void qq_end_to_end(Outcome& o) {
  for (const auto& [s, b] : std::vector<std::pair<Scheme, Positions>>{{cgl_qutrit_23(), {0, 1}},
                                                                      {reed_solomon_threshold(2, 5), {1, 2}}}) {
    const std::uint64_t m = 10000;
    const QqBatch batch = qq_batch(s, b, m, 8);
    o.require(batch.min_fidelity >= 1.0 - 1e-9, "QQ fidelity on " + s.name());
    const double p = 1.0 / (s.q() * s.q());
    double worst_sigma = 0.0;
    for (std::uint64_t c : batch.outcome_counts) {
      const double sigma = std::sqrt(m * p * (1.0 - p));
      worst_sigma = std::max(worst_sigma, std::abs(static_cast<double>(c) - m * p) / sigma);
    }
    o.require(worst_sigma <= 3.0, "Bell histogram on " + s.name());
    o.detail << s.name() << " min F " << batch.min_fidelity << ", max cell dev " << worst_sigma << " sigma ";
  }
}

void rcq_noiseless(Outcome& o) {
  SessionConfig cfg;
  cfg.m = 10000;
  cfg.seed = 7;
  for (const auto& [s, b] : std::vector<std::pair<Scheme, Positions>>{
           {cgl_qutrit_23(), {0, 1}}, {discard_shares(five_qubit_35(), {4}), {0, 2, 3}}}) {
    const SessionTranscript tr = rcq_session(s, b, cfg);
    const double p = 1.0 / (s.q() + 1);
    const double expect = static_cast<double>(cfg.m) * p;
    const double sigma = std::sqrt(static_cast<double>(cfg.m) * p * (1.0 - p));
    o.require(sifted_error_rate(tr) == 0.0, "sifted agreement on " + s.name());
    o.require(std::abs(static_cast<double>(tr.sift_count) - expect) <= 3.0 * sigma, "sift count on " + s.name());
    o.require(!tr.aborted && tr.final_keys_match, "no abort on " + s.name());
    o.detail << s.name() << " sifted " << tr.sift_count << " (expect " << expect << " +- " << 3.0 * sigma << ") ";
  }
}

void rcq_attack(Outcome& o) {
  struct Case {
    Scheme s;
    Positions b;
    std::size_t eve;
    std::string noise;
    std::vector<int> eve_bases;  // averaged for the random strategy
  };
  const std::vector<Case> cases{
      {cgl_qutrit_23(), {0, 1}, 0, "intercept:1:0", {0}},
      {cgl_qutrit_23(), {0, 1}, 1, "intercept:2:random", {0, 1, 2, 3}},
      {five_qubit_35(), {0, 1, 2}, 0, "intercept:1:2", {2}},
  };
  for (const Case& c : cases) {
    double expect = 0.0;
    for (int t : c.eve_bases) {
      oracle::InterceptSetup setup{c.s.encoding(), c.s.q(), c.s.n_total(), {c.b.begin(), c.b.end()}, c.eve, t};
      expect += oracle::intercept_resend_qber(setup) / static_cast<double>(c.eve_bases.size());
    }
    SessionConfig cfg;
    cfg.m = 20000;
    cfg.seed = 10;
    cfg.noise = parse_noise(c.noise);
    const SessionTranscript tr = rcq_session(c.s, c.b, cfg);
    const double got = sifted_error_rate(tr);
    const double tol = window(expect, static_cast<double>(tr.sift_count));
    o.require(std::abs(got - expect) <= tol, "QBER vs oracle on " + c.s.name() + " " + c.noise);
    if (expect > cfg.abort_qber) o.require(tr.aborted, "abort on " + c.noise);
    o.detail << c.s.name() << " " << c.noise << ": sim " << got << " oracle " << expect << " (+-" << tol << ")"
             << (tr.aborted ? " aborted" : "") << "; ";
  }
}

void mixed_ramp(Outcome& o) {
  const AccessReport& r = analysis(discard_shares(five_qubit_35(), {4}));
  o.require(r.k == 3 && r.k_prime == 2 && r.n_active == 4, "ramp (3,2,4)");
  o.require(r.k_prime != r.n_active - r.k.value_or(0), "k' != n - k");
  o.detail << "ramp (" << r.k.value_or(-1) << "," << r.k_prime << "," << r.n_active << "), n-k = "
           << r.n_active - r.k.value_or(0) << " ";
}

void determinism(Outcome& o) {
  const std::vector<std::string> cmds{
      "analyze --scheme cgl23",
      "simulate rcq --scheme cgl23 --set 1,3 --rounds 5000 --seed 99 --noise depolarizing:1:0.05",
      "simulate qq --scheme five_qubit --set 1,2,3 --trials 200 --seed 3",
  };
  for (const std::string& cmd : cmds) {
    const cli::Result a = cli::run(cmd), b = cli::run(cmd);
    bool same = false;
    try {
      same = dump_report(without_timestamp(Json::parse(a.out))) == dump_report(without_timestamp(Json::parse(b.out)));
    } catch (const std::exception&) {
      same = false;
    }
    o.require(a.status == 0 && b.status == 0 && same, "identical output for '" + cmd + "'");
  }
  o.detail << cmds.size() << " commands compared ";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"complementarity of bases and logical bases", complementarity},
      {"(2,3) qutrit access structure", cgl_structure},
      {"QQ/RCQ equivalence and lemma on all bundled schemes", prop1},
      {"pure duality: authorised iff complement erasure-correctable", duality},
      {"code distances d = n-k+1", distances},
      {"dimension bounds", bounds},
      {"decoder synthesis", decoders},
      {"QQ end-to-end", qq_end_to_end},
      {"RCQ noiseless", rcq_noiseless},
      {"RCQ intercept-resend vs exact oracle", rcq_attack},
      {"mixed-scheme ramp", mixed_ramp},
      {"report determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): "
              << o.detail.str() << "[" << secs << " s]\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

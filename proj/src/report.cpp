#include "qss/report.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "qss/scheme_io.hpp"

namespace qss {

namespace {

Json labels(const Positions& p) {
  Json a = Json::array();
  for (std::size_t x : p) a.push_back(x + 1);
  return a;
}

Json digits(const std::vector<int>& d) {
  std::string s;
  s.reserve(d.size());
  for (int x : d) s += x < 10 ? static_cast<char>('0' + x) : static_cast<char>('a' + x - 10);
  return s;
}

Json opt_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json ramp(const std::optional<int>& k, int k_prime, int n) {
  Json r;
  r["k"] = opt_int(k);
  r["k_prime"] = k_prime;
  r["n"] = n;
  return r;
}

std::string construction_name(Construction::Kind k) {
  switch (k) {
    case Construction::Kind::kExplicit: return "explicit";
    case Construction::Kind::kGhz: return "ghz";
    case Construction::Kind::kCgl23: return "cgl23";
    case Construction::Kind::kFiveQubit: return "five_qubit";
    case Construction::Kind::kReedSolomon: return "rs";
  }
  return "explicit";
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Json scheme_json(const Scheme& s) {
  Json j;
  j["name"] = s.name();
  j["q"] = s.q();
  j["kappa"] = s.kappa();
  j["n_total"] = s.n_total();
  j["n_active"] = s.num_active();
  j["discarded"] = labels(s.discarded());
  j["pure"] = s.is_pure();
  j["ideal"] = s.is_ideal();
  j["construction"] = construction_name(s.construction().kind);
  if (s.claimed_ramp()) {
    const RampParams& r = *s.claimed_ramp();
    j["claimed_ramp"] = {{"k", r.k}, {"k_prime", opt_int(r.k_prime)}, {"n", r.n}};
  } else {
    j["claimed_ramp"] = nullptr;
  }
  return j;
}

Json access_json(const AccessReport& report) {
  Json j;
  j["tol"] = report.tol;
  j["ramp"] = ramp(report.k, report.k_prime, report.n_active);
  j["rcq_ramp"] = ramp(report.rcq_k, report.rcq_k_prime, report.n_active);
  j["perfect_threshold"] = report.is_perfect_threshold();
  j["threshold_violation"] = report.threshold_violation;
  j["rcq_two_bases_differs"] = report.rcq_two_bases_differs;
  j["summary"] = relationship_summary(report);
  Json subsets = Json::array();
  for (std::size_t i = 0; i < report.subsets.size(); ++i) {
    const SubsetClassification& c = report.subsets[i];
    const Prop1Verdict& v = report.prop1.per_subset[i];
    Json e;
    e["players"] = labels(c.players);
    e["i_quantum"] = c.i_quantum;
    Json chi = Json::array();
    for (const BasisChi& b : c.chi) chi.push_back({{"t", b.t}, {"bits", b.bits}});
    e["chi"] = chi;
    e["qq_class"] = std::string(to_string(c.qq_class));
    e["rcq_class"] = std::string(to_string(c.rcq_class));
    e["rcq_class_two_bases"] = std::string(to_string(c.rcq_class_two_bases));
    e["prop1"] = {{"qq_auth_implies_rcq_auth", v.qq_auth_implies_rcq_auth},
                  {"qq_unauth_implies_rcq_unauth", v.qq_unauth_implies_rcq_unauth},
                  {"rcq_auth_implies_qq_auth", v.rcq_auth_implies_qq_auth},
                  {"lemma_holds", v.lemma_holds},
                  {"lemma_margin", v.lemma_margin},
                  {"lemma_margin_all_pairs", v.lemma_margin_all_pairs}};
    subsets.push_back(std::move(e));
  }
  j["subsets"] = subsets;
  j["prop1"] = {{"all_pass", report.prop1.all_pass}, {"min_lemma_margin", report.prop1.min_lemma_margin}};
  return j;
}

Json qecc_json(const QeccReport& r) {
  Json j;
  j["params"] = {{"n", r.n}, {"kappa", r.kappa}, {"d", opt_int(r.d)}, {"q", r.q}};
  j["pure"] = r.is_pure;
  j["discarded"] = labels(r.discarded);
  j["k_from_distance"] = opt_int(r.k_from_distance);
  j["measured_ramp"] = ramp(r.measured_k, r.measured_k_prime, r.n);
  Json bounds = Json::array();
  for (const BoundCheck& b : r.bounds) {
    bounds.push_back({{"name", b.name}, {"status", std::string(to_string(b.status))}, {"advisory", b.advisory},
                      {"detail", b.detail}});
  }
  j["bounds"] = bounds;
  j["claimed_ramp_matches"] = r.claimed_ramp_matches ? Json(*r.claimed_ramp_matches) : Json(nullptr);
  j["duality_exceptions"] = r.duality_exceptions;
  j["erasure_monotone"] = r.erasure_monotone;
  j["no_cloning"] = r.no_cloning;
  j["distance_matches_ramp"] = r.distance_matches_ramp;
  Json er = Json::array();
  for (const ErasureEntry& e : r.erasures) {
    er.push_back({{"erased", labels(e.erased)}, {"correctable", e.correctable}, {"residual", e.residual}});
  }
  j["erasures"] = er;
  j["passes"] = r.passes();
  return j;
}

Json qq_json(const QqBatch& b) {
  Json j;
  j["protocol"] = "qq";
  j["scheme"] = b.scheme_name;
  j["players"] = labels(b.players);
  j["trials"] = b.trials;
  j["seed"] = b.seed;
  j["min_fidelity"] = b.min_fidelity;
  j["mean_fidelity"] = b.mean_fidelity;
  j["bell_outcome_counts"] = b.outcome_counts;
  return j;
}

Json transcript_json(const SessionTranscript& tr) {
  Json j;
  j["protocol"] = "rcq";
  j["scheme"] = tr.scheme_name;
  j["players"] = labels(tr.players);
  j["q"] = tr.q;
  j["rounds"] = tr.config.m;
  j["seed"] = tr.config.seed;
  j["noise"] = to_string(tr.config.noise);
  j["abort_qber"] = tr.config.abort_qber;
  j["test_fraction"] = tr.config.test_fraction;
  j["pa_output_rate"] = tr.config.pa_output_rate;
  j["sift_count"] = tr.sift_count;
  j["sift_rate"] = static_cast<double>(tr.sift_count) / static_cast<double>(tr.config.m);
  j["test_count"] = tr.test_count;
  j["test_errors"] = tr.test_errors;
  j["qber"] = tr.qber_estimate;
  j["qber_stderr"] = tr.qber_stderr;
  j["aborted"] = tr.aborted;
  j["abort_reason"] = tr.abort_reason;
  j["raw_key_length"] = tr.raw_key_dealer.size();
  j["raw_key_disagreement"] = tr.raw_key_disagreement;
  j["final_key_length"] = tr.final_key.size();
  j["final_keys_match"] = tr.final_keys_match;
  j["final_key"] = digits(tr.final_key);
  return j;
}

std::string relationship_summary(const AccessReport& report) {
  int qq_auth = 0, rcq_auth = 0, qq_unauth = 0, rcq_unauth = 0;
  for (const SubsetClassification& c : report.subsets) {
    qq_auth += c.qq_class == AccessClass::kAuthorised;
    rcq_auth += c.rcq_class == AccessClass::kAuthorised;
    qq_unauth += c.qq_class == AccessClass::kUnauthorised;
    rcq_unauth += c.rcq_class == AccessClass::kUnauthorised;
  }
  auto fmt_ramp = [&](const std::optional<int>& k, int kp) {
    return "(" + (k ? std::to_string(*k) : std::string("-")) + "," + std::to_string(kp) + "," +
           std::to_string(report.n_active) + ")";
  };
  std::ostringstream os;
  os << "QQ ramp " << fmt_ramp(report.k, report.k_prime) << ", RCQ ramp " << fmt_ramp(report.rcq_k, report.rcq_k_prime)
     << "; authorised QQ=" << qq_auth << " RCQ=" << rcq_auth << ", unauthorised QQ=" << qq_unauth
     << " RCQ=" << rcq_unauth << "; QQ-auth <=> RCQ-auth " << (report.prop1.all_pass ? "holds" : "VIOLATED");
  return os.str();
}

Json make_document(const std::string& command, const Json& config, const Json& body) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool_version"] = kToolVersion;
  doc["command"] = command;
  doc["timestamp"] = utc_now();
  doc["config"] = config;
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

Json without_timestamp(const Json& doc) {
  Json copy = doc;
  copy.erase("timestamp");
  return copy;
}

std::string dump_report(const Json& doc) { return doc.dump(2) + "\n"; }

void write_report(const std::filesystem::path& path, const Json& doc) { write_text_atomic(path, dump_report(doc)); }

}  // namespace qss

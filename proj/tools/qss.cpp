// qss: build secret-sharing schemes, analyse their access structure, and run
// the QQ / RCQ protocols.
//
// Exit status: 0 success, 1 a checked property failed (or the set is not
// authorised), 2 usage or input error.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "qss/access.hpp"
#include "qss/errors.hpp"
#include "qss/protocol.hpp"
#include "qss/qecc.hpp"
#include "qss/report.hpp"
#include "qss/scheme.hpp"
#include "qss/scheme_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProperty = 1;
constexpr int kExitUsage = 2;

int exit_code_for(qss::ErrorCode code) {
  switch (code) {
    case qss::ErrorCode::kNotAuthorized: return kExitProperty;
    default: return kExitUsage;
  }
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) {
      throw qss::Error(qss::ErrorCode::kInvalidArgument, std::string("bad ") + what + " '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw qss::Error(qss::ErrorCode::kInvalidArgument, std::string("empty ") + what);
  return out;
}

qss::Positions parse_players(const std::string& text, int n_total) {
  qss::Positions out;
  for (int label : parse_int_list(text, "player set")) {
    if (label < 1 || label > n_total) {
      throw qss::Error(qss::ErrorCode::kInvalidPositions,
                       "player " + std::to_string(label) + " outside 1.." + std::to_string(n_total));
    }
    out.push_back(static_cast<std::size_t>(label - 1));
  }
  return out;
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ':')) parts.push_back(tok);
  return parts;
}

// A path to a scheme file, or a built-in name: cgl23, five_qubit,
// five_qubit_minus_5, ghz:N:Q, rs:K:Q, or any bundled scheme's name.
qss::Scheme resolve_scheme(const std::string& ref) {
  if (std::filesystem::is_regular_file(ref)) return qss::load_scheme(ref);
  const std::vector<std::string> parts = split_colon(ref);
  if (parts.size() == 3 && (parts[0] == "ghz" || parts[0] == "rs")) {
    const int a = parse_int_list(parts[1], "scheme parameter").front();
    const int b = parse_int_list(parts[2], "scheme parameter").front();
    return parts[0] == "ghz" ? qss::ghz_scheme(a, b) : qss::reed_solomon_threshold(a, b);
  }
  for (qss::Scheme& s : qss::bundled_schemes()) {
    if (s.name() == ref) return s;
  }
  throw qss::Error(qss::ErrorCode::kParseError, "'" + ref + "' is neither a scheme file nor a built-in scheme");
}

void emit(const qss::Json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << qss::dump_report(doc);
  } else {
    qss::write_report(out, doc);
  }
}

// ---------------------------------------------------------------------------

struct MakeArgs {
  std::string construction;
  int n = 0;
  int k = 0;
  int q = 0;
  std::string discard;
  std::string out;
  bool explicit_amplitudes = false;
};

int run_make(const MakeArgs& a) {
  qss::Scheme s = [&] {
    if (a.construction == "ghz") {
      if (a.n == 0 || a.q == 0) throw qss::Error(qss::ErrorCode::kInvalidArgument, "ghz needs --n and --q");
      return qss::ghz_scheme(a.n, a.q);
    }
    if (a.construction == "cgl23") return qss::cgl_qutrit_23();
    if (a.construction == "five_qubit") return qss::five_qubit_35();
    if (a.construction == "rs") {
      if (a.k == 0 || a.q == 0) throw qss::Error(qss::ErrorCode::kInvalidArgument, "rs needs --k and --q");
      return qss::reed_solomon_threshold(a.k, a.q);
    }
    throw qss::Error(qss::ErrorCode::kInvalidArgument, "unknown construction '" + a.construction + "'");
  }();
  if (!a.discard.empty()) s = qss::discard_shares(s, parse_players(a.discard, s.n_total()));
  const qss::SaveMode mode = a.explicit_amplitudes ? qss::SaveMode::kExplicit : qss::SaveMode::kCompact;
  const std::string path = a.out.empty() ? s.name() + ".scheme" : a.out;
  qss::save_scheme(s, path, mode);
  std::cout << "wrote " << path << " (" << s.name() << ", q=" << s.q() << ", kappa=" << s.kappa()
            << ", n=" << s.num_active() << ")\n";
  return kExitOk;
}

struct AnalyzeArgs {
  std::string file;
  std::string scheme;
  double tol = qss::kDefaultAccessTol;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a) {
  if (a.file.empty() == a.scheme.empty()) {
    throw qss::Error(qss::ErrorCode::kInvalidArgument, "give exactly one of FILE or --scheme");
  }
  if (!(a.tol > 0.0)) throw qss::Error(qss::ErrorCode::kInvalidArgument, "--tol must be positive");
  const qss::Scheme s = a.file.empty() ? resolve_scheme(a.scheme) : qss::load_scheme(a.file);
  const qss::AccessReport access = qss::analyze_access_structure(s, a.tol);
  const qss::QeccReport qecc = qss::bound_report(s, access);

  qss::Json config;
  config["scheme"] = a.file.empty() ? a.scheme : std::filesystem::path(a.file).filename().string();
  config["tol"] = a.tol;
  qss::Json body;
  body["scheme"] = qss::scheme_json(s);
  body["access"] = qss::access_json(access);
  body["qecc"] = qss::qecc_json(qecc);
  const bool pass = access.prop1.all_pass && !access.threshold_violation && qecc.passes();
  body["verdict"] = pass ? "pass" : "fail";
  const qss::Json doc = qss::make_document("analyze", config, body);
  emit(doc, a.out);

  std::ostream& log = a.out.empty() ? std::cerr : std::cout;
  log << s.name() << ": " << qss::relationship_summary(access) << "\n";
  if (qecc.d) log << "  distance d = " << *qecc.d << "\n";
  for (const qss::BoundCheck& b : qecc.bounds) {
    log << "  " << b.name << ": " << qss::to_string(b.status) << (b.advisory ? " (advisory)" : "") << " [" << b.detail
        << "]\n";
  }
  log << "  verdict: " << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitOk : kExitProperty;
}

struct SimulateArgs {
  std::string protocol;
  std::string scheme;
  std::string set;
  std::uint64_t rounds = 10000;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  std::string noise = "none";
  double abort_qber = 0.11;
  double test_fraction = 0.5;
  double pa_rate = 0.5;
  std::string out;
  std::string log;
};

int run_simulate(const SimulateArgs& a) {
  const qss::Scheme s = resolve_scheme(a.scheme);
  const qss::Positions players = parse_players(a.set, s.n_total());
  qss::Json config;
  config["protocol"] = a.protocol;
  config["scheme"] = std::filesystem::is_regular_file(a.scheme) ? std::filesystem::path(a.scheme).filename().string()
                                                                 : a.scheme;
  config["set"] = a.set;
  config["seed"] = a.seed;

  if (a.protocol == "qq") {
    config["trials"] = a.trials;
    const qss::QqBatch batch = qss::qq_batch(s, players, a.trials, a.seed);
    const bool pass = batch.min_fidelity >= 1.0 - 1e-9;
    qss::Json body;
    body["scheme"] = qss::scheme_json(s);
    body["simulation"] = qss::qq_json(batch);
    body["verdict"] = pass ? "pass" : "fail";
    emit(qss::make_document("simulate", config, body), a.out);
    std::ostream& log = a.out.empty() ? std::cerr : std::cout;
    log << s.name() << " QQ {" << qss::format_players(batch.players) << "}: " << batch.trials
        << " trials, min fidelity " << batch.min_fidelity << ", mean " << batch.mean_fidelity << "\n";
    return pass ? kExitOk : kExitProperty;
  }

  qss::SessionConfig cfg;
  cfg.m = a.rounds;
  cfg.seed = a.seed;
  cfg.noise = qss::parse_noise(a.noise);
  cfg.abort_qber = a.abort_qber;
  cfg.test_fraction = a.test_fraction;
  cfg.pa_output_rate = a.pa_rate;
  cfg.validate();
  config["rounds"] = a.rounds;
  config["noise"] = qss::to_string(cfg.noise);
  config["abort_qber"] = a.abort_qber;
  config["test_fraction"] = a.test_fraction;
  config["pa_output_rate"] = a.pa_rate;
  const qss::SessionTranscript tr = qss::rcq_session(s, players, cfg);
  qss::Json body;
  body["scheme"] = qss::scheme_json(s);
  body["simulation"] = qss::transcript_json(tr);
  emit(qss::make_document("simulate", config, body), a.out);
  if (!a.log.empty()) qss::write_text_atomic(a.log, qss::round_log(tr));
  std::ostream& log = a.out.empty() ? std::cerr : std::cout;
  log << s.name() << " RCQ {" << qss::format_players(tr.players) << "}: sifted " << tr.sift_count << "/" << tr.config.m
      << ", qber " << tr.qber_estimate << " +- " << tr.qber_stderr << ", aborted=" << (tr.aborted ? "true" : "false")
      << ", final key " << tr.final_key.size() << " digits\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum secret sharing: schemes, access structures, protocol simulation"};
  app.require_subcommand(1);

  MakeArgs make;
  CLI::App* make_cmd = app.add_subcommand("make", "Write a scheme file");
  make_cmd->add_option("--construction", make.construction, "ghz | cgl23 | five_qubit | rs")->required();
  make_cmd->add_option("--n", make.n, "number of shares (ghz)");
  make_cmd->add_option("--k", make.k, "threshold (rs)");
  make_cmd->add_option("--q", make.q, "share dimension");
  make_cmd->add_option("--discard", make.discard, "comma-separated 1-based shares to trace out");
  make_cmd->add_option("--out", make.out, "output path (default NAME.scheme)");
  make_cmd->add_flag("--explicit", make.explicit_amplitudes, "write amplitudes instead of the construction line");

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Access structure, QQ/RCQ equivalence, QECC bounds");
  analyze_cmd->add_option("file", analyze.file, "scheme file");
  analyze_cmd->add_option("--scheme", analyze.scheme, "built-in scheme name instead of a file");
  analyze_cmd->add_option("--tol", analyze.tol, "classification tolerance in bits");
  analyze_cmd->add_option("--out", analyze.out, "JSON report path (default stdout)");

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run the QQ or RCQ protocol");
  sim_cmd->add_option("protocol", sim.protocol, "qq | rcq")->required()->check(CLI::IsMember({"qq", "rcq"}));
  sim_cmd->add_option("--scheme", sim.scheme, "scheme file or built-in name")->required();
  sim_cmd->add_option("--set", sim.set, "comma-separated 1-based players")->required();
  sim_cmd->add_option("--rounds", sim.rounds, "RCQ rounds");
  sim_cmd->add_option("--trials", sim.trials, "QQ trials");
  sim_cmd->add_option("--seed", sim.seed, "64-bit seed");
  sim_cmd->add_option("--noise", sim.noise, "none | depolarizing:S:p | erasure:S:p | intercept:S:t|random[:p]");
  sim_cmd->add_option("--abort-qber", sim.abort_qber, "abort threshold");
  sim_cmd->add_option("--test-fraction", sim.test_fraction, "sifted rounds sacrificed for QBER estimation");
  sim_cmd->add_option("--pa-rate", sim.pa_rate, "privacy-amplification output rate");
  sim_cmd->add_option("--out", sim.out, "JSON report path (default stdout)");
  sim_cmd->add_option("--log", sim.log, "round log path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*make_cmd) return run_make(make);
    if (*analyze_cmd) return run_analyze(analyze);
    if (*sim_cmd) return run_simulate(sim);
  } catch (const qss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

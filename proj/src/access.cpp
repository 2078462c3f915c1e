#include "qss/access.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qss/errors.hpp"

namespace qss {

namespace {

AccessClass classify_qq(double i_quantum, double log_kappa, double tol) {
  if (std::abs(i_quantum - 2.0 * log_kappa) < tol) return AccessClass::kAuthorised;
  if (i_quantum < tol) return AccessClass::kUnauthorised;
  return AccessClass::kIntermediate;
}

AccessClass classify_rcq(const std::vector<BasisChi>& chi, const std::vector<int>& bases, double log_kappa, double tol) {
  bool all_full = true;
  bool all_zero = true;
  for (const BasisChi& c : chi) {
    if (std::find(bases.begin(), bases.end(), c.t) == bases.end()) continue;
    all_full = all_full && c.bits > log_kappa - tol;
    all_zero = all_zero && c.bits < tol;
  }
  if (all_full) return AccessClass::kAuthorised;
  if (all_zero) return AccessClass::kUnauthorised;
  return AccessClass::kIntermediate;
}

std::vector<int> two_bases(const Scheme& s) {
  if (!s.is_ideal()) return {0};
  return {0, s.q()};
}

}  // namespace

std::string_view to_string(AccessClass c) {
  switch (c) {
    case AccessClass::kAuthorised: return "authorised";
    case AccessClass::kUnauthorised: return "unauthorised";
    case AccessClass::kIntermediate: return "intermediate";
  }
  return "unknown";
}

double SubsetClassification::chi_at(int t) const {
  for (const BasisChi& c : chi) {
    if (c.t == t) return c.bits;
  }
  throw Error(ErrorCode::kUnsupportedBasis, "no chi recorded for t = " + std::to_string(t));
}

const SubsetClassification& AccessReport::find(const Positions& players) const {
  Positions key = players;
  std::sort(key.begin(), key.end());
  for (const SubsetClassification& c : subsets) {
    if (c.players == key) return c;
  }
  throw Error(ErrorCode::kInvalidPositions, "subset {" + format_players(players) + "} not in report");
}

// ---------------------------------------------------------------------------

AccessAnalyzer::AccessAnalyzer(const Scheme& s) : scheme_(s), cs_(channel_state(s)), bases_(scheme_bases(s)) {
  logical_.reserve(bases_.size());
  for (int t : bases_) {
    std::vector<PureState> states;
    states.reserve(static_cast<std::size_t>(s.kappa()));
    for (int i = 0; i < s.kappa(); ++i) states.push_back(logical_basis_state(s, t, i));
    logical_.push_back(std::move(states));
  }
}

void AccessAnalyzer::check_players(const Positions& players) const {
  if (players.empty()) throw Error(ErrorCode::kEmptySubset, "player subset is empty");
  Positions sorted = players;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidPositions, "repeated player");
  }
  for (std::size_t p : sorted) {
    if (!std::binary_search(scheme_.active().begin(), scheme_.active().end(), p)) {
      throw Error(ErrorCode::kInvalidPositions, "share " + std::to_string(p + 1) + " is not an active player");
    }
  }
}

double AccessAnalyzer::mutual_info(const Positions& players) const {
  check_players(players);
  Positions b;
  for (std::size_t p : players) b.push_back(p + 1);
  Positions db = b;
  db.insert(db.begin(), 0);
  // S(tau) = log kappa; (id x Lambda_B)(Phi) is the (d, B) marginal of the channel state.
  const double s_b = reduced_entropy(cs_.purified, b);
  const double s_db = reduced_entropy(cs_.purified, db);
  const double i = std::log2(static_cast<double>(scheme_.kappa())) + s_b - s_db;
  return std::max(0.0, i);
}

double AccessAnalyzer::chi(const Positions& players, int t) const {
  check_players(players);
  const auto it = std::find(bases_.begin(), bases_.end(), t);
  if (it == bases_.end()) {
    if (!scheme_.is_ideal()) throw Error(ErrorCode::kNonIdealScheme, "only t = 0 is defined for kappa != q");
    throw Error(ErrorCode::kUnsupportedBasis, "basis t = " + std::to_string(t) + " unavailable for q = " + std::to_string(scheme_.q()));
  }
  const auto& states = logical_[static_cast<std::size_t>(it - bases_.begin())];
  // The uniform mixture of the ensemble is Lambda_B(tau), the B marginal of the channel state.
  Positions b;
  for (std::size_t p : players) b.push_back(p + 1);
  const double s_avg = reduced_entropy(cs_.purified, b);
  double s_each = 0.0;
  for (const PureState& psi : states) s_each += reduced_entropy(psi, players);
  s_each /= static_cast<double>(states.size());
  return std::max(0.0, s_avg - s_each);
}

SubsetClassification AccessAnalyzer::classify(const Positions& players, double tol) const {
  SubsetClassification c;
  c.players = players;
  std::sort(c.players.begin(), c.players.end());
  c.tol = tol;
  c.i_quantum = mutual_info(c.players);
  for (int t : bases_) c.chi.push_back({t, chi(c.players, t)});
  const double log_kappa = std::log2(static_cast<double>(scheme_.kappa()));
  c.qq_class = classify_qq(c.i_quantum, log_kappa, tol);
  c.rcq_class = classify_rcq(c.chi, bases_, log_kappa, tol);
  c.rcq_class_two_bases = classify_rcq(c.chi, two_bases(scheme_), log_kappa, tol);
  return c;
}

// ---------------------------------------------------------------------------

DensityMatrix apply_lambda(const Scheme& s, const Positions& players, const DensityMatrix& rho_in) {
  if (players.empty()) throw Error(ErrorCode::kEmptySubset, "player subset is empty");
  if (rho_in.shape().total_dim() != static_cast<std::size_t>(s.kappa())) {
    throw Error(ErrorCode::kDimensionMismatch, "input must be kappa-dimensional");
  }
  for (std::size_t p : players) {
    if (!std::binary_search(s.active().begin(), s.active().end(), p)) {
      throw Error(ErrorCode::kInvalidPositions, "share " + std::to_string(p + 1) + " is not an active player");
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_in.matrix());
  std::optional<Matrix> acc;
  SystemShape out_shape = s.share_shape().subshape(players);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double w = es.eigenvalues()[k];
    if (w <= 1e-15) continue;
    const PureState encoded = PureState::normalized(s.share_shape(), s.encoding() * es.eigenvectors().col(k));
    const DensityMatrix part = partial_trace(encoded, players);
    if (!acc) {
      acc = w * part.matrix();
      out_shape = part.shape();
    } else {
      *acc += w * part.matrix();
    }
  }
  if (!acc) throw Error(ErrorCode::kInvariantViolation, "input state has no positive spectrum");
  const double tr = acc->trace().real();
  return DensityMatrix(out_shape, *acc / tr);
}

double quantum_mutual_info(const Scheme& s, const Positions& players) { return AccessAnalyzer(s).mutual_info(players); }

double holevo_chi(const Scheme& s, const Positions& players, int t) { return AccessAnalyzer(s).chi(players, t); }

SubsetClassification classify_subset(const Scheme& s, const Positions& players, double tol) {
  return AccessAnalyzer(s).classify(players, tol);
}

AccessReport analyze_access_structure(const Scheme& s, double tol) {
  const int n = s.num_active();
  if (n > kMaxAnalysedPlayers) {
    throw Error(ErrorCode::kTooManyPlayers, std::to_string(n) + " players exceeds the analysis limit of " +
                                                std::to_string(kMaxAnalysedPlayers));
  }
  const AccessAnalyzer analyzer(s);
  AccessReport report;
  report.scheme_name = s.name();
  report.n_active = n;
  report.kappa = s.kappa();
  report.q = s.q();
  report.is_pure = s.is_pure();
  report.tol = tol;

  std::vector<bool> all_auth(static_cast<std::size_t>(n) + 1, true);
  std::vector<bool> all_unauth(static_cast<std::size_t>(n) + 1, true);
  std::vector<bool> all_rcq_auth(static_cast<std::size_t>(n) + 1, true);
  std::vector<bool> all_rcq_unauth(static_cast<std::size_t>(n) + 1, true);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Positions players;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) players.push_back(s.active()[static_cast<std::size_t>(j)]);
    }
    SubsetClassification c = analyzer.classify(players, tol);
    const std::size_t size = players.size();
    all_auth[size] = all_auth[size] && c.qq_class == AccessClass::kAuthorised;
    all_unauth[size] = all_unauth[size] && c.qq_class == AccessClass::kUnauthorised;
    all_rcq_auth[size] = all_rcq_auth[size] && c.rcq_class == AccessClass::kAuthorised;
    all_rcq_unauth[size] = all_rcq_unauth[size] && c.rcq_class == AccessClass::kUnauthorised;
    report.rcq_two_bases_differs = report.rcq_two_bases_differs || c.rcq_class != c.rcq_class_two_bases;
    report.subsets.push_back(std::move(c));
  }

  auto ramp_k = [n](const std::vector<bool>& auth) -> std::optional<int> {
    std::optional<int> k;
    for (int size = n; size >= 1 && auth[static_cast<std::size_t>(size)]; --size) k = size;
    return k;
  };
  auto ramp_kp = [n](const std::vector<bool>& unauth) {
    int kp = 0;
    for (int size = 1; size <= n && unauth[static_cast<std::size_t>(size)]; ++size) kp = size;
    return kp;
  };
  report.k = ramp_k(all_auth);
  report.k_prime = ramp_kp(all_unauth);
  report.rcq_k = ramp_k(all_rcq_auth);
  report.rcq_k_prime = ramp_kp(all_rcq_unauth);
  report.threshold_violation = report.is_pure && report.is_perfect_threshold() && 2 * *report.k != n + 1;
  report.prop1 = verify_prop1(report);
  return report;
}

Prop1Summary verify_prop1(const AccessReport& report) {
  Prop1Summary summary;
  summary.min_lemma_margin = std::numeric_limits<double>::infinity();
  const bool prime = is_prime(report.q) && report.kappa == report.q;
  for (const SubsetClassification& c : report.subsets) {
    Prop1Verdict v;
    if (c.qq_class == AccessClass::kAuthorised) v.qq_auth_implies_rcq_auth = c.rcq_class == AccessClass::kAuthorised;
    if (c.qq_class == AccessClass::kUnauthorised) {
      v.qq_unauth_implies_rcq_unauth = c.rcq_class == AccessClass::kUnauthorised;
    }
    // Two complementary bases suffice, so check the stronger two-bases form too.
    if (c.rcq_class == AccessClass::kAuthorised || c.rcq_class_two_bases == AccessClass::kAuthorised) {
      v.rcq_auth_implies_qq_auth = c.qq_class == AccessClass::kAuthorised;
    }
    if (c.chi.size() >= 2) {
      const int second = prime ? 1 : report.q;
      v.lemma_margin = c.i_quantum - c.chi_at(0) - c.chi_at(second);
      v.lemma_margin_all_pairs = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < c.chi.size(); ++a) {
        for (std::size_t b = a + 1; b < c.chi.size(); ++b) {
          v.lemma_margin_all_pairs = std::min(v.lemma_margin_all_pairs, c.i_quantum - c.chi[a].bits - c.chi[b].bits);
        }
      }
    } else {
      v.lemma_margin = c.i_quantum - c.chi.front().bits;
      v.lemma_margin_all_pairs = v.lemma_margin;
    }
    v.lemma_holds = v.lemma_margin >= -c.tol && v.lemma_margin_all_pairs >= -c.tol;
    summary.all_pass = summary.all_pass && v.all();
    summary.min_lemma_margin = std::min(summary.min_lemma_margin, std::min(v.lemma_margin, v.lemma_margin_all_pairs));
    summary.per_subset.push_back(v);
  }
  if (report.subsets.empty()) summary.min_lemma_margin = 0.0;
  return summary;
}

}  // namespace qss

#pragma once
// Access structure of a scheme from information quantities.
//
// For every subset B of active players the analysis evaluates
//   I(tau; Lambda_B) = S(tau) + S(Lambda_B(tau)) - S((id x Lambda_B)(Phi))
// and, for each dealer basis t, the Holevo quantity of the ensemble of
// post-measurement logical states reduced to B. All entropies come from the
// purified channel state, evaluated on the smaller side of each cut.

#include <optional>
#include <string>
#include <vector>

#include "qss/scheme.hpp"

namespace qss {

enum class AccessClass { kAuthorised, kUnauthorised, kIntermediate };
std::string_view to_string(AccessClass c);

inline constexpr double kDefaultAccessTol = 1e-7;

struct BasisChi {
  int t = 0;
  double bits = 0.0;
};

struct SubsetClassification {
  Positions players;  // 0-based share positions, ascending
  double i_quantum = 0.0;
  std::vector<BasisChi> chi;
  AccessClass qq_class = AccessClass::kIntermediate;
  /// Uses every available basis.
  AccessClass rcq_class = AccessClass::kIntermediate;
  /// Uses only t = 0 and t = q (or t = 0 alone for non-ideal schemes).
  AccessClass rcq_class_two_bases = AccessClass::kIntermediate;
  double tol = kDefaultAccessTol;

  double chi_at(int t) const;
};

struct Prop1Verdict {
  bool qq_auth_implies_rcq_auth = true;
  bool qq_unauth_implies_rcq_unauth = true;
  bool rcq_auth_implies_qq_auth = true;
  bool lemma_holds = true;
  /// I - chi[0] - chi[1] (chi[0] - chi[q] for composite q).
  double lemma_margin = 0.0;
  /// Min over all complementary pairs t < t'.
  double lemma_margin_all_pairs = 0.0;

  bool all() const {
    return qq_auth_implies_rcq_auth && qq_unauth_implies_rcq_unauth && rcq_auth_implies_qq_auth && lemma_holds;
  }
};

struct Prop1Summary {
  std::vector<Prop1Verdict> per_subset;  // parallel to AccessReport::subsets
  bool all_pass = true;
  double min_lemma_margin = 0.0;
};

struct AccessReport {
  std::string scheme_name;
  int n_active = 0;
  int kappa = 0;
  int q = 0;
  bool is_pure = true;
  double tol = kDefaultAccessTol;
  std::vector<SubsetClassification> subsets;  // ordered by subset bitmask over active players
  std::optional<int> k;                       // QQ ramp
  int k_prime = 0;
  std::optional<int> rcq_k;
  int rcq_k_prime = 0;
  /// Some subset's all-bases and two-bases RCQ classes disagree.
  bool rcq_two_bases_differs = false;
  /// Pure perfect threshold with odd n must have k = (n+1)/2.
  bool threshold_violation = false;
  Prop1Summary prop1;

  bool is_perfect_threshold() const { return k && k_prime == *k - 1; }
  const SubsetClassification& find(const Positions& players) const;
};

/// Lambda_B(rho_in): encode, trace out everything except B.
DensityMatrix apply_lambda(const Scheme& s, const Positions& players, const DensityMatrix& rho_in);

double quantum_mutual_info(const Scheme& s, const Positions& players);
double holevo_chi(const Scheme& s, const Positions& players, int t);
SubsetClassification classify_subset(const Scheme& s, const Positions& players, double tol = kDefaultAccessTol);
AccessReport analyze_access_structure(const Scheme& s, double tol = kDefaultAccessTol);
Prop1Summary verify_prop1(const AccessReport& report);

/// Reuses the channel state and logical-basis states across many subsets.
class AccessAnalyzer {
 public:
  explicit AccessAnalyzer(const Scheme& s);

  const Scheme& scheme() const noexcept { return scheme_; }
  double mutual_info(const Positions& players) const;
  double chi(const Positions& players, int t) const;
  SubsetClassification classify(const Positions& players, double tol) const;

 private:
  void check_players(const Positions& players) const;

  Scheme scheme_;
  ChannelState cs_;
  std::vector<int> bases_;
  // logical_[b][i] = logical_basis_state(t = bases_[b], i)
  std::vector<std::vector<PureState>> logical_;
};

inline constexpr int kMaxAnalysedPlayers = 12;

}  // namespace qss

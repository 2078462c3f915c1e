#pragma once
// Secret sharing viewed as erasure correction: correctable erasure sets,
// code distance, and the dimension bounds for threshold schemes.

#include <optional>
#include <string>
#include <vector>

#include "qss/access.hpp"
#include "qss/scheme.hpp"

namespace qss {

struct ErasureCheck {
  bool correctable = false;
  double residual = 0.0;  // offdiag norm of the erasure Gram on the survivors
};

/// `erased` holds 0-based active share positions and must leave at least one
/// active share.
ErasureCheck correctable_erasure(const Scheme& s, const Positions& erased);

/// 1 + the largest e for which every e-share erasure is correctable. Only
/// defined for pure schemes; nullopt otherwise.
std::optional<int> distance(const Scheme& s);

enum class BoundStatus { kPass, kFail, kNotApplicable };
std::string_view to_string(BoundStatus status);

struct BoundCheck {
  std::string name;
  BoundStatus status = BoundStatus::kNotApplicable;
  /// Advisory checks are reported but never fail a report.
  bool advisory = false;
  std::string detail;
};

/// Parameters a construction claims, checked without building it.
struct ClaimedParams {
  int k = 0;
  std::optional<int> k_prime;
  int n = 0;
  int q = 0;
  int kappa = 0;
  bool pure = true;

  bool ideal() const noexcept { return kappa == q; }
  bool perfect_threshold() const noexcept { return k_prime && *k_prime == k - 1; }
};

/// singleton_kappa, share_size, mds_advisory, threshold_relation, pure_duality.
std::vector<BoundCheck> check_bounds(const ClaimedParams& p);
/// True unless a non-advisory check fails.
bool bounds_pass(const std::vector<BoundCheck>& checks);

struct ErasureEntry {
  Positions erased;
  bool correctable = false;
  double residual = 0.0;
};

struct QeccReport {
  std::string scheme_name;
  int n = 0;  // active shares
  int kappa = 0;
  int q = 0;
  bool is_pure = true;
  Positions discarded;
  std::optional<int> d;
  std::optional<int> k_from_distance;  // n - d + 1
  std::optional<int> measured_k;
  int measured_k_prime = 0;
  std::vector<ErasureEntry> erasures;  // every erasure set leaving a share, by bitmask
  std::vector<BoundCheck> bounds;
  std::optional<bool> claimed_ramp_matches;
  /// Erasure sets whose correctability disagrees with the access analysis of
  /// the surviving set.
  int duality_exceptions = 0;
  bool erasure_monotone = true;
  bool no_cloning = true;
  bool distance_matches_ramp = true;

  bool passes() const;
};

/// `analysis` must come from the same scheme (SchemeMismatch otherwise).
QeccReport bound_report(const Scheme& s, const AccessReport& analysis);

}  // namespace qss

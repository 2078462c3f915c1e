#include "qss/qecc.hpp"

#include <algorithm>
#include <bit>
#include <iterator>

#include "qss/decoder.hpp"
#include "qss/errors.hpp"

namespace qss {

namespace {

Positions survivors(const Scheme& s, const Positions& erased) {
  Positions sorted = erased;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidPositions, "erasure set repeats a share");
  }
  for (std::size_t p : sorted) {
    if (!std::binary_search(s.active().begin(), s.active().end(), p)) {
      throw Error(ErrorCode::kInvalidPositions, "share " + std::to_string(p + 1) + " is not an active share");
    }
  }
  Positions keep;
  std::set_difference(s.active().begin(), s.active().end(), sorted.begin(), sorted.end(), std::back_inserter(keep));
  if (keep.empty()) throw Error(ErrorCode::kInvalidPositions, "erasure set must leave at least one share");
  return keep;
}

Positions subset_of(const Positions& base, unsigned mask) {
  Positions out;
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (mask & (1u << j)) out.push_back(base[j]);
  }
  return out;
}

BoundCheck make_check(std::string name, bool applicable, bool pass, std::string detail, bool advisory = false) {
  BoundCheck c;
  c.name = std::move(name);
  c.status = !applicable ? BoundStatus::kNotApplicable : (pass ? BoundStatus::kPass : BoundStatus::kFail);
  c.advisory = advisory;
  c.detail = std::move(detail);
  return c;
}

std::string half(long long twice) {
  return twice % 2 == 0 ? std::to_string(twice / 2) : std::to_string(twice / 2) + ".5";
}

}  // namespace

ErasureCheck correctable_erasure(const Scheme& s, const Positions& erased) {
  const Positions keep = survivors(s, erased);
  const ErasureGram g = erasure_gram(s, keep);
  return {g.offdiag_norm < kAuthorisedGramTol, g.offdiag_norm};
}

std::optional<int> distance(const Scheme& s) {
  if (!s.is_pure()) return std::nullopt;
  const int n = s.num_active();
  int tolerated = 0;
  for (int e = 1; e < n; ++e) {
    bool all = true;
    for (unsigned mask = 1; mask < (1u << n) && all; ++mask) {
      if (std::popcount(mask) != e) continue;
      all = correctable_erasure(s, subset_of(s.active(), mask)).correctable;
    }
    if (!all) break;
    tolerated = e;
  }
  return tolerated + 1;
}

std::string_view to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::kPass: return "pass";
    case BoundStatus::kFail: return "fail";
    case BoundStatus::kNotApplicable: return "not_applicable";
  }
  return "unknown";
}

std::vector<BoundCheck> check_bounds(const ClaimedParams& p) {
  const long long q = p.q;
  const long long n = p.n;
  const long long k = p.k;
  const bool perfect = p.perfect_threshold();
  const bool ideal_pure_perfect = p.ideal() && p.pure && perfect;
  std::vector<BoundCheck> out;
  out.push_back(make_check("singleton_kappa", p.pure && perfect, p.kappa <= p.q,
                           "kappa = " + std::to_string(p.kappa) + ", q = " + std::to_string(p.q)));
  // q^2 >= (n + 2) / 2, compared as 2 q^2 >= n + 2.
  out.push_back(make_check("share_size", ideal_pure_perfect, 2 * q * q >= n + 2,
                           "q^2 = " + std::to_string(q * q) + ", (n+2)/2 = " + half(n + 2)));
  out.push_back(make_check("mds_advisory", ideal_pure_perfect, q * q >= n - 1,
                           "q^2 = " + std::to_string(q * q) + ", n-1 = " + std::to_string(n - 1), true));
  out.push_back(make_check("threshold_relation", p.pure && perfect, 2 * k == n + 1,
                           "k = " + std::to_string(k) + ", (n+1)/2 = " + half(n + 1)));
  const std::string kp = p.k_prime ? std::to_string(*p.k_prime) : "?";
  out.push_back(make_check("pure_duality", p.pure && p.k_prime.has_value(), p.k_prime && *p.k_prime == n - k,
                           "k' = " + kp + ", n-k = " + std::to_string(n - k)));
  return out;
}

bool bounds_pass(const std::vector<BoundCheck>& checks) {
  return std::none_of(checks.begin(), checks.end(),
                      [](const BoundCheck& c) { return !c.advisory && c.status == BoundStatus::kFail; });
}

bool QeccReport::passes() const {
  return bounds_pass(bounds) && duality_exceptions == 0 && erasure_monotone && no_cloning && distance_matches_ramp &&
         claimed_ramp_matches.value_or(true);
}

QeccReport bound_report(const Scheme& s, const AccessReport& analysis) {
  if (analysis.scheme_name != s.name() || analysis.n_active != s.num_active() || analysis.kappa != s.kappa() ||
      analysis.q != s.q() || analysis.is_pure != s.is_pure()) {
    throw Error(ErrorCode::kSchemeMismatch,
                "access report for '" + analysis.scheme_name + "' does not describe scheme '" + s.name() + "'");
  }
  const int n = s.num_active();
  QeccReport r;
  r.scheme_name = s.name();
  r.n = n;
  r.kappa = s.kappa();
  r.q = s.q();
  r.is_pure = s.is_pure();
  r.discarded = s.discarded();
  r.measured_k = analysis.k;
  r.measured_k_prime = analysis.k_prime;

  // Erasure table over every set leaving at least one share (mask = erased).
  const unsigned full = (1u << n) - 1;
  std::vector<int> correctable_by_mask(full + 1, -1);
  for (unsigned mask = 0; mask < full; ++mask) {
    ErasureEntry e;
    e.erased = subset_of(s.active(), mask);
    const ErasureCheck c = correctable_erasure(s, e.erased);
    e.correctable = c.correctable;
    e.residual = c.residual;
    correctable_by_mask[mask] = c.correctable ? 1 : 0;
    const Positions keep = subset_of(s.active(), full & ~mask);
    const bool authorised = analysis.find(keep).qq_class == AccessClass::kAuthorised;
    if (authorised != e.correctable) ++r.duality_exceptions;
    r.erasures.push_back(std::move(e));
  }
  for (unsigned mask = 0; mask < full; ++mask) {
    if (correctable_by_mask[mask] != 1) continue;
    for (unsigned sub = mask; sub; sub = (sub - 1) & mask) {
      if (correctable_by_mask[sub] != 1) r.erasure_monotone = false;
    }
  }
  for (const SubsetClassification& a : analysis.subsets) {
    if (a.qq_class != AccessClass::kAuthorised) continue;
    for (const SubsetClassification& b : analysis.subsets) {
      if (&a == &b || b.qq_class != AccessClass::kAuthorised) continue;
      Positions both;
      std::set_intersection(a.players.begin(), a.players.end(), b.players.begin(), b.players.end(),
                            std::back_inserter(both));
      if (both.empty()) r.no_cloning = false;
    }
  }

  if (s.is_pure()) {
    int tolerated = 0;
    for (int e = 1; e < n; ++e) {
      bool all = true;
      for (unsigned mask = 1; mask < full && all; ++mask) {
        if (std::popcount(mask) == e) all = correctable_by_mask[mask] == 1;
      }
      if (!all) break;
      tolerated = e;
    }
    r.d = tolerated + 1;
    r.k_from_distance = n - *r.d + 1;
    if (analysis.k) r.distance_matches_ramp = *r.k_from_distance == *analysis.k;
  }

  ClaimedParams measured;
  measured.k = analysis.k.value_or(0);
  measured.k_prime = analysis.k ? std::optional<int>(analysis.k_prime) : std::nullopt;
  measured.n = n;
  measured.q = s.q();
  measured.kappa = s.kappa();
  measured.pure = s.is_pure();
  r.bounds = check_bounds(measured);
  if (!s.is_pure() && analysis.k) {
    // Mixed schemes are not bound by duality; record the measured gap.
    for (BoundCheck& c : r.bounds) {
      if (c.name == "pure_duality") {
        c.detail += analysis.k_prime == n - *analysis.k ? " (equal)" : " (differ)";
      }
    }
  }
  if (s.claimed_ramp()) {
    const RampParams& c = *s.claimed_ramp();
    bool match = analysis.k && c.k == *analysis.k && c.n == n;
    if (c.k_prime) match = match && *c.k_prime == analysis.k_prime;
    r.claimed_ramp_matches = match;
  }
  return r;
}

}  // namespace qss

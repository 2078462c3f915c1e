#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles/dense.hpp"
#include "qss/access.hpp"
#include "qss/errors.hpp"

using namespace qss;

namespace {

std::vector<int> dealer_and_shares(const Scheme& s) {
  std::vector<int> dims{s.kappa()};
  dims.insert(dims.end(), static_cast<std::size_t>(s.n_total()), s.q());
  return dims;
}

std::vector<Positions> all_subsets(const Scheme& s) {
  std::vector<Positions> out;
  const int n = s.num_active();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Positions b;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) b.push_back(s.active()[static_cast<std::size_t>(j)]);
    }
    out.push_back(b);
  }
  return out;
}

bool subset_of(const Positions& a, const Positions& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

DensityMatrix pure_density(const Vector& v) {
  return DensityMatrix(SystemShape({static_cast<int>(v.size())}), v * v.adjoint());
}

const double kLog3 = std::log2(3.0);

}  // namespace

TEST(Access, MutualInfoMatchesDenseOracleOnSmallSchemes) {
  // Pure schemes only: the oracle traces the full (d, shares) state.
  for (const Scheme& s : {ghz_scheme(3, 2), ghz_scheme(2, 3), cgl_qutrit_23(), reed_solomon_threshold(2, 5)}) {
    const AccessAnalyzer a(s);
    for (const Positions& b : all_subsets(s)) {
      const std::vector<std::size_t> bb(b.begin(), b.end());
      EXPECT_NEAR(a.mutual_info(b), oracle::mutual_info(s.encoding(), dealer_and_shares(s), bb), 1e-9) << s.name();
    }
  }
}

TEST(Access, HolevoMatchesDenseOracle) {
  for (const Scheme& s : {ghz_scheme(3, 2), ghz_scheme(2, 3), cgl_qutrit_23()}) {
    const AccessAnalyzer a(s);
    const std::vector<int> share_dims(static_cast<std::size_t>(s.n_total()), s.q());
    for (const Positions& b : all_subsets(s)) {
      const std::vector<std::size_t> bb(b.begin(), b.end());
      for (int t : scheme_bases(s)) {
        EXPECT_NEAR(a.chi(b, t), oracle::holevo(s.encoding(), share_dims, bb, t), 1e-9) << s.name() << " t=" << t;
      }
    }
  }
}

TEST(Access, MixedSchemeMatchesOracleWithDiscardedAppended) {
  // For the mixed scheme, I over B equals the pure-scheme value over the same B.
  const Scheme pure = five_qubit_35();
  const Scheme mixed = discard_shares(pure, {4});
  const AccessAnalyzer a(mixed);
  for (const Positions& b : all_subsets(mixed)) {
    const std::vector<std::size_t> bb(b.begin(), b.end());
    EXPECT_NEAR(a.mutual_info(b), oracle::mutual_info(pure.encoding(), dealer_and_shares(pure), bb), 1e-9);
  }
}

TEST(Access, GhzSingletonExample) {
  const Scheme s = ghz_scheme(3, 2);
  EXPECT_NEAR(quantum_mutual_info(s, {0}), 1.0, 1e-10);
  EXPECT_NEAR(holevo_chi(s, {0}, 0), 1.0, 1e-10);
  EXPECT_NEAR(holevo_chi(s, {0}, 2), 0.0, 1e-10);
  const SubsetClassification pair = classify_subset(s, {0, 1});
  EXPECT_NEAR(pair.i_quantum, 1.0, 1e-10);
  EXPECT_NEAR(pair.chi_at(0), 1.0, 1e-10);
  EXPECT_NEAR(pair.chi_at(2), 0.0, 1e-10);
  EXPECT_EQ(pair.qq_class, AccessClass::kIntermediate);
  EXPECT_EQ(pair.rcq_class, AccessClass::kIntermediate);
}

TEST(Access, CglExamples) {
  const Scheme s = cgl_qutrit_23();
  EXPECT_NEAR(quantum_mutual_info(s, {0, 1}), 2.0 * kLog3, 1e-10);
  EXPECT_NEAR(quantum_mutual_info(s, {2}), 0.0, 1e-10);
  const SubsetClassification one = classify_subset(s, {1});
  EXPECT_EQ(one.qq_class, AccessClass::kUnauthorised);
  EXPECT_EQ(one.rcq_class, AccessClass::kUnauthorised);
  for (const BasisChi& c : one.chi) EXPECT_NEAR(c.bits, 0.0, 1e-10);
  const SubsetClassification two = classify_subset(s, {0, 2});
  EXPECT_EQ(two.qq_class, AccessClass::kAuthorised);
  EXPECT_EQ(two.rcq_class, AccessClass::kAuthorised);
  EXPECT_EQ(two.chi.size(), 4u);
  for (const BasisChi& c : two.chi) EXPECT_NEAR(c.bits, kLog3, 1e-10);
}

TEST(Access, Errors) {
  const Scheme s = cgl_qutrit_23();
  EXPECT_THROW(quantum_mutual_info(s, {}), Error);
  EXPECT_THROW(quantum_mutual_info(s, {3}), Error);
  EXPECT_THROW(quantum_mutual_info(s, {1, 1}), Error);
  EXPECT_THROW(quantum_mutual_info(discard_shares(s, {2}), {2}), Error);
  EXPECT_THROW(holevo_chi(s, {0}, 7), Error);
}

TEST(Access, RampExtraction) {
  const AccessReport cgl = analyze_access_structure(cgl_qutrit_23());
  EXPECT_EQ(cgl.k, 2);
  EXPECT_EQ(cgl.k_prime, 1);
  EXPECT_EQ(cgl.rcq_k, 2);
  EXPECT_EQ(cgl.rcq_k_prime, 1);
  EXPECT_TRUE(cgl.is_perfect_threshold());
  EXPECT_FALSE(cgl.threshold_violation);

  const AccessReport g4 = analyze_access_structure(ghz_scheme(4, 2));
  EXPECT_EQ(g4.k, 4);
  EXPECT_EQ(g4.k_prime, 0);
  EXPECT_EQ(g4.subsets.size(), 15u);

  const AccessReport five = analyze_access_structure(five_qubit_35());
  EXPECT_EQ(five.k, 3);
  EXPECT_EQ(five.k_prime, 2);
  EXPECT_EQ(five.rcq_k, 3);
  EXPECT_EQ(five.rcq_k_prime, 2);

  const AccessReport rs = analyze_access_structure(reed_solomon_threshold(2, 5));
  EXPECT_EQ(rs.k, 2);
  EXPECT_EQ(rs.k_prime, 1);
}

TEST(Access, TooManyPlayersGuard) {
  // 13 qubit shares fit the amplitude guard but exceed the subset limit.
  const Scheme s = ghz_scheme(13, 2);
  EXPECT_THROW(analyze_access_structure(s), Error);
}

TEST(Access, Prop1AndLemmaOnEveryBundledScheme) {
  for (const Scheme& s : bundled_schemes()) {
    if (s.name() == "rs_k3_q7") continue;  // covered by the acceptance run
    const AccessReport r = analyze_access_structure(s);
    EXPECT_TRUE(r.prop1.all_pass) << s.name();
    EXPECT_GE(r.prop1.min_lemma_margin, -1e-7) << s.name();
    EXPECT_FALSE(r.rcq_two_bases_differs) << s.name();
    for (std::size_t j = 0; j < r.subsets.size(); ++j) {
      EXPECT_GE(r.prop1.per_subset[j].lemma_margin_all_pairs, -1e-7) << s.name();
    }
  }
  const AccessReport g = analyze_access_structure(ghz_scheme(3, 2));
  const auto idx = static_cast<std::size_t>(&g.find({0}) - g.subsets.data());
  EXPECT_NEAR(g.prop1.per_subset[idx].lemma_margin, 0.0, 1e-7);
}

TEST(Access, MonotonicityProperty) {
  for (const Scheme& s : {ghz_scheme(3, 3), cgl_qutrit_23(), five_qubit_35(), discard_shares(five_qubit_35(), {4})}) {
    const AccessReport r = analyze_access_structure(s);
    for (const auto& a : r.subsets) {
      for (const auto& b : r.subsets) {
        if (!subset_of(a.players, b.players)) continue;
        EXPECT_LE(a.i_quantum, b.i_quantum + 1e-7) << s.name();
        for (std::size_t t = 0; t < a.chi.size(); ++t) EXPECT_LE(a.chi[t].bits, b.chi[t].bits + 1e-7);
      }
    }
  }
}

TEST(Access, ComplementDualityForPureSchemes) {
  for (const Scheme& s : bundled_schemes()) {
    if (!s.is_pure() || s.name() == "rs_k3_q7") continue;
    const AccessReport r = analyze_access_structure(s);
    for (const auto& c : r.subsets) {
      const Positions comp = s.share_shape().complement(c.players);
      if (comp.empty()) continue;
      const auto& other = r.find(comp);
      EXPECT_EQ(c.qq_class == AccessClass::kAuthorised, other.qq_class == AccessClass::kUnauthorised) << s.name();
    }
  }
}

TEST(Access, RelabelingInvariance) {
  const AccessReport r = analyze_access_structure(ghz_scheme(4, 3));
  for (const auto& a : r.subsets) {
    for (const auto& b : r.subsets) {
      if (a.players.size() != b.players.size()) continue;
      EXPECT_NEAR(a.i_quantum, b.i_quantum, 1e-10);
      EXPECT_EQ(a.qq_class, b.qq_class);
      EXPECT_EQ(a.rcq_class, b.rcq_class);
    }
  }
}

TEST(Access, PermutedSharesGiveSameReport) {
  // Reorder the shares of cgl23 through the amplitude permutation.
  const Scheme s = cgl_qutrit_23();
  const std::size_t order[] = {2, 0, 1};
  Matrix enc(27, 3);
  for (int i = 0; i < 3; ++i) {
    const Vector col = s.encoding().col(i);
    const auto p = permute_amplitudes(s.share_shape(), {col.data(), 27}, order);
    for (int j = 0; j < 27; ++j) enc(j, i) = p[static_cast<std::size_t>(j)];
  }
  const Scheme t("cgl23_perm", 3, 3, 3, enc);
  const AccessReport ra = analyze_access_structure(s), rb = analyze_access_structure(t);
  for (const auto& c : rb.subsets) {
    Positions orig;
    for (std::size_t p : c.players) orig.push_back(order[p]);
    std::sort(orig.begin(), orig.end());
    EXPECT_NEAR(c.i_quantum, ra.find(orig).i_quantum, 1e-10);
    EXPECT_EQ(c.qq_class, ra.find(orig).qq_class);
  }
  EXPECT_EQ(rb.k, ra.k);
}

TEST(ApplyLambda, Examples) {
  const Scheme g = ghz_scheme(3, 2);
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityMatrix out = apply_lambda(g, {0}, pure_density(plus));
  EXPECT_LT((out.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-12);

  Vector zero = Vector::Zero(2);
  zero[0] = 1.0;
  const DensityMatrix full = apply_lambda(g, {0, 1, 2}, pure_density(zero));
  const Vector l0 = g.encoding().col(0);
  EXPECT_LT((full.matrix() - l0 * l0.adjoint()).cwiseAbs().maxCoeff(), 1e-12);

  const Scheme c = cgl_qutrit_23();
  Vector v(3);
  v << cplx(0.3, 0.1), cplx(-0.5, 0.2), cplx(0.7, 0.0);
  v.normalize();
  const DensityMatrix one = apply_lambda(c, {0}, pure_density(v));
  EXPECT_LT((one.matrix() - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(apply_lambda(c, {}, pure_density(v)), Error);
  EXPECT_THROW(apply_lambda(c, {0}, pure_density(plus)), Error);
}

TEST(ApplyLambda, Linearity) {
  const Scheme c = cgl_qutrit_23();
  Vector a = Vector::Zero(3), b = Vector::Zero(3);
  a[0] = 1.0;
  b[2] = 1.0;
  const Matrix ra = apply_lambda(c, {0, 1}, pure_density(a)).matrix();
  const Matrix rb = apply_lambda(c, {0, 1}, pure_density(b)).matrix();
  const Matrix mix = 0.25 * a * a.adjoint() + 0.75 * b * b.adjoint();
  const Matrix rm = apply_lambda(c, {0, 1}, DensityMatrix(SystemShape({3}), mix)).matrix();
  EXPECT_LT((rm - 0.25 * ra - 0.75 * rb).cwiseAbs().maxCoeff(), 1e-12);
}

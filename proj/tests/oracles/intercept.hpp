#pragma once
// Exact sifted QBER of an RCQ session when an eavesdropper measures one share
// line in a fixed basis and resends the post-measurement state.
//
// Enumerates every dealer basis t, dealer outcome r (Born weight from the
// channel state), eavesdropper outcome e, and player outcome s. The decoder is
// rebuilt here from the erasure construction, and only full-rank cases (where
// the span vectors already form a unitary) are supported so that the result
// does not depend on how an orthogonal completion is chosen.

#include <stdexcept>

#include "oracles/dense.hpp"

namespace oracle {

struct InterceptSetup {
  Mat encoding;            // q^n x q
  int q = 0;
  int n = 0;
  std::vector<std::size_t> players;  // 0-based, ascending
  std::size_t eve_share = 0;         // 0-based
  int eve_basis = 0;
};

/// Row-major (B digits) x (complement digits) reshape of a share vector.
inline Mat split_matrix(const Vec& psi, int q, int n, const std::vector<std::size_t>& players) {
  std::vector<int> dims(static_cast<std::size_t>(n), q);
  std::vector<bool> in_b(static_cast<std::size_t>(n), false);
  for (std::size_t p : players) in_b[p] = true;
  std::size_t db = 1;
  for (std::size_t k = 0; k < players.size(); ++k) db *= static_cast<std::size_t>(q);
  const std::size_t dc = total(dims) / db;
  Mat m = Mat::Zero(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(dc));
  for (std::size_t x = 0; x < total(dims); ++x) {
    const auto d = digits(x, dims);
    std::size_t row = 0, col = 0;
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (in_b[p]) {
        row = row * static_cast<std::size_t>(q) + static_cast<std::size_t>(d[p]);
      } else {
        col = col * static_cast<std::size_t>(q) + static_cast<std::size_t>(d[p]);
      }
    }
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = psi[static_cast<Eigen::Index>(x)];
  }
  return m;
}

/// Rows (i, k) of the unitary W with W v_{i,k} = |i>|k>.
inline Mat full_rank_decoder(const InterceptSetup& s) {
  const int q = s.q;
  std::vector<Mat> m;
  for (int i = 0; i < q; ++i) m.push_back(split_matrix(s.encoding.col(i), q, s.n, s.players));
  Mat sigma = Mat::Zero(m[0].cols(), m[0].cols());
  for (const Mat& mi : m) sigma += mi.adjoint() * mi / q;
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
  std::vector<Vec> e;
  std::vector<double> lam;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (es.eigenvalues()[k] > 1e-10) {
      lam.push_back(es.eigenvalues()[k]);
      e.push_back(es.eigenvectors().col(k));
    }
  }
  const Eigen::Index r = static_cast<Eigen::Index>(lam.size());
  if (r * q != m[0].rows()) throw std::runtime_error("oracle decoder needs kappa * rank = dim_B");
  Mat w(q * r, m[0].rows());
  for (int i = 0; i < q; ++i) {
    for (Eigen::Index k = 0; k < r; ++k) {
      w.row(i * r + k) = (m[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(k)] / std::sqrt(lam[static_cast<std::size_t>(k)])).adjoint();
    }
  }
  return w;
}

inline double intercept_resend_qber(const InterceptSetup& s) {
  const int q = s.q;
  const Mat w = full_rank_decoder(s);
  const Eigen::Index junk = w.rows() / q;
  const std::vector<Vec> eve = eigenbasis(q, s.eve_basis);
  std::vector<int> dims(static_cast<std::size_t>(s.n), q);
  const std::size_t dim = total(dims);

  double qber = 0.0;
  for (int t = 0; t <= q; ++t) {
    const std::vector<Vec> basis = eigenbasis(q, t);
    for (int r = 0; r < q; ++r) {
      // Projecting d of the channel state onto |r(t)> leaves E conj(v_r) / sqrt(q).
      const Vec unnorm = s.encoding * basis[static_cast<std::size_t>(r)].conjugate() / std::sqrt(static_cast<double>(q));
      const double p_r = unnorm.squaredNorm();
      const Vec psi = unnorm.normalized();

      Mat rho_out = Mat::Zero(q, q);
      for (int ev = 0; ev < q; ++ev) {
        // (|u_e><u_e| on the intercepted share) psi
        Vec phi = Vec::Zero(static_cast<Eigen::Index>(dim));
        const Vec& u = eve[static_cast<std::size_t>(ev)];
        for (std::size_t x = 0; x < dim; ++x) {
          auto dx = digits(x, dims);
          cplx acc = 0.0;
          for (int a = 0; a < q; ++a) {
            auto dy = dx;
            dy[s.eve_share] = a;
            std::size_t y = 0;
            for (int v : dy) y = y * static_cast<std::size_t>(q) + static_cast<std::size_t>(v);
            acc += std::conj(u[a]) * psi[static_cast<Eigen::Index>(y)];
          }
          phi[static_cast<Eigen::Index>(x)] = u[dx[s.eve_share]] * acc;
        }
        const Mat y = w * split_matrix(phi, q, s.n, s.players);
        for (int i = 0; i < q; ++i) {
          for (int j = 0; j < q; ++j) {
            rho_out(i, j) += (y.middleRows(i * junk, junk).cwiseProduct(y.middleRows(j * junk, junk).conjugate())).sum();
          }
        }
      }
      double p_err = 0.0;
      for (int sv = 0; sv < q; ++sv) {
        if (sv == r) continue;
        const Vec c = basis[static_cast<std::size_t>(sv)].conjugate();
        p_err += (c.adjoint() * rho_out * c)(0, 0).real();
      }
      qber += p_r * p_err / (q + 1);
    }
  }
  return qber;
}

}  // namespace oracle

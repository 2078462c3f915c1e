#include "qss/decoder.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qss/errors.hpp"
#include "qss/kernels.hpp"

namespace qss {

namespace {

using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Split {
  Positions players;
  Positions complement;
  std::size_t dim_b = 0;
  std::size_t dim_c = 0;
};

Split split_shares(const Scheme& s, const Positions& players) {
  if (players.empty()) throw Error(ErrorCode::kEmptySubset, "player subset is empty");
  Split out;
  out.players = players;
  std::sort(out.players.begin(), out.players.end());
  if (std::adjacent_find(out.players.begin(), out.players.end()) != out.players.end()) {
    throw Error(ErrorCode::kInvalidPositions, "repeated player");
  }
  for (std::size_t p : out.players) {
    if (!std::binary_search(s.active().begin(), s.active().end(), p)) {
      throw Error(ErrorCode::kInvalidPositions, "share " + std::to_string(p + 1) + " is not an active player");
    }
  }
  const SystemShape shape = s.share_shape();
  out.complement = shape.complement(out.players);
  out.dim_b = shape.dim_of(out.players);
  out.dim_c = shape.dim_of(out.complement);
  return out;
}

/// Reshapes a state on all shares into a (dim_b x dim_c) matrix.
Matrix reshape(const SystemShape& shape, std::span<const cplx> amps, const Split& sp) {
  Positions order = sp.players;
  order.insert(order.end(), sp.complement.begin(), sp.complement.end());
  const std::vector<cplx> permuted = permute_amplitudes(shape, amps, order);
  return Eigen::Map<const RowMajorMatrix>(permuted.data(), static_cast<Eigen::Index>(sp.dim_b),
                                          static_cast<Eigen::Index>(sp.dim_c));
}

std::vector<Matrix> logical_blocks(const Scheme& s, const Split& sp) {
  const SystemShape shape = s.share_shape();
  std::vector<Matrix> m;
  m.reserve(static_cast<std::size_t>(s.kappa()));
  for (int i = 0; i < s.kappa(); ++i) {
    const auto col = s.encoding().col(i);
    m.push_back(reshape(shape, {col.data(), static_cast<std::size_t>(col.size())}, sp));
  }
  return m;
}

Matrix stack(const std::vector<Matrix>& m) {
  const Eigen::Index rows = m.front().rows();
  Matrix a(rows * static_cast<Eigen::Index>(m.size()), m.front().cols());
  for (std::size_t i = 0; i < m.size(); ++i) a.middleRows(static_cast<Eigen::Index>(i) * rows, rows) = m[i];
  return a;
}

Matrix sigma_direct(const std::vector<Matrix>& m) {
  Matrix sigma = Matrix::Zero(m.front().cols(), m.front().cols());
  for (const Matrix& mi : m) sigma.noalias() += mi.adjoint() * mi;
  return sigma / static_cast<double>(m.size());
}

bool use_dual(GramRoute route, std::size_t kappa, std::size_t dim_b, std::size_t dim_c) {
  if (route == GramRoute::kDirect) return false;
  if (route == GramRoute::kDual) return true;
  return kappa * dim_b < dim_c;
}

Matrix psd_sqrt(const Matrix& k) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  // Rounding leaves O(eps * lambda_max) eigenvalues where K is singular; their
  // square roots would be O(1e-8) and swamp the block norms.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(k.rows()) *
                       std::max(es.eigenvalues().maxCoeff(), 0.0);
  const Eigen::VectorXd root =
      es.eigenvalues().unaryExpr([floor](double l) { return l > floor ? std::sqrt(l) : 0.0; });
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

// Residual norm of b after removing its component along a (both unit
// vectors); equals the trace distance of the two pure states.
double pure_distance(const Vector& a, const Vector& b) {
  const cplx overlap = a.dot(b);
  return (b - overlap * a).norm();
}

}  // namespace

ErasureGram erasure_gram(const Scheme& s, const Positions& players, GramRoute route) {
  const Split sp = split_shares(s, players);
  const std::vector<Matrix> m = logical_blocks(s, sp);
  const std::size_t kappa = m.size();
  ErasureGram out;
  out.dim_b = sp.dim_b;
  out.dim_c = sp.dim_c;
  out.via_dual = use_dual(route, kappa, sp.dim_b, sp.dim_c);

  double worst = 0.0;
  if (!out.via_dual) {
    const Matrix sigma = sigma_direct(m);
    for (std::size_t i = 0; i < kappa; ++i) {
      for (std::size_t j = 0; j < kappa; ++j) {
        const Matrix g = m[i].adjoint() * m[j];
        worst = std::max(worst, i == j ? (g - sigma).norm() : g.norm());
      }
    }
    out.sigma = sigma;
  } else {
    // With A the stacked M_i and K = A A^dagger, every block A^dagger D A has
    // the same Frobenius norm as K^{1/2} D K^{1/2}, which lives on the smaller
    // (kappa * dim_b) side.
    const Matrix a = stack(m);
    const Matrix k = a * a.adjoint();
    const Matrix r = psd_sqrt(k);
    const Eigen::Index db = static_cast<Eigen::Index>(sp.dim_b);
    const Matrix k_avg = k / static_cast<double>(kappa);
    for (std::size_t i = 0; i < kappa; ++i) {
      const Eigen::Index bi = static_cast<Eigen::Index>(i) * db;
      for (std::size_t j = 0; j < kappa; ++j) {
        const Eigen::Index bj = static_cast<Eigen::Index>(j) * db;
        const Matrix blk = r.middleCols(bi, db) * r.middleRows(bj, db);
        worst = std::max(worst, i == j ? (blk - k_avg).norm() : blk.norm());
      }
    }
    if (sp.dim_c <= kMaxSigmaDim) out.sigma = sigma_direct(m);
  }
  out.offdiag_norm = worst;
  return out;
}

Decoder synthesize_decoder(const Scheme& s, const Positions& players) {
  const ErasureGram gram = erasure_gram(s, players);
  if (!(gram.offdiag_norm < kAuthorisedGramTol)) {
    std::ostringstream msg;
    msg << "set {" << format_players(players) << "} fails the erasure condition (offdiag_norm = " << gram.offdiag_norm
        << ")";
    throw Error(ErrorCode::kNotAuthorized, msg.str());
  }
  const Split sp = split_shares(s, players);
  const std::vector<Matrix> m = logical_blocks(s, sp);
  const int kappa = s.kappa();

  // Eigenpairs (lambda_k, e_k) of sigma above the rank cutoff, largest first.
  std::vector<double> lambda;
  std::vector<Vector> e;
  if (!gram.via_dual) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(*gram.sigma);
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
      if (es.eigenvalues()[k] <= kDecoderRankCutoff) break;
      lambda.push_back(es.eigenvalues()[k]);
      e.push_back(es.eigenvectors().col(k));
    }
  } else {
    // sigma = A^dagger A / kappa shares its nonzero spectrum with K / kappa.
    const Matrix a = stack(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a * a.adjoint());
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
      const double mu = es.eigenvalues()[k];
      if (mu / kappa <= kDecoderRankCutoff) break;
      lambda.push_back(mu / kappa);
      e.push_back(a.adjoint() * es.eigenvectors().col(k) / std::sqrt(mu));
    }
  }
  const int rank = static_cast<int>(lambda.size());
  if (rank == 0) throw Error(ErrorCode::kInvariantViolation, "sigma has no spectrum above the cutoff");

  Decoder dec;
  dec.players = sp.players;
  dec.complement = sp.complement;
  dec.kappa = kappa;
  dec.dim_b = sp.dim_b;
  dec.dim_c = sp.dim_c;
  dec.rank = rank;
  dec.junk_dim = (sp.dim_b + static_cast<std::size_t>(kappa) - 1) / static_cast<std::size_t>(kappa);
  dec.gram_offdiag_norm = gram.offdiag_norm;

  const Eigen::Index db = static_cast<Eigen::Index>(sp.dim_b);
  Matrix v(db, kappa * rank);
  for (int i = 0; i < kappa; ++i) {
    for (int k = 0; k < rank; ++k) v.col(i * rank + k) = m[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(k)] / std::sqrt(lambda[static_cast<std::size_t>(k)]);
  }
  // Symmetric orthonormalisation removes the residual O(offdiag) overlap while
  // staying closest to the constructed vectors.
  {
    const Matrix gram_v = v.adjoint() * v;
    const double dev = (gram_v - Matrix::Identity(gram_v.rows(), gram_v.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-6) {
      throw Error(ErrorCode::kInvariantViolation, "decoder span vectors are not orthonormal (deviation " + std::to_string(dev) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram_v);
    const Eigen::VectorXd inv_root = es.eigenvalues().cwiseSqrt().cwiseInverse();
    v = v * (es.eigenvectors() * inv_root.asDiagonal() * es.eigenvectors().adjoint());
  }
  dec.span_map = v;

  if (sp.dim_b <= kMaxCompletionDim) {
    // Gram-Schmidt completion over computational basis order.
    const std::size_t n = sp.dim_b;
    std::vector<Vector> basis;
    for (Eigen::Index c = 0; c < v.cols(); ++c) basis.push_back(v.col(c));
    std::vector<Vector> extra;
    const std::size_t need = n - basis.size();
    for (std::size_t j = 0; j < n && extra.size() < need; ++j) {
      Vector u = Vector::Zero(db);
      u[static_cast<Eigen::Index>(j)] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const std::vector<Vector>* set : {&basis, &extra}) {
          for (const Vector& b : *set) {
            const cplx c = kernels::cdot({b.data(), n}, {u.data(), n});
            kernels::caxpy(-c, {b.data(), n}, {u.data(), n});
          }
        }
      }
      const double nrm = std::sqrt(kernels::norm2({u.data(), n}));
      if (nrm > 1e-6) extra.push_back(u / nrm);
    }
    if (extra.size() != need) throw Error(ErrorCode::kInvariantViolation, "orthogonal completion incomplete");

    const Eigen::Index junk = static_cast<Eigen::Index>(dec.junk_dim);
    Matrix w = Matrix::Zero(kappa * junk, db);
    for (int i = 0; i < kappa; ++i) {
      for (int k = 0; k < rank; ++k) w.row(i * junk + k) = v.col(i * rank + k).adjoint();
    }
    std::size_t next = 0;
    for (int i = 0; i < kappa && next < extra.size(); ++i) {
      for (Eigen::Index k = rank; k < junk && next < extra.size(); ++k) w.row(i * junk + k) = extra[next++].adjoint();
    }
    dec.isometry_error = (w.adjoint() * w - Matrix::Identity(db, db)).cwiseAbs().maxCoeff();
    dec.unitary = std::move(w);
  } else {
    dec.isometry_error = (v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  }

  // Junk left by each |i_L>: rows k of block i hold v_{i,k}^dagger M_i.
  const Eigen::Index junk = static_cast<Eigen::Index>(dec.junk_dim);
  const Eigen::Index dc = static_cast<Eigen::Index>(sp.dim_c);
  std::vector<Vector> junk_states;
  for (int i = 0; i < kappa; ++i) {
    const Matrix out = v.middleCols(i * rank, rank).adjoint() * m[static_cast<std::size_t>(i)];
    RowMajorMatrix padded = RowMajorMatrix::Zero(junk, dc);
    padded.topRows(rank) = out;
    Vector flat = Eigen::Map<const Vector>(padded.data(), junk * dc);
    const double leak = 1.0 - flat.squaredNorm();
    if (leak > 1e-9) throw Error(ErrorCode::kInvariantViolation, "decoded logical state leaks out of its block");
    junk_states.push_back(flat.normalized());
  }
  for (std::size_t i = 0; i < junk_states.size(); ++i) {
    for (std::size_t j = i + 1; j < junk_states.size(); ++j) {
      dec.max_junk_distance = std::max(dec.max_junk_distance, pure_distance(junk_states[i], junk_states[j]));
    }
  }
  dec.junk_state = junk_states.front();
  return dec;
}

Matrix decode_secret(const Decoder& dec, const SystemShape& shape, std::span<const cplx> amps) {
  if (shape.size() != dec.players.size() + dec.complement.size() || shape.dim_of(dec.players) != dec.dim_b ||
      shape.dim_of(dec.complement) != dec.dim_c || amps.size() != shape.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "state does not match the decoder's share layout");
  }
  Split sp{dec.players, dec.complement, dec.dim_b, dec.dim_c};
  const Matrix psi = reshape(shape, amps, sp);
  const double in_norm = psi.squaredNorm();
  Matrix out;
  Eigen::Index block = 0;
  if (dec.unitary) {
    out = *dec.unitary * psi;
    block = static_cast<Eigen::Index>(dec.junk_dim);
  } else {
    out = dec.span_map.adjoint() * psi;
    block = dec.rank;
    const double residual = in_norm - out.squaredNorm();
    if (residual > 1e-9 * in_norm) {
      throw Error(ErrorCode::kGuardExceeded,
                  "state leaves the code span and the decoder completion was not materialised (residual " +
                      std::to_string(residual) + ")");
    }
  }
  const int kappa = dec.kappa;
  Matrix rho(kappa, kappa);
  for (int i = 0; i < kappa; ++i) {
    for (int j = 0; j < kappa; ++j) {
      rho(i, j) = (out.middleRows(i * block, block).cwiseProduct(out.middleRows(j * block, block).conjugate())).sum();
    }
  }
  return rho / rho.trace().real();
}

double recovery_fidelity(const Scheme& s, const Decoder& dec, const PureState& secret) {
  if (secret.shape().total_dim() != static_cast<std::size_t>(s.kappa()) || dec.kappa != s.kappa()) {
    throw Error(ErrorCode::kDimensionMismatch, "secret dimension must equal kappa");
  }
  const SystemShape shape = s.share_shape();
  if (dec.players.size() + dec.complement.size() != shape.size() || shape.dim_of(dec.players) != dec.dim_b) {
    throw Error(ErrorCode::kDimensionMismatch, "decoder was built for a different share layout");
  }
  const Vector encoded = s.encoding() * secret.amplitudes();
  const Matrix rho = decode_secret(dec, shape, {encoded.data(), static_cast<std::size_t>(encoded.size())});
  const double f = fidelity(secret.amplitudes(), rho);
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace qss

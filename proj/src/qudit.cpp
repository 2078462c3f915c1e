#include "qss/qudit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qss/errors.hpp"
#include "qss/kernels.hpp"

namespace qss {

namespace {

// Largest density matrix (rows) any operation will materialize.
constexpr std::size_t kMaxDensityDim = 4096;

void check_positions(const SystemShape& shape, std::span<const std::size_t> positions) {
  std::vector<bool> seen(shape.size(), false);
  for (std::size_t p : positions) {
    if (p >= shape.size() || seen[p]) {
      throw Error(ErrorCode::kInvalidPositions,
                  "position " + std::to_string(p) + " invalid or repeated for a " +
                      std::to_string(shape.size()) + "-system shape");
    }
    seen[p] = true;
  }
}

Positions sorted_copy(std::span<const std::size_t> positions) {
  Positions out(positions.begin(), positions.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool lexicographically_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].real() - b[i].real()) > 1e-12) return a[i].real() < b[i].real();
    if (std::abs(a[i].imag() - b[i].imag()) > 1e-12) return a[i].imag() < b[i].imag();
  }
  return false;
}

void fix_phase(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = cplx(v[i].real(), 0.0);
      return;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SystemShape

SystemShape::SystemShape(std::vector<int> dims, std::size_t guard) : dims_(std::move(dims)), guard_(guard) {
  for (int d : dims_) {
    if (d < 2) throw Error(ErrorCode::kInvalidArgument, "local dimension " + std::to_string(d) + " < 2");
    if (total_ > guard_ / static_cast<std::size_t>(d)) {
      throw Error(ErrorCode::kGuardExceeded,
                  "composite dimension exceeds the amplitude guard of " + std::to_string(guard_));
    }
    total_ *= static_cast<std::size_t>(d);
  }
}

std::size_t SystemShape::dim_of(std::span<const std::size_t> positions) const {
  std::size_t d = 1;
  for (std::size_t p : positions) d *= static_cast<std::size_t>(dims_.at(p));
  return d;
}

SystemShape SystemShape::subshape(std::span<const std::size_t> positions) const {
  std::vector<int> d;
  d.reserve(positions.size());
  for (std::size_t p : positions) d.push_back(dims_.at(p));
  return SystemShape(std::move(d), guard_);
}

Positions SystemShape::complement(std::span<const std::size_t> positions) const {
  std::vector<bool> in(size(), false);
  for (std::size_t p : positions) in.at(p) = true;
  Positions out;
  for (std::size_t p = 0; p < size(); ++p) {
    if (!in[p]) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(SystemShape shape, Vector amplitudes) : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != shape_.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "amplitude vector length does not match the shape");
  }
  const double n2 = kernels::norm2(span());
  if (std::abs(n2 - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvariantViolation, "state not normalized (squared norm " + std::to_string(n2) + ")");
  }
}

PureState PureState::normalized(SystemShape shape, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-300) throw Error(ErrorCode::kInvalidArgument, "cannot normalize a zero vector");
  amplitudes /= n;
  return PureState(std::move(shape), std::move(amplitudes));
}

DensityMatrix::DensityMatrix(SystemShape shape, Matrix matrix) : shape_(std::move(shape)), rho_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(shape_.total_dim());
  if (rho_.rows() != d || rho_.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "density matrix size does not match the shape");
  }
  const double scale = std::max(1.0, static_cast<double>(d));
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::kInvariantViolation, "density matrix not Hermitian");
  }
  if (std::abs(rho_.trace() - cplx(1.0, 0.0)) > 1e-12 * scale) {
    throw Error(ErrorCode::kInvariantViolation, "density matrix trace is not 1");
  }
}

DensityMatrix DensityMatrix::checked(SystemShape shape, Matrix matrix) {
  DensityMatrix rho(std::move(shape), std::move(matrix));
  if (rho.min_eigenvalue() < -1e-10) {
    throw Error(ErrorCode::kInvariantViolation, "density matrix is not positive semidefinite");
  }
  return rho;
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
  if (state.shape().total_dim() > kMaxDensityDim) {
    throw Error(ErrorCode::kGuardExceeded, "density matrix dimension above " + std::to_string(kMaxDensityDim));
  }
  return DensityMatrix(state.shape(), state.amplitudes() * state.amplitudes().adjoint());
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Operators and bases

bool is_prime(int q) {
  if (q < 2) return false;
  for (int f = 2; f * f <= q; ++f) {
    if (q % f == 0) return false;
  }
  return true;
}

PauliOps pauli_ops(int q) {
  if (q < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  PauliOps ops{Matrix::Zero(q, q), Matrix::Zero(q, q), std::polar(1.0, 2.0 * kPi / q)};
  for (int i = 0; i < q; ++i) {
    ops.x((i + 1) % q, i) = 1.0;
    ops.z(i, i) = std::polar(1.0, 2.0 * kPi * i / q);
  }
  return ops;
}

Matrix weyl(int q, int a, int b) {
  Matrix m = Matrix::Zero(q, q);
  const int aa = ((a % q) + q) % q;
  const int bb = ((b % q) + q) % q;
  // X^a Z^b |i> = omega^{b i} |i + a>
  for (int i = 0; i < q; ++i) m((i + aa) % q, i) = std::polar(1.0, 2.0 * kPi * ((bb * i) % q) / q);
  return m;
}

std::vector<int> valid_bases(int q) {
  std::vector<int> out;
  if (is_prime(q)) {
    for (int t = 0; t <= q; ++t) out.push_back(t);
  } else {
    out = {0, q};
  }
  return out;
}

OrthonormalBasis mub_basis(int q, int t) {
  if (q < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  if (t < 0 || t > q) throw Error(ErrorCode::kUnsupportedBasis, "basis label out of range");
  OrthonormalBasis basis;
  basis.dim = q;
  basis.label = t;
  if (!is_prime(q)) {
    if (t != 0 && t != q) {
      throw Error(ErrorCode::kUnsupportedBasis, "composite dimension " + std::to_string(q) +
                                                    " supports only t = 0 and t = q");
    }
    basis.warnings.push_back("NonPrimeWarning: dimension " + std::to_string(q) +
                             " is composite; only the Z and X bases are complementary");
  }

  const PauliOps ops = pauli_ops(q);
  Matrix op;
  if (t == q) {
    op = ops.x;
  } else {
    op = ops.z;
    for (int k = 0; k < t; ++k) op = ops.x * op;
  }
  Eigen::ComplexEigenSolver<Matrix> es(op);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kInvariantViolation, "eigensolver failed");

  std::vector<Vector> vecs(q);
  for (int j = 0; j < q; ++j) {
    vecs[j] = es.eigenvectors().col(j).normalized();
    fix_phase(vecs[j]);
  }
  int ref = 0;
  for (int j = 1; j < q; ++j) {
    const double dr = es.eigenvalues()[j].real() - es.eigenvalues()[ref].real();
    if (dr > 1e-9 || (std::abs(dr) <= 1e-9 && lexicographically_less(vecs[j], vecs[ref]))) ref = j;
  }
  const cplx global = es.eigenvalues()[ref];

  basis.vectors.assign(q, Vector());
  std::vector<bool> taken(q, false);
  for (int j = 0; j < q; ++j) {
    double theta = std::arg(es.eigenvalues()[j] / global);
    if (theta < 0) theta += 2.0 * kPi;
    const int label = static_cast<int>(std::lround(theta * q / (2.0 * kPi))) % q;
    if (std::abs(theta - 2.0 * kPi * label / q) > 1e-6 && std::abs(theta - 2.0 * kPi) > 1e-6) {
      throw Error(ErrorCode::kInvariantViolation, "eigenvalue phase is not a multiple of 2pi/q");
    }
    if (taken[label]) throw Error(ErrorCode::kInvariantViolation, "degenerate eigenvalue labels");
    taken[label] = true;
    basis.vectors[label] = vecs[j];
  }
  // Tidy orthonormality (solver output is already orthogonal to ~1e-15).
  for (int i = 0; i < q; ++i) {
    Vector& v = basis.vectors[i];
    for (int j = 0; j < i; ++j) v -= basis.vectors[j].dot(v) * basis.vectors[j];
    v.normalize();
    fix_phase(v);
  }
  return basis;
}

Matrix fourier(int q) {
  if (q < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  Matrix u(q, q);
  const double s = 1.0 / std::sqrt(static_cast<double>(q));
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < q; ++k) u(j, k) = s * std::polar(1.0, 2.0 * kPi * ((j * k) % q) / q);
  }
  return u;
}

PureState max_entangled(int q) {
  if (q < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(q) * q);
  for (int i = 0; i < q; ++i) v[i * q + i] = 1.0 / std::sqrt(static_cast<double>(q));
  return PureState(SystemShape({q, q}), std::move(v));
}

// ---------------------------------------------------------------------------
// Reshaping, partial traces, entropies

namespace {

template <typename T>
std::vector<T> permute_impl(const SystemShape& shape, std::span<const T> src_vals, std::span<const std::size_t> order) {
  const std::size_t m = shape.size();
  std::vector<std::size_t> stride(m, 1);
  for (std::size_t p = m; p-- > 1;) stride[p - 1] = stride[p] * static_cast<std::size_t>(shape.dim(p));

  std::vector<T> out(src_vals.size());
  if (std::is_sorted(order.begin(), order.end())) {
    std::copy(src_vals.begin(), src_vals.end(), out.begin());
    return out;
  }
  std::vector<int> digit(m, 0);
  std::size_t src = 0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = src_vals[src];
    // Odometer over the new order, last position fastest.
    for (std::size_t k = m; k-- > 0;) {
      const std::size_t p = order[k];
      if (++digit[k] < shape.dim(p)) {
        src += stride[p];
        break;
      }
      src -= stride[p] * static_cast<std::size_t>(digit[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

// out[j] = original composite index of new index j.
std::vector<std::size_t> permuted_index_map(const SystemShape& shape, std::span<const std::size_t> order) {
  std::vector<std::size_t> ids(shape.total_dim());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  return permute_impl<std::size_t>(shape, ids, order);
}

}  // namespace

std::vector<cplx> permute_amplitudes(const SystemShape& shape, std::span<const cplx> amps,
                                     std::span<const std::size_t> order) {
  if (order.size() != shape.size()) throw Error(ErrorCode::kInvalidPositions, "order must list every position");
  check_positions(shape, order);
  if (amps.size() != shape.total_dim()) throw Error(ErrorCode::kDimensionMismatch, "amplitude length mismatch");
  return permute_impl<cplx>(shape, amps, order);
}

DensityMatrix partial_trace(const PureState& state, std::span<const std::size_t> keep) {
  if (keep.empty()) throw Error(ErrorCode::kEmptySubset, "partial trace must keep at least one system");
  check_positions(state.shape(), keep);
  const Positions kept = sorted_copy(keep);
  const Positions rest = state.shape().complement(kept);
  const std::size_t dk = state.shape().dim_of(kept);
  if (dk > kMaxDensityDim) {
    throw Error(ErrorCode::kGuardExceeded, "reduced density matrix dimension above " + std::to_string(kMaxDensityDim));
  }
  Positions order = kept;
  order.insert(order.end(), rest.begin(), rest.end());
  const std::vector<cplx> buf = permute_amplitudes(state.shape(), state.span(), order);
  const std::size_t dr = state.shape().total_dim() / dk;

  Matrix rho(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  std::vector<cplx> gram(dk * dk);
  kernels::row_gram(buf, dk, dr, gram);
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) rho(a, b) = gram[a * dk + b];
  }
  return DensityMatrix(state.shape().subshape(kept), std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& state, std::span<const std::size_t> keep) {
  if (keep.empty()) throw Error(ErrorCode::kEmptySubset, "partial trace must keep at least one system");
  check_positions(state.shape(), keep);
  const Positions kept = sorted_copy(keep);
  const Positions rest = state.shape().complement(kept);
  Positions order = kept;
  order.insert(order.end(), rest.begin(), rest.end());

  const std::size_t total = state.shape().total_dim();
  const std::size_t dk = state.shape().dim_of(kept);
  const std::size_t dr = total / dk;
  const std::vector<std::size_t> idx = permuted_index_map(state.shape(), order);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const Matrix& rho = state.matrix();
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      cplx s = 0.0;
      for (std::size_t c = 0; c < dr; ++c) {
        const auto ra = static_cast<Eigen::Index>(idx[a * dr + c]);
        const auto rb = static_cast<Eigen::Index>(idx[b * dr + c]);
        s += rho(ra, rb);
      }
      out(a, b) = s;
    }
  }
  return DensityMatrix(state.shape().subshape(kept), std::move(out));
}

double entropy_bits(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (l > kEigenClamp) s -= l * std::log2(l);
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_bits(rho.matrix()); }

double reduced_entropy(const SystemShape& shape, std::span<const cplx> amps, std::span<const std::size_t> keep) {
  check_positions(shape, keep);
  if (keep.empty() || keep.size() == shape.size()) return 0.0;
  Positions a = sorted_copy(keep);
  Positions b = shape.complement(a);
  if (shape.dim_of(b) < shape.dim_of(a)) std::swap(a, b);
  const std::size_t rows = shape.dim_of(a);
  const std::size_t cols = shape.total_dim() / rows;
  Positions order = a;
  order.insert(order.end(), b.begin(), b.end());
  const std::vector<cplx> buf = permute_amplitudes(shape, amps, order);
  std::vector<cplx> gram(rows * rows);
  kernels::row_gram(buf, rows, cols, gram);
  Matrix rho = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      gram.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  return entropy_bits(rho);
}

double reduced_entropy(const PureState& state, std::span<const std::size_t> keep) {
  return reduced_entropy(state.shape(), state.span(), keep);
}

void apply_local(const SystemShape& shape, std::span<cplx> amps, std::size_t pos, const Matrix& op) {
  const int q = shape.dim(pos);
  if (op.rows() != q || op.cols() != q) throw Error(ErrorCode::kDimensionMismatch, "local operator size mismatch");
  std::size_t inner = 1;
  for (std::size_t p = pos + 1; p < shape.size(); ++p) inner *= static_cast<std::size_t>(shape.dim(p));
  const std::size_t block = inner * static_cast<std::size_t>(q);
  const std::size_t outer = shape.total_dim() / block;
  Vector in(q);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < inner; ++s) {
      cplx* base = amps.data() + o * block + s;
      for (int d = 0; d < q; ++d) in[d] = base[d * inner];
      const Vector res = op * in;
      for (int d = 0; d < q; ++d) base[d * inner] = res[d];
    }
  }
}

std::vector<double> local_probabilities(const SystemShape& shape, std::span<const cplx> amps, std::size_t pos) {
  const int q = shape.dim(pos);
  std::size_t inner = 1;
  for (std::size_t p = pos + 1; p < shape.size(); ++p) inner *= static_cast<std::size_t>(shape.dim(p));
  std::vector<double> prob(q, 0.0);
  for (std::size_t i = 0; i < amps.size(); ++i) prob[(i / inner) % q] += std::norm(amps[i]);
  return prob;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const Vector& psi, const Matrix& rho) { return (psi.adjoint() * rho * psi)(0, 0).real(); }

}  // namespace qss

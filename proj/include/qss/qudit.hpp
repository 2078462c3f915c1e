#pragma once
// Dense linear algebra over composite qudit systems.
//
// Index convention: a composite basis index is mixed-radix over the local
// dimensions with position 0 the slowest-varying digit.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qss {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Positions = std::vector<std::size_t>;

inline constexpr double kPi = 3.14159265358979323846;
/// Eigenvalues below this are treated as exact zeros in entropies.
inline constexpr double kEigenClamp = 1e-12;

class SystemShape {
 public:
  static constexpr std::size_t kDefaultGuard = std::size_t{1} << 20;

  explicit SystemShape(std::vector<int> dims, std::size_t guard = kDefaultGuard);

  const std::vector<int>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return dims_.size(); }
  int dim(std::size_t pos) const { return dims_.at(pos); }
  std::size_t total_dim() const noexcept { return total_; }
  std::size_t guard() const noexcept { return guard_; }

  /// Product of the local dimensions at `positions`.
  std::size_t dim_of(std::span<const std::size_t> positions) const;
  SystemShape subshape(std::span<const std::size_t> positions) const;
  /// Positions 0..size()-1 not in `positions`, ascending.
  Positions complement(std::span<const std::size_t> positions) const;

  bool operator==(const SystemShape& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::size_t total_ = 1;
  std::size_t guard_;
};

class PureState {
 public:
  /// Requires squared norm 1 within 1e-12.
  PureState(SystemShape shape, Vector amplitudes);
  /// Rescales `amplitudes` to unit norm (throws on a zero vector).
  static PureState normalized(SystemShape shape, Vector amplitudes);

  const SystemShape& shape() const noexcept { return shape_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  std::span<const cplx> span() const { return {amps_.data(), static_cast<std::size_t>(amps_.size())}; }

 private:
  SystemShape shape_;
  Vector amps_;
};

class DensityMatrix {
 public:
  /// Checks Hermiticity and unit trace within 1e-12 (scaled by dimension).
  DensityMatrix(SystemShape shape, Matrix matrix);
  /// As above plus a positive-semidefiniteness check (min eigenvalue >= -1e-10).
  static DensityMatrix checked(SystemShape shape, Matrix matrix);
  static DensityMatrix from_pure(const PureState& state);

  const SystemShape& shape() const noexcept { return shape_; }
  const Matrix& matrix() const noexcept { return rho_; }
  double min_eigenvalue() const;

 private:
  SystemShape shape_;
  Matrix rho_;
};

struct OrthonormalBasis {
  int dim = 0;
  int label = 0;                // t
  std::vector<Vector> vectors;  // vectors[i] is |i(t)>
  std::vector<std::string> warnings;
};

struct PauliOps {
  Matrix x;
  Matrix z;
  cplx omega;
};

bool is_prime(int q);

PauliOps pauli_ops(int q);
/// X^a Z^b.
Matrix weyl(int q, int a, int b);

/// Basis labels t that mub_basis accepts for dimension q: {0..q} for prime q,
/// {0, q} otherwise.
std::vector<int> valid_bases(int q);

/// Eigenbasis of X^t Z (t < q) or X (t = q). Labels follow the fixed
/// convention: eigenvalues are divided by the eigenvalue of largest real part
/// (ties resolved by the lexicographically smaller eigenvector) and vector i
/// has relative phase 2*pi*i/q. Each vector's first non-negligible component
/// is made real positive.
OrthonormalBasis mub_basis(int q, int t);

/// U_{jk} = omega^{jk} / sqrt(q).
Matrix fourier(int q);

/// (1/sqrt(q)) sum_i |ii>.
PureState max_entangled(int q);

/// Reorders the composite index so that `order` (a permutation of all
/// positions) becomes the new position order. Result is row-major over the
/// new order, position order[0] slowest.
std::vector<cplx> permute_amplitudes(const SystemShape& shape, std::span<const cplx> amps,
                                     std::span<const std::size_t> order);

DensityMatrix partial_trace(const PureState& state, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& state, std::span<const std::size_t> keep);

/// Entropy (bits) of a Hermitian PSD matrix's spectrum, clamped at kEigenClamp.
double entropy_bits(const Matrix& rho);
double von_neumann_entropy(const DensityMatrix& rho);

/// S of the reduced state on `keep` of a pure state, evaluated on whichever
/// side of the bipartition is smaller (the nonzero spectra coincide).
/// `keep` may be empty or everything, both giving 0.
double reduced_entropy(const SystemShape& shape, std::span<const cplx> amps,
                       std::span<const std::size_t> keep);
double reduced_entropy(const PureState& state, std::span<const std::size_t> keep);

/// Applies a single-system operator at `pos` in place.
void apply_local(const SystemShape& shape, std::span<cplx> amps, std::size_t pos, const Matrix& op);
/// Born probabilities of a computational-basis measurement of `pos`.
std::vector<double> local_probabilities(const SystemShape& shape, std::span<const cplx> amps,
                                        std::size_t pos);

double trace_distance(const Matrix& a, const Matrix& b);
/// <psi| rho |psi>.
double fidelity(const Vector& psi, const Matrix& rho);

}  // namespace qss

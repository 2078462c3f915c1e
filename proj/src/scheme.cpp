#include "qss/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qss/errors.hpp"

namespace qss {

namespace {

std::size_t checked_pow(int base, int exp) {
  // SystemShape enforces the amplitude guard.
  return SystemShape(std::vector<int>(static_cast<std::size_t>(exp), base)).total_dim();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

Matrix pauli_string(const std::string& word) {
  const PauliOps p = pauli_ops(2);
  Matrix y = cplx(0.0, 1.0) * p.x * p.z;
  Matrix out = Matrix::Identity(1, 1);
  for (char c : word) {
    switch (c) {
      case 'I': out = kron(out, Matrix::Identity(2, 2)); break;
      case 'X': out = kron(out, p.x); break;
      case 'Z': out = kron(out, p.z); break;
      case 'Y': out = kron(out, y); break;
      default: throw Error(ErrorCode::kInvalidArgument, "bad Pauli letter");
    }
  }
  return out;
}

}  // namespace

Scheme::Scheme(std::string name, int q, int kappa, int n_total, Matrix encoding, Positions discarded,
               std::optional<RampParams> claimed, Construction construction)
    : name_(std::move(name)),
      q_(q),
      kappa_(kappa),
      n_total_(n_total),
      encoding_(std::move(encoding)),
      discarded_(std::move(discarded)),
      claimed_(claimed),
      construction_(construction) {
  if (q_ < 2) throw Error(ErrorCode::kInvalidArgument, "share dimension must be >= 2");
  if (kappa_ < 2) throw Error(ErrorCode::kInvalidArgument, "secret dimension must be >= 2");
  if (n_total_ < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one share");
  const std::size_t rows = checked_pow(q_, n_total_);
  if (static_cast<std::size_t>(kappa_) > rows) {
    throw Error(ErrorCode::kInvariantViolation, "kappa exceeds the share space dimension");
  }
  if (static_cast<std::size_t>(encoding_.rows()) != rows || encoding_.cols() != kappa_) {
    throw Error(ErrorCode::kDimensionMismatch, "encoding must be q^n x kappa");
  }
  const double err = (encoding_.adjoint() * encoding_ - Matrix::Identity(kappa_, kappa_)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw Error(ErrorCode::kInvariantViolation,
                "logical basis is not orthonormal (max deviation " + std::to_string(err) + ")");
  }
  std::sort(discarded_.begin(), discarded_.end());
  if (std::adjacent_find(discarded_.begin(), discarded_.end()) != discarded_.end()) {
    throw Error(ErrorCode::kInvalidPositions, "discarded positions repeated");
  }
  for (std::size_t p : discarded_) {
    if (p >= static_cast<std::size_t>(n_total_)) throw Error(ErrorCode::kInvalidPositions, "discarded position out of range");
  }
  active_ = share_shape().complement(discarded_);
  if (active_.empty()) throw Error(ErrorCode::kInvalidPositions, "no active players remain");
}

SystemShape Scheme::share_shape() const { return SystemShape(std::vector<int>(static_cast<std::size_t>(n_total_), q_)); }

PureState Scheme::logical(int i) const {
  if (i < 0 || i >= kappa_) throw Error(ErrorCode::kInvalidArgument, "logical index out of range");
  return PureState::normalized(share_shape(), encoding_.col(i));
}

// ---------------------------------------------------------------------------
// Builders

Scheme ghz_scheme(int n, int q) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "GHZ scheme needs n >= 2");
  if (q < 2) throw Error(ErrorCode::kInvalidArgument, "GHZ scheme needs q >= 2");
  const std::size_t dim = checked_pow(q, n);
  Matrix enc = Matrix::Zero(static_cast<Eigen::Index>(dim), q);
  // |i...i> has index i * (q^{n-1} + ... + 1)
  const std::size_t rep = (dim - 1) / static_cast<std::size_t>(q - 1);
  for (int i = 0; i < q; ++i) enc(static_cast<Eigen::Index>(rep * i), i) = 1.0;
  return Scheme("ghz_n" + std::to_string(n) + "_q" + std::to_string(q), q, q, n, std::move(enc), {},
                RampParams{n, 0, n}, Construction{Construction::Kind::kGhz, 0});
}

Scheme cgl_qutrit_23() {
  Matrix enc = Matrix::Zero(27, 3);
  const double s = 1.0 / std::sqrt(3.0);
  // |i_L> = sum_j |j, j+i, j+2i> (mod 3)
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int a = j, b = (j + i) % 3, c = (j + 2 * i) % 3;
      enc(a * 9 + b * 3 + c, i) = s;
    }
  }
  return Scheme("cgl23", 3, 3, 3, std::move(enc), {}, RampParams{2, 1, 3},
                Construction{Construction::Kind::kCgl23, 0});
}

Scheme five_qubit_35() {
  const char* gens[] = {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
  Matrix proj = Matrix::Identity(32, 32);
  for (const char* g : gens) proj = proj * (Matrix::Identity(32, 32) + pauli_string(g)) * 0.5;
  Vector zero = proj.col(0);  // P |00000>
  zero.normalize();
  const Vector one = pauli_string("XXXXX") * zero;
  Matrix enc(32, 2);
  enc.col(0) = zero;
  enc.col(1) = one;
  return Scheme("five_qubit", 2, 2, 5, std::move(enc), {}, RampParams{3, 2, 5},
                Construction{Construction::Kind::kFiveQubit, 0});
}

Scheme reed_solomon_threshold(int k, int q) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "threshold must be >= 1");
  if (!is_prime(q)) throw Error(ErrorCode::kNotPrime, "field size " + std::to_string(q) + " is not prime");
  const int n = 2 * k - 1;
  if (q <= n) {
    throw Error(ErrorCode::kFieldTooSmall,
                "need q > n = " + std::to_string(n) + " distinct evaluation points, got q = " + std::to_string(q));
  }
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "threshold k = 1 gives a single share");
  const std::size_t dim = checked_pow(q, n);
  Matrix enc = Matrix::Zero(static_cast<Eigen::Index>(dim), q);
  const double amp = std::pow(static_cast<double>(q), -(k - 1) / 2.0);
  std::size_t num_poly = 1;
  for (int i = 1; i < k; ++i) num_poly *= static_cast<std::size_t>(q);
  std::vector<int> coeff(static_cast<std::size_t>(k), 0);
  for (int s = 0; s < q; ++s) {
    for (std::size_t p = 0; p < num_poly; ++p) {
      coeff[0] = s;
      std::size_t rem = p;
      for (int c = 1; c < k; ++c) {
        coeff[c] = static_cast<int>(rem % q);
        rem /= q;
      }
      std::size_t index = 0;
      for (int x = 1; x <= n; ++x) {
        long long v = 0;
        for (int c = k - 1; c >= 0; --c) v = (v * x + coeff[c]) % q;  // Horner
        index = index * q + static_cast<std::size_t>(v);
      }
      enc(static_cast<Eigen::Index>(index), s) += amp;
    }
  }
  return Scheme("rs_k" + std::to_string(k) + "_q" + std::to_string(q), q, q, n, std::move(enc), {},
                RampParams{k, k - 1, n}, Construction{Construction::Kind::kReedSolomon, k});
}

Scheme discard_shares(const Scheme& s, const Positions& drop) {
  if (drop.empty()) return s;
  Positions all = s.discarded();
  for (std::size_t p : drop) {
    if (p >= static_cast<std::size_t>(s.n_total())) throw Error(ErrorCode::kInvalidPositions, "share position out of range");
    if (std::find(all.begin(), all.end(), p) != all.end()) {
      throw Error(ErrorCode::kInvalidPositions, "share " + std::to_string(p + 1) + " already discarded");
    }
    all.push_back(p);
  }
  if (all.size() >= static_cast<std::size_t>(s.n_total())) {
    throw Error(ErrorCode::kInvalidPositions, "discarding would leave no active player");
  }
  std::optional<RampParams> claimed;
  const int n_active = s.n_total() - static_cast<int>(all.size());
  if (s.claimed_ramp()) claimed = RampParams{s.claimed_ramp()->k, std::nullopt, n_active};
  Positions sorted_drop = drop;
  std::sort(sorted_drop.begin(), sorted_drop.end());
  std::string name = s.name() + "_minus";
  for (std::size_t p : sorted_drop) name += "_" + std::to_string(p + 1);
  return Scheme(name, s.q(), s.kappa(), s.n_total(), s.encoding(), std::move(all), claimed, s.construction());
}

std::vector<Scheme> bundled_schemes() {
  std::vector<Scheme> out;
  for (int n : {2, 3, 4}) {
    for (int q : {2, 3}) out.push_back(ghz_scheme(n, q));
  }
  out.push_back(cgl_qutrit_23());
  out.push_back(five_qubit_35());
  out.push_back(reed_solomon_threshold(2, 5));
  out.push_back(reed_solomon_threshold(3, 7));
  out.push_back(discard_shares(five_qubit_35(), {4}));
  return out;
}

// ---------------------------------------------------------------------------
// Channel state and logical bases

DensityMatrix ChannelState::reduced() const {
  Positions keep{0};
  keep.insert(keep.end(), active_positions.begin(), active_positions.end());
  return partial_trace(purified, keep);
}

ChannelState channel_state(const Scheme& s) {
  std::vector<int> dims{s.kappa()};
  dims.insert(dims.end(), static_cast<std::size_t>(s.n_total()), s.q());
  SystemShape shape(std::move(dims));
  const Eigen::Index d = s.encoding().rows();
  Vector amps(static_cast<Eigen::Index>(shape.total_dim()));
  const double norm = 1.0 / std::sqrt(static_cast<double>(s.kappa()));
  for (int i = 0; i < s.kappa(); ++i) amps.segment(i * d, d) = norm * s.encoding().col(i);
  ChannelState cs{PureState::normalized(std::move(shape), std::move(amps)), {}, s.is_pure()};
  for (std::size_t p : s.active()) cs.active_positions.push_back(p + 1);
  return cs;
}

std::vector<int> scheme_bases(const Scheme& s) {
  if (!s.is_ideal()) return {0};
  return valid_bases(s.q());
}

PureState logical_basis_state(const Scheme& s, int t, int i) {
  if (!s.is_ideal() && t != 0) {
    throw Error(ErrorCode::kNonIdealScheme, "bases other than t = 0 need kappa = q");
  }
  const OrthonormalBasis basis = mub_basis(s.kappa(), t);
  if (i < 0 || i >= s.kappa()) throw Error(ErrorCode::kInvalidArgument, "outcome out of range");
  return PureState::normalized(s.share_shape(), s.encoding() * basis.vectors[i].conjugate());
}

DensityMatrix logical_basis_density(const Scheme& s, int t, int i) {
  return partial_trace(logical_basis_state(s, t, i), s.active());
}

std::string format_players(const Positions& positions) {
  std::ostringstream os;
  for (std::size_t j = 0; j < positions.size(); ++j) os << (j ? "," : "") << positions[j] + 1;
  return os.str();
}

}  // namespace qss

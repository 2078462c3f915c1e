#pragma once
// Recovery isometries for authorised sets, built from the erasure condition.
//
// Each logical state |i_L> is reshaped into a matrix M_i whose rows index the
// shares of B and whose columns index everything else (including discarded
// shares of a mixed scheme). B can recover the secret iff
// M_i^dagger M_j = delta_ij sigma for one fixed sigma.

#include <optional>
#include <span>
#include <vector>

#include "qss/scheme.hpp"

namespace qss {

inline constexpr double kAuthorisedGramTol = 1e-8;
inline constexpr double kDecoderRankCutoff = 1e-10;
/// Above this B-side dimension the orthogonal completion of W is not built.
inline constexpr std::size_t kMaxCompletionDim = 1024;
/// sigma is only materialised up to this complement dimension.
inline constexpr std::size_t kMaxSigmaDim = 2048;

enum class GramRoute { kAuto, kDirect, kDual };

struct ErasureGram {
  std::optional<Matrix> sigma;  // on the complement; absent when too large
  double offdiag_norm = 0.0;
  bool via_dual = false;
  std::size_t dim_b = 0;
  std::size_t dim_c = 0;
};

/// `players` are 0-based share positions.
ErasureGram erasure_gram(const Scheme& s, const Positions& players, GramRoute route = GramRoute::kAuto);

struct Decoder {
  Positions players;     // B, ascending
  Positions complement;  // every other share position, ascending
  int kappa = 0;
  std::size_t dim_b = 0;
  std::size_t dim_c = 0;
  int rank = 0;
  std::size_t junk_dim = 0;
  /// Columns v_{i,k}, ordered i * rank + k.
  Matrix span_map;
  /// Full isometry W: (kappa * junk_dim) x dim_b, rows ordered i * junk_dim + k.
  std::optional<Matrix> unitary;
  /// Junk register (junk_dim) followed by the complement, for input |0_L>.
  Vector junk_state;
  double max_junk_distance = 0.0;
  double isometry_error = 0.0;
  double gram_offdiag_norm = 0.0;
};

/// Throws NotAuthorized when the erasure condition fails.
Decoder synthesize_decoder(const Scheme& s, const Positions& players);

/// Applies the decoder to the B part of a state on all n_total shares of the
/// given shape and returns the density matrix of b'. Without a stored
/// completion, states leaving the code span raise GuardExceeded.
Matrix decode_secret(const Decoder& dec, const SystemShape& shape, std::span<const cplx> amps);

/// Encodes `secret` with `s`, decodes with `dec`, and returns <secret|rho_b'|secret>.
double recovery_fidelity(const Scheme& s, const Decoder& dec, const PureState& secret);

}  // namespace qss

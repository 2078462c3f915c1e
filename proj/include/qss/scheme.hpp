#pragma once
// Secret-sharing schemes as encoding isometries, plus the channel state.

#include <optional>
#include <string>
#include <vector>

#include "qss/qudit.hpp"

namespace qss {

/// (k, k', n). k' is unknown for schemes derived by discarding shares until
/// analysed.
struct RampParams {
  int k = 0;
  std::optional<int> k_prime;
  int n = 0;
  bool operator==(const RampParams&) const = default;
};

/// How a scheme was produced; drives the compact file form.
struct Construction {
  enum class Kind { kExplicit, kGhz, kCgl23, kFiveQubit, kReedSolomon };
  Kind kind = Kind::kExplicit;
  int k = 0;  // Reed-Solomon threshold
};

/// Encoding isometry from a kappa-dimensional secret onto n_total shares of
/// dimension q. Column i of the encoding is |i_L>. Mixed schemes keep the
/// purification and list the traced-out share positions (0-based).
class Scheme {
 public:
  Scheme(std::string name, int q, int kappa, int n_total, Matrix encoding, Positions discarded = {},
         std::optional<RampParams> claimed = std::nullopt, Construction construction = {});

  const std::string& name() const noexcept { return name_; }
  int q() const noexcept { return q_; }
  int kappa() const noexcept { return kappa_; }
  int n_total() const noexcept { return n_total_; }
  const Matrix& encoding() const noexcept { return encoding_; }
  const Positions& discarded() const noexcept { return discarded_; }
  const std::optional<RampParams>& claimed_ramp() const noexcept { return claimed_; }
  const Construction& construction() const noexcept { return construction_; }

  /// Share positions not discarded, ascending.
  const Positions& active() const noexcept { return active_; }
  int num_active() const noexcept { return static_cast<int>(active_.size()); }
  bool is_pure() const noexcept { return discarded_.empty(); }
  bool is_ideal() const noexcept { return kappa_ == q_; }
  /// Shape of all n_total shares.
  SystemShape share_shape() const;
  /// |i_L> as a state on all n_total shares.
  PureState logical(int i) const;

 private:
  std::string name_;
  int q_;
  int kappa_;
  int n_total_;
  Matrix encoding_;
  Positions discarded_;
  Positions active_;
  std::optional<RampParams> claimed_;
  Construction construction_;
};

Scheme ghz_scheme(int n, int q);
/// (2,3) qutrit threshold scheme.
Scheme cgl_qutrit_23();
/// ((5,2,3))_2 perfect code (cyclic stabilizer XZZXI), logical Z = Z^{x5}.
Scheme five_qubit_35();
/// Quantum polynomial code over GF(q), n = 2k-1, evaluation points x_i = i.
Scheme reed_solomon_threshold(int k, int q);
/// Traces out further shares; positions are 0-based share indices.
Scheme discard_shares(const Scheme& s, const Positions& drop);

/// Every bundled scheme used by the test and acceptance suites.
std::vector<Scheme> bundled_schemes();

/// (1/sqrt(kappa)) sum_i |i>_d |i_L>, stored as the purification on
/// (d, all n_total shares). For a mixed scheme the channel state proper is the
/// reduction onto (d, active players).
struct ChannelState {
  PureState purified;
  /// Positions of the active players inside `purified` (dealer is 0).
  Positions active_positions;
  bool is_pure = true;

  /// Density matrix on (d, active) with the discarded shares traced out.
  DensityMatrix reduced() const;
};

ChannelState channel_state(const Scheme& s);

/// Player state after the dealer projects d onto |i(t)>: the encoding of
/// conj(|i(t)>), on all n_total shares (the purification for mixed schemes).
PureState logical_basis_state(const Scheme& s, int t, int i);
/// Same state with discarded shares traced out (active players only).
DensityMatrix logical_basis_density(const Scheme& s, int t, int i);
/// Dealer bases available for this scheme: valid_bases(q) for ideal schemes,
/// {0} otherwise.
std::vector<int> scheme_bases(const Scheme& s);

/// 1-based, comma separated, for messages and reports.
std::string format_players(const Positions& positions);

}  // namespace qss

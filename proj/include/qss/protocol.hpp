#pragma once
// QQ (teleportation into the code) and RCQ (key distribution over the channel
// state) protocol runs, with optional single-site noise.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qss/decoder.hpp"
#include "qss/rng.hpp"
#include "qss/scheme.hpp"

namespace qss {

// ---------------------------------------------------------------------------
// Noise

struct NoiseModel {
  enum class Kind { kNone, kDepolarizing, kErasure, kInterceptResend };
  enum class Target { kShare, kDealer, kDecoded };

  Kind kind = Kind::kNone;
  Target target = Target::kShare;
  std::size_t share = 0;  // 0-based, for Target::kShare
  double p = 0.0;
  /// Basis Eve measures in; nullopt draws it uniformly per round.
  std::optional<int> eve_basis;
  /// Intercept probability (1 unless given as intercept:S:t:p).
  double intercept_p = 1.0;

  bool active() const noexcept { return kind != Kind::kNone; }
};

/// none | depolarizing:S:p | erasure:S:p | intercept:S:t[:p] | intercept:S:random[:p]
/// where S is a 1-based share label, `d` for the dealer's system, or `out`
/// for the decoded secret system.
NoiseModel parse_noise(const std::string& text);
std::string to_string(const NoiseModel& noise);

// ---------------------------------------------------------------------------
// QQ

struct TeleportResult {
  PureState players;  // after correction, on all n_total shares
  int a = 0;
  int b = 0;
  /// Born probabilities of the q^2 Bell outcomes, index a * q + b.
  std::vector<double> probabilities;
};

/// Bell-measures (secret, d) of secret x channel state and applies the logical
/// correction for the observed outcome.
TeleportResult teleport_encode(const Scheme& s, const PureState& secret, CounterRng& rng);

struct QqResult {
  Matrix recovered;  // density matrix of b'
  double fidelity = 0.0;
  int a = 0;
  int b = 0;
};

QqResult qq_run(const Scheme& s, const Decoder& dec, const PureState& secret, CounterRng& rng);
/// Synthesizes the decoder for `players` first (NotAuthorized if impossible).
QqResult qq_run(const Scheme& s, const Positions& players, const PureState& secret, CounterRng& rng);

/// Haar-random secret of dimension q.
PureState random_secret(int q, CounterRng& rng);

struct QqBatch {
  std::string scheme_name;
  Positions players;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double min_fidelity = 1.0;
  double mean_fidelity = 1.0;
  /// Bell outcome histogram, index a * q + b.
  std::vector<std::uint64_t> outcome_counts;
};

/// Trial i draws its secret and Bell outcome from CounterRng(seed, i).
QqBatch qq_batch(const Scheme& s, const Positions& players, std::uint64_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// RCQ

struct RoundRecord {
  std::uint64_t index = 0;
  int t = 0;
  int r = 0;
  int t_prime = 0;
  int s = 0;
  bool sifted = false;
  /// Sifted round sacrificed for error estimation.
  bool test = false;
};

struct SessionConfig {
  std::uint64_t m = 10000;
  std::uint64_t seed = 0;
  NoiseModel noise;
  double abort_qber = 0.11;
  double test_fraction = 0.5;
  double pa_output_rate = 0.5;

  void validate() const;
};

struct SessionTranscript {
  std::string scheme_name;
  Positions players;
  int q = 0;
  SessionConfig config;
  std::vector<RoundRecord> rounds;
  std::vector<int> sifted_key_dealer;
  std::vector<int> sifted_key_players;
  std::uint64_t sift_count = 0;
  std::uint64_t test_count = 0;
  std::uint64_t test_errors = 0;
  double qber_estimate = 0.0;
  double qber_stderr = 0.0;
  bool aborted = false;
  std::string abort_reason;
  /// Sifted, non-test digits.
  std::vector<int> raw_key_dealer;
  std::vector<int> raw_key_players;
  double raw_key_disagreement = 0.0;
  std::vector<int> final_key;  // dealer side, empty if aborted
  std::vector<int> final_key_players;
  bool final_keys_match = false;
};

/// Everything an RCQ round needs that does not depend on the round.
class RcqContext {
 public:
  RcqContext(const Scheme& s, const Positions& players);
  RcqContext(const Scheme& s, Decoder dec);

  const Scheme& scheme() const noexcept { return scheme_; }
  const Decoder& decoder() const noexcept { return dec_; }
  const std::vector<int>& bases() const noexcept { return bases_; }
  /// Born distribution of the dealer's outcomes in basis t (from rho_d).
  const std::vector<double>& dealer_distribution(int t) const;

  RoundRecord round(std::uint64_t index, CounterRng& rng, const NoiseModel& noise) const;

 private:
  void init();
  std::size_t basis_slot(int t) const;
  Matrix decoded_after_noise(PureState players, const NoiseModel& noise, CounterRng& rng) const;

  Scheme scheme_;
  Decoder dec_;
  std::vector<int> bases_;
  std::vector<OrthonormalBasis> mub_;
  std::vector<std::vector<double>> dealer_probs_;
  // decoded_[slot][r]: density matrix of b' for the noiseless player state
  std::vector<std::vector<Matrix>> decoded_;
};

RoundRecord rcq_round(const RcqContext& ctx, std::uint64_t index, CounterRng& rng, const NoiseModel& noise);
SessionTranscript rcq_session(const RcqContext& ctx, const SessionConfig& config);
SessionTranscript rcq_session(const Scheme& s, const Positions& players, const SessionConfig& config);

/// Toeplitz hash over Z_q: out[r] = sum_c T[r][c] key[c] mod q with
/// T[r][c] = g[r - c + len - 1] and g drawn from the seed.
std::vector<int> privacy_amplification(const std::vector<int>& key, std::size_t out_len, std::uint64_t seed, int q);

/// "# round t r t' s sifted" header, one line per round, then a summary block.
std::string round_log(const SessionTranscript& tr);

}  // namespace qss

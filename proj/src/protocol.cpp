#include "qss/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qss/errors.hpp"

namespace qss {

namespace {

double parse_prob(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad probability '" + s + "'");
  }
  if (used != s.size() || !(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "probability must lie in [0, 1], got '" + s + "'");
  }
  return v;
}

int parse_nonneg_int(const std::string& s, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 6) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad ") + what + " '" + s + "'");
  }
  return std::stoi(s);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix basis_matrix(const OrthonormalBasis& b) {
  Matrix v(b.dim, b.dim);
  for (int i = 0; i < b.dim; ++i) v.col(i) = b.vectors[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Noise

NoiseModel parse_noise(const std::string& text) {
  NoiseModel n;
  if (text.empty() || text == "none") return n;
  std::vector<std::string> parts;
  {
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ':')) parts.push_back(tok);
  }
  const std::string& kind = parts[0];
  if (kind == "depolarizing" || kind == "depolarising") {
    n.kind = NoiseModel::Kind::kDepolarizing;
  } else if (kind == "erasure") {
    n.kind = NoiseModel::Kind::kErasure;
  } else if (kind == "intercept") {
    n.kind = NoiseModel::Kind::kInterceptResend;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown noise kind '" + kind + "'");
  }
  const bool intercept = n.kind == NoiseModel::Kind::kInterceptResend;
  if (parts.size() < 3 || parts.size() > (intercept ? 4U : 3U)) {
    throw Error(ErrorCode::kInvalidArgument, "malformed noise spec '" + text + "'");
  }
  const std::string& site = parts[1];
  if (site == "d") {
    n.target = NoiseModel::Target::kDealer;
  } else if (site == "out") {
    n.target = NoiseModel::Target::kDecoded;
  } else {
    const int label = parse_nonneg_int(site, "share label");
    if (label < 1) throw Error(ErrorCode::kInvalidArgument, "share labels start at 1");
    n.share = static_cast<std::size_t>(label - 1);
  }
  if (intercept) {
    if (parts[2] != "random") n.eve_basis = parse_nonneg_int(parts[2], "basis");
    if (parts.size() == 4) n.intercept_p = parse_prob(parts[3]);
    if (n.target != NoiseModel::Target::kShare) {
      throw Error(ErrorCode::kInvalidArgument, "intercept-resend acts on a share line");
    }
  } else {
    n.p = parse_prob(parts[2]);
  }
  return n;
}

std::string to_string(const NoiseModel& noise) {
  if (!noise.active()) return "none";
  std::string site;
  switch (noise.target) {
    case NoiseModel::Target::kShare: site = std::to_string(noise.share + 1); break;
    case NoiseModel::Target::kDealer: site = "d"; break;
    case NoiseModel::Target::kDecoded: site = "out"; break;
  }
  switch (noise.kind) {
    case NoiseModel::Kind::kDepolarizing: return "depolarizing:" + site + ":" + fmt(noise.p);
    case NoiseModel::Kind::kErasure: return "erasure:" + site + ":" + fmt(noise.p);
    case NoiseModel::Kind::kInterceptResend: {
      std::string s = "intercept:" + site + ":" + (noise.eve_basis ? std::to_string(*noise.eve_basis) : "random");
      if (noise.intercept_p != 1.0) s += ":" + fmt(noise.intercept_p);
      return s;
    }
    case NoiseModel::Kind::kNone: break;
  }
  return "none";
}

// ---------------------------------------------------------------------------
// QQ

TeleportResult teleport_encode(const Scheme& s, const PureState& secret, CounterRng& rng) {
  if (!s.is_ideal()) throw Error(ErrorCode::kNonIdealScheme, "teleportation needs kappa = q");
  const int q = s.q();
  if (secret.shape().total_dim() != static_cast<std::size_t>(q)) {
    throw Error(ErrorCode::kDimensionMismatch, "secret dimension must equal q");
  }
  const Vector phi = max_entangled(q).amplitudes();  // index x * q + y
  const Vector& zeta = secret.amplitudes();
  const double cs_norm = 1.0 / std::sqrt(static_cast<double>(q));

  // Projecting (secret, d) onto the Bell vector (X^a Z^b x I)|Phi> leaves the
  // players holding E w_ab.
  std::vector<Vector> w(static_cast<std::size_t>(q * q));
  TeleportResult out{s.logical(0), 0, 0, {}};
  out.probabilities.resize(w.size());
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const Matrix op = weyl(q, a, b);
      Vector wab = Vector::Zero(q);
      for (int y = 0; y < q; ++y) {
        for (int x = 0; x < q; ++x) {
          cplx bell = 0.0;
          for (int xp = 0; xp < q; ++xp) bell += op(x, xp) * phi[xp * q + y];
          wab[y] += std::conj(bell) * zeta[x] * cs_norm;
        }
      }
      const std::size_t idx = static_cast<std::size_t>(a * q + b);
      out.probabilities[idx] = wab.squaredNorm();
      w[idx] = std::move(wab);
    }
  }
  const std::size_t pick = rng.categorical(out.probabilities);
  out.a = static_cast<int>(pick) / q;
  out.b = static_cast<int>(pick) % q;
  // Logical correction E X^a Z^b E^dagger.
  const Vector corrected = weyl(q, out.a, out.b) * w[pick];
  out.players = PureState::normalized(s.share_shape(), s.encoding() * corrected);
  return out;
}

QqResult qq_run(const Scheme& s, const Decoder& dec, const PureState& secret, CounterRng& rng) {
  const TeleportResult tel = teleport_encode(s, secret, rng);
  QqResult r;
  r.a = tel.a;
  r.b = tel.b;
  r.recovered = decode_secret(dec, tel.players.shape(), tel.players.span());
  r.fidelity = std::clamp(fidelity(secret.amplitudes(), r.recovered), 0.0, 1.0);
  return r;
}

QqResult qq_run(const Scheme& s, const Positions& players, const PureState& secret, CounterRng& rng) {
  return qq_run(s, synthesize_decoder(s, players), secret, rng);
}

PureState random_secret(int q, CounterRng& rng) {
  Vector v(q);
  for (int i = 0; i < q; ++i) {
    // Box-Muller pairs give i.i.d. complex Gaussians; normalising makes the
    // vector Haar distributed.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    v[i] = cplx(rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2));
  }
  return PureState::normalized(SystemShape({q}), std::move(v));
}

QqBatch qq_batch(const Scheme& s, const Positions& players, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one trial");
  const Decoder dec = synthesize_decoder(s, players);
  QqBatch out;
  out.scheme_name = s.name();
  out.players = dec.players;
  out.trials = trials;
  out.seed = seed;
  out.outcome_counts.assign(static_cast<std::size_t>(s.q() * s.q()), 0);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    CounterRng rng(seed, i);
    const PureState secret = random_secret(s.kappa(), rng);
    const QqResult r = qq_run(s, dec, secret, rng);
    out.min_fidelity = std::min(out.min_fidelity, r.fidelity);
    sum += r.fidelity;
    ++out.outcome_counts[static_cast<std::size_t>(r.a * s.q() + r.b)];
  }
  out.mean_fidelity = sum / static_cast<double>(trials);
  return out;
}

// ---------------------------------------------------------------------------
// RCQ

void SessionConfig::validate() const {
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one round");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error(ErrorCode::kInvalidArgument, "test_fraction must lie in (0, 1)");
  if (!(pa_output_rate > 0.0 && pa_output_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pa_output_rate must lie in (0, 1]");
  }
  if (!(abort_qber >= 0.0 && abort_qber <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "abort_qber must lie in [0, 1]");
}

RcqContext::RcqContext(const Scheme& s, const Positions& players) : scheme_(s), dec_(synthesize_decoder(s, players)) {
  init();
}

RcqContext::RcqContext(const Scheme& s, Decoder dec) : scheme_(s), dec_(std::move(dec)) { init(); }

void RcqContext::init() {
  if (!scheme_.is_ideal()) throw Error(ErrorCode::kNonIdealScheme, "RCQ rounds need kappa = q");
  const int q = scheme_.q();
  bases_ = scheme_bases(scheme_);
  const ChannelState cs = channel_state(scheme_);
  const Positions dealer{0};
  const Matrix rho_d = partial_trace(cs.purified, dealer).matrix();
  const SystemShape shape = scheme_.share_shape();
  for (int t : bases_) {
    mub_.push_back(mub_basis(q, t));
    std::vector<double> probs;
    std::vector<Matrix> decoded;
    for (int r = 0; r < q; ++r) {
      const Vector& v = mub_.back().vectors[static_cast<std::size_t>(r)];
      probs.push_back(std::max(0.0, (v.adjoint() * rho_d * v)(0, 0).real()));
      const PureState players = logical_basis_state(scheme_, t, r);
      decoded.push_back(decode_secret(dec_, shape, players.span()));
    }
    dealer_probs_.push_back(std::move(probs));
    decoded_.push_back(std::move(decoded));
  }
}

std::size_t RcqContext::basis_slot(int t) const {
  const auto it = std::find(bases_.begin(), bases_.end(), t);
  if (it == bases_.end()) throw Error(ErrorCode::kUnsupportedBasis, "basis t = " + std::to_string(t) + " unavailable");
  return static_cast<std::size_t>(it - bases_.begin());
}

const std::vector<double>& RcqContext::dealer_distribution(int t) const { return dealer_probs_[basis_slot(t)]; }

Matrix RcqContext::decoded_after_noise(PureState players, const NoiseModel& noise, CounterRng& rng) const {
  const int q = scheme_.q();
  const SystemShape shape = players.shape();
  Vector amps = players.amplitudes();
  std::span<cplx> view(amps.data(), static_cast<std::size_t>(amps.size()));
  const std::size_t pos = noise.share;
  switch (noise.kind) {
    case NoiseModel::Kind::kDepolarizing: {
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
      const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
      apply_local(shape, view, pos, weyl(q, a, b));
      break;
    }
    case NoiseModel::Kind::kErasure: {
      // Trace-and-replace: the share is lost and a fresh |0> takes its place.
      const std::vector<double> probs = local_probabilities(shape, view, pos);
      const std::size_t j = rng.categorical(probs);
      Matrix reset = Matrix::Zero(q, q);
      reset(0, static_cast<Eigen::Index>(j)) = 1.0;
      apply_local(shape, view, pos, reset);
      break;
    }
    case NoiseModel::Kind::kInterceptResend: {
      const std::vector<int> eve_bases = valid_bases(q);
      const int te = noise.eve_basis ? *noise.eve_basis
                                     : eve_bases[static_cast<std::size_t>(rng.below(eve_bases.size()))];
      const Matrix v = basis_matrix(mub_basis(q, te));
      apply_local(shape, view, pos, v.adjoint());
      const std::vector<double> probs = local_probabilities(shape, view, pos);
      const std::size_t e = rng.categorical(probs);
      Matrix proj = Matrix::Zero(q, q);
      proj(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(e)) = 1.0;
      apply_local(shape, view, pos, proj);
      apply_local(shape, view, pos, v);
      break;
    }
    case NoiseModel::Kind::kNone: break;
  }
  const PureState noisy = PureState::normalized(shape, std::move(amps));
  return decode_secret(dec_, shape, noisy.span());
}

RoundRecord RcqContext::round(std::uint64_t index, CounterRng& rng, const NoiseModel& noise) const {
  const int q = scheme_.q();
  if (noise.active() && noise.target == NoiseModel::Target::kShare) {
    if (!std::binary_search(scheme_.active().begin(), scheme_.active().end(), noise.share)) {
      throw Error(ErrorCode::kInvalidPositions, "noise share " + std::to_string(noise.share + 1) + " is not an active player");
    }
  }
  if (noise.kind == NoiseModel::Kind::kInterceptResend && noise.eve_basis) {
    const std::vector<int> vb = valid_bases(q);
    if (std::find(vb.begin(), vb.end(), *noise.eve_basis) == vb.end()) {
      throw Error(ErrorCode::kUnsupportedBasis, "eavesdropper basis unavailable");
    }
  }

  RoundRecord rec;
  rec.index = index;
  const std::size_t slot = static_cast<std::size_t>(rng.below(bases_.size()));
  rec.t = bases_[slot];
  const OrthonormalBasis& basis = mub_[slot];

  std::optional<Matrix> rho;
  if (noise.active() && noise.target == NoiseModel::Target::kDealer) {
    if (rng.uniform() < noise.p) {
      // The dealer's outcome vector u determines the players' state E conj(u).
      const SystemShape shape = scheme_.share_shape();
      if (noise.kind == NoiseModel::Kind::kDepolarizing) {
        const Matrix p = weyl(q, static_cast<int>(rng.below(q)), static_cast<int>(rng.below(q)));
        std::vector<double> probs;
        for (const Vector& v : basis.vectors) probs.push_back((p.adjoint() * v).squaredNorm() / q);  // rho_d = I / q
        rec.r = static_cast<int>(rng.categorical(probs));
        const Vector u = p.adjoint() * basis.vectors[static_cast<std::size_t>(rec.r)];
        const PureState players = PureState::normalized(shape, scheme_.encoding() * u.conjugate());
        rho = decode_secret(dec_, shape, players.span());
      } else {
        // d is measured in the computational basis and reset to |0>.
        const int j = static_cast<int>(rng.below(q));
        std::vector<double> probs;
        for (const Vector& v : basis.vectors) probs.push_back(std::norm(v[0]));
        rec.r = static_cast<int>(rng.categorical(probs));
        const PureState players = scheme_.logical(j);
        rho = decode_secret(dec_, shape, players.span());
      }
    } else {
      rec.r = static_cast<int>(rng.categorical(dealer_probs_[slot]));
    }
  } else {
    rec.r = static_cast<int>(rng.categorical(dealer_probs_[slot]));
    if (noise.active() && noise.target == NoiseModel::Target::kShare) {
      const double p = noise.kind == NoiseModel::Kind::kInterceptResend ? noise.intercept_p : noise.p;
      if (rng.uniform() < p) rho = decoded_after_noise(logical_basis_state(scheme_, rec.t, rec.r), noise, rng);
    }
  }
  if (!rho) rho = decoded_[slot][static_cast<std::size_t>(rec.r)];

  if (noise.active() && noise.target == NoiseModel::Target::kDecoded) {
    if (rng.uniform() < noise.p) {
      if (noise.kind == NoiseModel::Kind::kDepolarizing) {
        const Matrix p = weyl(q, static_cast<int>(rng.below(q)), static_cast<int>(rng.below(q)));
        rho = p * *rho * p.adjoint();
      } else {
        Matrix zero = Matrix::Zero(q, q);
        zero(0, 0) = 1.0;
        rho = zero;
      }
    }
  }

  const std::size_t slot_p = static_cast<std::size_t>(rng.below(bases_.size()));
  rec.t_prime = bases_[slot_p];
  // b' carries conj(|r(t)>), so the players read it out in the conjugate basis.
  std::vector<double> probs;
  for (const Vector& v : mub_[slot_p].vectors) {
    const Vector w = v.conjugate();
    probs.push_back(std::max(0.0, (w.adjoint() * *rho * w)(0, 0).real()));
  }
  rec.s = static_cast<int>(rng.categorical(probs));
  rec.sifted = rec.t == rec.t_prime;
  return rec;
}

RoundRecord rcq_round(const RcqContext& ctx, std::uint64_t index, CounterRng& rng, const NoiseModel& noise) {
  return ctx.round(index, rng, noise);
}

SessionTranscript rcq_session(const RcqContext& ctx, const SessionConfig& config) {
  config.validate();
  SessionTranscript tr;
  tr.scheme_name = ctx.scheme().name();
  tr.players = ctx.decoder().players;
  tr.q = ctx.scheme().q();
  tr.config = config;
  tr.rounds.reserve(config.m);
  for (std::uint64_t i = 0; i < config.m; ++i) {
    CounterRng rng(config.seed, i);
    RoundRecord rec = ctx.round(i, rng, config.noise);
    rec.test = rec.sifted && rng.uniform() < config.test_fraction;
    tr.rounds.push_back(rec);
  }
  for (const RoundRecord& rec : tr.rounds) {
    if (!rec.sifted) continue;
    ++tr.sift_count;
    tr.sifted_key_dealer.push_back(rec.r);
    tr.sifted_key_players.push_back(rec.s);
    if (rec.test) {
      ++tr.test_count;
      if (rec.r != rec.s) ++tr.test_errors;
    } else {
      tr.raw_key_dealer.push_back(rec.r);
      tr.raw_key_players.push_back(rec.s);
    }
  }
  if (tr.test_count == 0) {
    tr.aborted = true;
    tr.abort_reason = "no sifted rounds available for error estimation";
  } else {
    const double n = static_cast<double>(tr.test_count);
    tr.qber_estimate = static_cast<double>(tr.test_errors) / n;
    tr.qber_stderr = std::sqrt(tr.qber_estimate * (1.0 - tr.qber_estimate) / n);
    if (tr.qber_estimate > config.abort_qber) {
      tr.aborted = true;
      tr.abort_reason = "estimated QBER " + fmt(tr.qber_estimate) + " exceeds threshold " + fmt(config.abort_qber);
    }
  }
  if (!tr.raw_key_dealer.empty()) {
    std::size_t diff = 0;
    for (std::size_t i = 0; i < tr.raw_key_dealer.size(); ++i) diff += tr.raw_key_dealer[i] != tr.raw_key_players[i];
    tr.raw_key_disagreement = static_cast<double>(diff) / static_cast<double>(tr.raw_key_dealer.size());
  }
  if (!tr.aborted) {
    const std::size_t len = tr.raw_key_dealer.size();
    const auto out_len = static_cast<std::size_t>(std::floor(static_cast<double>(len) * config.pa_output_rate));
    const std::uint64_t pa_seed = splitmix64(config.seed ^ 0x70726976616d70ULL);
    tr.final_key = privacy_amplification(tr.raw_key_dealer, out_len, pa_seed, tr.q);
    tr.final_key_players = privacy_amplification(tr.raw_key_players, out_len, pa_seed, tr.q);
    tr.final_keys_match = tr.final_key == tr.final_key_players;
  }
  return tr;
}

SessionTranscript rcq_session(const Scheme& s, const Positions& players, const SessionConfig& config) {
  config.validate();
  return rcq_session(RcqContext(s, players), config);
}

std::string round_log(const SessionTranscript& tr) {
  std::ostringstream os;
  os << "# round t r t' s sifted\n";
  for (const RoundRecord& r : tr.rounds) {
    os << r.index << ' ' << r.t << ' ' << r.r << ' ' << r.t_prime << ' ' << r.s << ' ' << (r.sifted ? 1 : 0) << '\n';
  }
  os << "# summary\n";
  os << "# scheme=" << tr.scheme_name << " players=" << format_players(tr.players) << " q=" << tr.q << '\n';
  os << "# seed=" << tr.config.seed << " rounds=" << tr.config.m << " noise=" << to_string(tr.config.noise) << '\n';
  os << "# sifted=" << tr.sift_count << " test=" << tr.test_count << " test_errors=" << tr.test_errors
     << " qber=" << fmt(tr.qber_estimate) << '\n';
  os << "# aborted=" << (tr.aborted ? "true" : "false") << " final_key_length=" << tr.final_key.size() << '\n';
  return os.str();
}

}  // namespace qss

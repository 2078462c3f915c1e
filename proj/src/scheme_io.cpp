#include "qss/scheme_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qss/errors.hpp"

namespace qss {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

long long parse_int(const std::string& s, int line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParseError, "expected an integer, got '" + s + "'", line);
  }
  return v;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError, "expected a number, got '" + s + "'", line);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

struct Header {
  std::map<std::string, std::pair<std::string, int>> fields;  // value, line

  bool has(const std::string& key) const { return fields.count(key) != 0; }
  const std::string& value(const std::string& key) const { return fields.at(key).first; }
  int line(const std::string& key) const { return fields.at(key).second; }
  int require_int(const std::string& key, int last_line) const {
    if (!has(key)) throw Error(ErrorCode::kParseError, "missing header '" + key + "'", last_line);
    return static_cast<int>(parse_int(value(key), line(key)));
  }
};

}  // namespace

std::string scheme_to_string(const Scheme& s, SaveMode mode) {
  std::ostringstream os;
  os << "name=" << s.name() << "\n";
  os << "q=" << s.q() << "\n";
  os << "kappa=" << s.kappa() << "\n";
  os << "n=" << s.n_total() << "\n";
  if (!s.discarded().empty()) os << "discarded=" << format_players(s.discarded()) << "\n";
  if (s.claimed_ramp()) {
    const RampParams& r = *s.claimed_ramp();
    os << "claimed_ramp=" << r.k << "," << (r.k_prime ? std::to_string(*r.k_prime) : "?") << "," << r.n << "\n";
  }
  const Construction& c = s.construction();
  if (mode == SaveMode::kCompact && c.kind != Construction::Kind::kExplicit) {
    switch (c.kind) {
      case Construction::Kind::kGhz: os << "construction=ghz\n"; break;
      case Construction::Kind::kCgl23: os << "construction=cgl23\n"; break;
      case Construction::Kind::kFiveQubit: os << "construction=five_qubit\n"; break;
      case Construction::Kind::kReedSolomon: os << "construction=rs k=" << c.k << " q=" << s.q() << "\n"; break;
      case Construction::Kind::kExplicit: break;
    }
    return os.str();
  }
  os << "construction=explicit\n";
  for (int i = 0; i < s.kappa(); ++i) {
    os << "logical " << i << "\n";
    const auto col = s.encoding().col(i);
    for (Eigen::Index j = 0; j < col.size(); ++j) {
      if (col[j] != cplx(0.0, 0.0)) os << j << " " << format_double(col[j].real()) << " " << format_double(col[j].imag()) << "\n";
    }
  }
  return os.str();
}

Scheme scheme_from_string(std::string_view text) {
  Header header;
  std::vector<std::map<long long, std::pair<cplx, int>>> blocks;
  std::vector<int> block_ids;
  int line_no = 0;
  int current = -1;
  std::istringstream is{std::string(text)};
  std::string raw;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.rfind("logical", 0) == 0) {
      const std::string idx = trim(line.substr(7));
      current = static_cast<int>(parse_int(idx, line_no));
      for (int b : block_ids) {
        if (b == current) throw Error(ErrorCode::kParseError, "duplicate logical block " + idx, line_no);
      }
      block_ids.push_back(current);
      blocks.emplace_back();
      continue;
    }
    if (current < 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "expected key=value, got '" + line + "'", line_no);
      const std::string key = trim(line.substr(0, eq));
      if (header.has(key)) throw Error(ErrorCode::kParseError, "duplicate header '" + key + "'", line_no);
      header.fields[key] = {trim(line.substr(eq + 1)), line_no};
      continue;
    }
    std::istringstream ls(line);
    std::string a, b, c, extra;
    if (!(ls >> a >> b >> c) || (ls >> extra)) {
      throw Error(ErrorCode::kParseError, "expected 'basis_index re im', got '" + line + "'", line_no);
    }
    const long long index = parse_int(a, line_no);
    const cplx amp(parse_double(b, line_no), parse_double(c, line_no));
    auto& block = blocks.back();
    if (block.count(index)) throw Error(ErrorCode::kParseError, "repeated basis index " + a, line_no);
    block[index] = {amp, line_no};
  }

  if (!header.has("name")) throw Error(ErrorCode::kParseError, "missing header 'name'", line_no);
  const std::string name = header.value("name");
  const int q = header.require_int("q", line_no);
  const int kappa = header.require_int("kappa", line_no);
  const int n = header.require_int("n", line_no);
  if (q < 2 || kappa < 2 || n < 1) throw Error(ErrorCode::kParseError, "q, kappa must be >= 2 and n >= 1", header.line("q"));

  Positions discarded;
  if (header.has("discarded") && !header.value("discarded").empty()) {
    for (const std::string& tok : split(header.value("discarded"), ',')) {
      const long long p = parse_int(tok, header.line("discarded"));
      if (p < 1 || p > n) throw Error(ErrorCode::kParseError, "discarded share " + tok + " out of range", header.line("discarded"));
      discarded.push_back(static_cast<std::size_t>(p - 1));
    }
  }
  std::optional<RampParams> claimed;
  if (header.has("claimed_ramp")) {
    const auto parts = split(header.value("claimed_ramp"), ',');
    const int ln = header.line("claimed_ramp");
    if (parts.size() != 3) throw Error(ErrorCode::kParseError, "claimed_ramp needs k,k',n", ln);
    RampParams r;
    r.k = static_cast<int>(parse_int(parts[0], ln));
    if (parts[1] != "?") r.k_prime = static_cast<int>(parse_int(parts[1], ln));
    r.n = static_cast<int>(parse_int(parts[2], ln));
    claimed = r;
  }

  const std::string construction = header.has("construction") ? header.value("construction") : "explicit";
  const int cline = header.has("construction") ? header.line("construction") : line_no;
  std::optional<Scheme> built;
  std::istringstream cs(construction);
  std::string kind;
  cs >> kind;
  if (kind == "ghz") {
    built = ghz_scheme(n, q);
  } else if (kind == "cgl23") {
    built = cgl_qutrit_23();
  } else if (kind == "five_qubit") {
    built = five_qubit_35();
  } else if (kind == "rs") {
    std::map<std::string, int> args;
    std::string tok;
    while (cs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "bad rs argument '" + tok + "'", cline);
      args[tok.substr(0, eq)] = static_cast<int>(parse_int(tok.substr(eq + 1), cline));
    }
    if (!args.count("k") || !args.count("q")) throw Error(ErrorCode::kParseError, "rs needs k=... q=...", cline);
    built = reed_solomon_threshold(args["k"], args["q"]);
  } else if (kind != "explicit") {
    throw Error(ErrorCode::kParseError, "unknown construction '" + kind + "'", cline);
  }

  if (built) {
    if (!blocks.empty()) throw Error(ErrorCode::kParseError, "logical blocks only allowed with construction=explicit", cline);
    if (built->q() != q || built->kappa() != kappa || built->n_total() != n) {
      throw Error(ErrorCode::kParseError, "header q/kappa/n disagree with construction '" + kind + "'", cline);
    }
    return Scheme(name, q, kappa, n, built->encoding(), std::move(discarded),
                  claimed ? claimed : built->claimed_ramp(), built->construction());
  }

  if (static_cast<int>(blocks.size()) != kappa) {
    throw Error(ErrorCode::kParseError,
                "expected " + std::to_string(kappa) + " logical blocks, found " + std::to_string(blocks.size()), line_no);
  }
  const std::size_t dim = SystemShape(std::vector<int>(static_cast<std::size_t>(n), q)).total_dim();
  Matrix enc = Matrix::Zero(static_cast<Eigen::Index>(dim), kappa);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int col = block_ids[b];
    if (col < 0 || col >= kappa) throw Error(ErrorCode::kParseError, "logical index out of range", line_no);
    for (const auto& [index, entry] : blocks[b]) {
      if (index < 0 || static_cast<std::size_t>(index) >= dim) {
        throw Error(ErrorCode::kParseError, "basis index " + std::to_string(index) + " out of range", entry.second);
      }
      enc(static_cast<Eigen::Index>(index), col) = entry.first;
    }
  }
  return Scheme(name, q, kappa, n, std::move(enc), std::move(discarded), claimed, Construction{});
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) throw Error(ErrorCode::kInvalidArgument, "write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

void save_scheme(const Scheme& s, const std::filesystem::path& path, SaveMode mode) {
  write_text_atomic(path, scheme_to_string(s, mode));
}

Scheme load_scheme(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scheme_from_string(ss.str());
}

}  // namespace qss

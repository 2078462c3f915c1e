#pragma once
// Text scheme files.
//
//   # comment
//   name=cgl23
//   q=3
//   kappa=3
//   n=3
//   discarded=2,3              (optional, 1-based share labels)
//   claimed_ramp=2,1,3         (optional; use ? for an unknown k')
//   construction=ghz | cgl23 | five_qubit | rs k=2 q=5 | explicit
//   logical 0                  (explicit only: one block per logical state)
//   <basis_index> <re> <im>    (nonzero amplitudes, position 0 slowest)

#include <filesystem>
#include <string>
#include <string_view>

#include "qss/scheme.hpp"

namespace qss {

enum class SaveMode {
  kCompact,   // construction line when the scheme came from a builder
  kExplicit,  // always write amplitudes
};

std::string scheme_to_string(const Scheme& s, SaveMode mode = SaveMode::kCompact);
Scheme scheme_from_string(std::string_view text);

void save_scheme(const Scheme& s, const std::filesystem::path& path, SaveMode mode = SaveMode::kCompact);
Scheme load_scheme(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace qss

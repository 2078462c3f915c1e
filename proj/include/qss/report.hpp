#pragma once
// Machine-readable reports. Documents are nlohmann::ordered_json so key order
// (and therefore the serialised bytes) is fixed by construction order.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qss/access.hpp"
#include "qss/protocol.hpp"
#include "qss/qecc.hpp"
#include "qss/scheme.hpp"

namespace qss {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "0.3.0";

Json scheme_json(const Scheme& s);
Json access_json(const AccessReport& report);
Json qecc_json(const QeccReport& report);
Json qq_json(const QqBatch& batch);
/// Rounds are written to the separate round log, not the report.
Json transcript_json(const SessionTranscript& tr);

/// One line relating the QQ and RCQ access structures.
std::string relationship_summary(const AccessReport& report);

/// Header fields plus `body` merged in. `config` echoes the invocation.
Json make_document(const std::string& command, const Json& config, const Json& body);
/// Copy without the timestamp, for determinism comparisons.
Json without_timestamp(const Json& doc);

std::string dump_report(const Json& doc);
void write_report(const std::filesystem::path& path, const Json& doc);

}  // namespace qss

#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "catalyst/model.hpp"

namespace catalyst {

inline constexpr int kSnapshotFormatVersion = 1;

// ISO-8601 UTC with millisecond precision, e.g. "2026-10-16T08:03:00.123Z".
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view s);

// JSON shapes shared by snapshots and API responses.
nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const Concept& c, const SessionState& owner);
nlohmann::json to_json(const Edge& e);
nlohmann::json to_json(const Question& q);
nlohmann::json to_json(const QuestionGroup& g);
nlohmann::json to_json(const SessionState& s);

// Parses the `session` object of a snapshot. Throws Error(CorruptBlob) on any
// structural problem.
SessionState session_from_json(const nlohmann::json& j);

// Self-describing document: {"format_version": 1, "session": {...}}.
nlohmann::json snapshot_document(const SessionState& s);
std::string encode_snapshot(const SessionState& s);
// Throws CorruptBlob (unparseable, malformed, or violating invariants) or
// VersionMismatch (unknown format_version).
SessionState decode_snapshot(std::string_view blob);

}  // namespace catalyst

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vocabx/ensemble.hpp"
#include "vocabx/session.hpp"

namespace vocabx {

inline constexpr int kSnapshotFormatVersion = 1;

/// Persisted form of a session. Suggestions are not stored; they are
/// recomputed from the accepted and rejected sets on import.
struct SessionSnapshot {
  int format_version = kSnapshotFormatVersion;
  SessionParams params;
  std::vector<TermRecord> accepted;
  std::vector<TermRecord> rejected;

  friend bool operator==(const SessionSnapshot&, const SessionSnapshot&) = default;
};

SessionSnapshot export_snapshot(const Session& session);

/// Throws kUnsupportedVersion, kMalformedPayload or kUnknownModel.
Session import_snapshot(const SessionSnapshot& snapshot, const ModelRegistry& registry,
                        std::string id = {});

nlohmann::json snapshot_to_json(const SessionSnapshot& snapshot);
/// Throws Error(kMalformedPayload) / Error(kUnsupportedVersion).
SessionSnapshot snapshot_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const SessionParams& params);
/// Fields missing from `j` keep the value they have in `defaults`.
SessionParams params_from_json(const nlohmann::json& j, const SessionParams& defaults);

/// Display forms of the accepted terms, one per LF-terminated line.
std::string export_term_list(const Session& session);

/// Accepts every non-blank line of `text` into `session`, in order.
void accept_term_list(Session& session, std::string_view text);

Session import_term_list(std::string_view text, const SessionParams& params,
                         const ModelRegistry& registry);

/// Everything a client needs to render a session.
nlohmann::json session_view_json(const Session& session);

nlohmann::json suggestion_to_json(const Suggestion& s);

}  // namespace vocabx

#include "vocabx/snapshot.hpp"

#include "vocabx/error.hpp"
#include "vocabx/term.hpp"

namespace vocabx {

using nlohmann::json;

namespace {

json records_to_json(const std::vector<TermRecord>& records) {
  json out = json::array();
  for (const auto& r : records) out.push_back({{"term", r.term}, {"display", r.display}});
  return out;
}

std::vector<TermRecord> records_from_json(const json& j, const char* field) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kMalformedPayload, std::string("'") + field + "' must be an array");
  }
  std::vector<TermRecord> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("term") || !item["term"].is_string()) {
      throw Error(ErrorCode::kMalformedPayload,
                  std::string("entries of '") + field + "' need a string 'term'");
    }
    const auto& raw_term = item["term"].get_ref<const std::string&>();
    std::string display = raw_term;
    if (item.contains("display")) {
      if (!item["display"].is_string()) {
        throw Error(ErrorCode::kMalformedPayload, "'display' must be a string");
      }
      display = item["display"].get<std::string>();
    }
    try {
      out.push_back({normalize_term(raw_term), display_form(display)});
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedPayload, std::string(field) + ": " + e.what());
    }
  }
  return out;
}

template <typename T>
void read_number(const json& j, const char* key, T& value) {
  if (!j.contains(key)) return;
  const auto& v = j[key];
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw Error(ErrorCode::kInvalidParams, std::string("'") + key + "' must be a non-negative integer");
    }
    value = v.get<T>();
  } else {
    if (!v.is_number()) throw Error(ErrorCode::kInvalidParams, std::string("'") + key + "' must be a number");
    value = v.get<T>();
  }
}

}  // namespace

json params_to_json(const SessionParams& p) {
  return {{"k", p.k},
          {"lambda", p.lambda},
          {"display_threshold", p.display_threshold},
          {"graph_edge_threshold", p.graph_edge_threshold},
          {"per_anchor_display", p.per_anchor_display},
          {"model_ids", p.model_ids}};
}

SessionParams params_from_json(const json& j, const SessionParams& defaults) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidParams, "params must be an object");
  SessionParams p = defaults;
  read_number(j, "k", p.k);
  read_number(j, "lambda", p.lambda);
  read_number(j, "display_threshold", p.display_threshold);
  read_number(j, "graph_edge_threshold", p.graph_edge_threshold);
  read_number(j, "per_anchor_display", p.per_anchor_display);
  if (j.contains("model_ids")) {
    const auto& ids = j["model_ids"];
    if (!ids.is_array()) throw Error(ErrorCode::kInvalidParams, "'model_ids' must be an array");
    p.model_ids.clear();
    for (const auto& id : ids) {
      if (!id.is_string()) throw Error(ErrorCode::kInvalidParams, "model ids must be strings");
      p.model_ids.push_back(id.get<std::string>());
    }
  }
  return p;
}

SessionSnapshot export_snapshot(const Session& session) {
  return {kSnapshotFormatVersion, session.params(), session.accepted(), session.rejected()};
}

Session import_snapshot(const SessionSnapshot& snapshot, const ModelRegistry& registry,
                        std::string id) {
  if (snapshot.format_version != kSnapshotFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported snapshot format_version " + std::to_string(snapshot.format_version));
  }
  snapshot.params.validate();
  Session s(snapshot.params, registry.make_ensemble(snapshot.params.model_ids), std::move(id));
  s.reset(snapshot.accepted, snapshot.rejected);
  return s;
}

json snapshot_to_json(const SessionSnapshot& snap) {
  return {{"format_version", snap.format_version},
          {"params", params_to_json(snap.params)},
          {"accepted", records_to_json(snap.accepted)},
          {"rejected", records_to_json(snap.rejected)}};
}

SessionSnapshot snapshot_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedPayload, "snapshot must be a JSON object");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    throw Error(ErrorCode::kMalformedPayload, "snapshot needs an integer format_version");
  }
  SessionSnapshot snap;
  snap.format_version = j["format_version"].get<int>();
  if (snap.format_version != kSnapshotFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported snapshot format_version " + std::to_string(snap.format_version));
  }
  for (const char* key : {"params", "accepted", "rejected"}) {
    if (!j.contains(key)) {
      throw Error(ErrorCode::kMalformedPayload, std::string("snapshot is missing '") + key + "'");
    }
  }
  try {
    snap.params = params_from_json(j["params"], SessionParams{});
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedPayload, std::string("params: ") + e.what());
  }
  snap.accepted = records_from_json(j["accepted"], "accepted");
  snap.rejected = records_from_json(j["rejected"], "rejected");
  return snap;
}

std::string export_term_list(const Session& session) {
  std::string out;
  for (const auto& r : session.accepted()) {
    out += r.display;
    out += '\n';
  }
  return out;
}

void accept_term_list(Session& session, std::string_view text) {
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.find_first_not_of(" \t\r\f\v") == std::string_view::npos) continue;
    session.accept(line);
  }
}

Session import_term_list(std::string_view text, const SessionParams& params,
                         const ModelRegistry& registry) {
  Session s = new_session(params, registry);
  accept_term_list(s, text);
  return s;
}

json suggestion_to_json(const Suggestion& s) {
  return {{"term", s.term},
          {"display", s.display},
          {"score", s.score},
          {"anchor", s.anchor},
          {"below_threshold", s.below_threshold},
          {"contributions", s.contributions},
          {"sources", s.sources}};
}

json session_view_json(const Session& session) {
  json ranked = json::array();
  for (const auto& s : session.ranked_suggestions()) ranked.push_back(suggestion_to_json(s));

  json groups = json::array();
  for (const auto& g : session.list_view()) {
    json items = json::array();
    for (const auto& s : g.suggestions) items.push_back(suggestion_to_json(s));
    groups.push_back(
        {{"anchor", g.anchor.term}, {"display", g.anchor.display}, {"suggestions", items}});
  }

  const Graph graph = session.graph_view();
  json edges = json::array();
  for (const auto& e : graph.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});

  return {{"session_id", session.id()},
          {"params", params_to_json(session.params())},
          {"accepted", records_to_json(session.accepted())},
          {"rejected", records_to_json(session.rejected())},
          {"suggestions", ranked},
          {"list_view", groups},
          {"graph", {{"nodes", records_to_json(graph.nodes)}, {"edges", edges}}}};
}

}  // namespace vocabx

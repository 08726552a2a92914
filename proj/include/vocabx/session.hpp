#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vocabx/ensemble.hpp"

namespace vocabx {

struct SessionParams {
  std::size_t k = 10;  // neighbours fetched per model per accepted term
  double lambda = 0.5;
  double display_threshold = 0.3;
  double graph_edge_threshold = 0.25;
  std::size_t per_anchor_display = 3;
  std::vector<std::string> model_ids;

  /// Throws Error(kInvalidParams) when a numeric field is out of range or
  /// model_ids is empty. Id resolution is checked by the registry.
  void validate() const;

  friend bool operator==(const SessionParams&, const SessionParams&) = default;
};

struct TermRecord {
  std::string term;     // normalized key
  std::string display;  // form shown to the user

  friend bool operator==(const TermRecord&, const TermRecord&) = default;
};

struct Suggestion {
  std::string term;
  std::string display;
  double score = 0.0;
  std::string anchor;
  bool below_threshold = false;
  /// Averaged similarity to every accepted or rejected term where it is defined.
  std::map<std::string, double> contributions;
  /// Accepted terms whose neighbour fetch produced this suggestion, sorted.
  std::vector<std::string> sources;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

struct ListGroup {
  TermRecord anchor;
  std::vector<Suggestion> suggestions;

  friend bool operator==(const ListGroup&, const ListGroup&) = default;
};

struct GraphEdge {
  std::string a;  // a < b
  std::string b;
  double weight = 0.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct Graph {
  std::vector<TermRecord> nodes;
  std::vector<GraphEdge> edges;

  friend bool operator==(const Graph&, const Graph&) = default;
};

/// One user's vocabulary: accepted, rejected and suggested terms.
///
/// The suggestion set is derived state. After every mutation it is rebuilt
/// as the union, over accepted terms a, of each model's top-k neighbours of
/// a with every accepted and rejected term excluded, and every score,
/// anchor and threshold flag is recomputed. Rebuilding from the sets means
/// two sessions holding the same accepted and rejected sets are identical,
/// whatever order the operations arrived in.
///
/// Not thread-safe; callers serialize access to one session.
class Session {
 public:
  Session(SessionParams params, Ensemble ensemble, std::string id = {});

  const std::string& id() const noexcept { return id_; }
  const SessionParams& params() const noexcept { return params_; }
  const Ensemble& ensemble() const noexcept { return ensemble_; }

  const std::vector<TermRecord>& accepted() const noexcept { return accepted_; }
  const std::vector<TermRecord>& rejected() const noexcept { return rejected_; }
  const std::map<std::string, Suggestion>& suggestions() const noexcept { return suggestions_; }

  bool is_accepted(std::string_view term) const;
  bool is_rejected(std::string_view term) const;
  bool is_suggested(std::string_view term) const;

  /// Moves the term into the accepted set (from suggested or rejected).
  /// Accepting an already accepted term is a no-op.
  void accept(std::string_view raw);

  /// Moves the term into the rejected set. Throws Error(kConflict) if it is
  /// currently accepted.
  void reject(std::string_view raw);

  /// Undoes an accept: the result equals replaying the recorded history with
  /// that accept left out. Throws Error(kNotAccepted) if the term is not
  /// accepted.
  void remove_accepted(std::string_view raw);

  /// All suggestions, score descending then term ascending.
  std::vector<Suggestion> ranked_suggestions() const;

  /// One group per accepted term, in acceptance order, each holding at most
  /// per_anchor_display of the suggestions anchored there.
  std::vector<ListGroup> list_view() const;

  Graph graph_view() const;

  /// Replaces the accepted/rejected sets wholesale (snapshot import).
  void reset(std::vector<TermRecord> accepted, std::vector<TermRecord> rejected);

 private:
  struct HistoryEntry {
    bool accept = true;
    TermRecord record;
  };

  struct CachedNeighbors {
    std::size_t depth = 0;
    bool complete = false;
    std::vector<Neighbor> list;
  };

  static TermRecord resolve(std::string_view raw);
  void apply(const HistoryEntry& entry);
  void rebuild();
  std::vector<std::string> fetch(std::size_t model_index, const std::string& query,
                                 const std::unordered_set<std::string>& exclude);

  std::string id_;
  SessionParams params_;
  Ensemble ensemble_;
  std::vector<TermRecord> accepted_;
  std::vector<TermRecord> rejected_;
  std::map<std::string, Suggestion> suggestions_;
  std::vector<HistoryEntry> history_;
  // Unfiltered neighbour prefixes keyed by (model index, query).
  std::map<std::pair<std::size_t, std::string>, CachedNeighbors> neighbor_cache_;
};

/// Resolves params.model_ids against the registry and creates an empty session.
Session new_session(const SessionParams& params, const ModelRegistry& registry);

/// Random 128-bit hex identifier.
std::string make_session_id();

}  // namespace vocabx

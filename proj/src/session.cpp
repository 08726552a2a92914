#include "vocabx/session.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "vocabx/error.hpp"
#include "vocabx/term.hpp"

namespace vocabx {
namespace {

auto find_record(const std::vector<TermRecord>& records, std::string_view term) {
  return std::find_if(records.begin(), records.end(),
                      [&](const TermRecord& r) { return r.term == term; });
}

bool erase_record(std::vector<TermRecord>& records, std::string_view term) {
  auto it = find_record(records, term);
  if (it == records.end()) return false;
  records.erase(it);
  return true;
}

std::vector<std::string> sorted_keys(const std::vector<TermRecord>& records) {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.term);
  std::sort(out.begin(), out.end());
  return out;
}

bool suggestion_before(const Suggestion& a, const Suggestion& b) {
  return ranks_before(a.score, a.term, b.score, b.term);
}

}  // namespace

void SessionParams::validate() const {
  if (k < 1) throw Error(ErrorCode::kInvalidParams, "k must be >= 1");
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw Error(ErrorCode::kInvalidParams, "lambda must be a finite non-negative number");
  }
  if (!std::isfinite(display_threshold) || !std::isfinite(graph_edge_threshold)) {
    throw Error(ErrorCode::kInvalidParams, "thresholds must be finite");
  }
  if (per_anchor_display < 1) {
    throw Error(ErrorCode::kInvalidParams, "per_anchor_display must be >= 1");
  }
  if (model_ids.empty()) throw Error(ErrorCode::kInvalidParams, "model_ids must not be empty");
}

std::string make_session_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

Session::Session(SessionParams params, Ensemble ensemble, std::string id)
    : id_(id.empty() ? make_session_id() : std::move(id)),
      params_(std::move(params)),
      ensemble_(std::move(ensemble)) {
  params_.validate();
  if (params_.model_ids != ensemble_.ids()) {
    throw Error(ErrorCode::kUnknownModel, "ensemble does not match params.model_ids");
  }
}

Session new_session(const SessionParams& params, const ModelRegistry& registry) {
  params.validate();
  return Session(params, registry.make_ensemble(params.model_ids));
}

bool Session::is_accepted(std::string_view term) const {
  return find_record(accepted_, term) != accepted_.end();
}

bool Session::is_rejected(std::string_view term) const {
  return find_record(rejected_, term) != rejected_.end();
}

bool Session::is_suggested(std::string_view term) const {
  return suggestions_.find(std::string(term)) != suggestions_.end();
}

TermRecord Session::resolve(std::string_view raw) {
  TermRecord rec{normalize_term(raw), display_form(raw)};
  // Input already in key form (e.g. a clicked suggestion) reads better with spaces.
  if (rec.display == rec.term) rec.display = display_from_key(rec.term);
  return rec;
}

void Session::apply(const HistoryEntry& entry) {
  const auto& rec = entry.record;
  if (entry.accept) {
    erase_record(rejected_, rec.term);
    accepted_.push_back(rec);
  } else {
    rejected_.push_back(rec);
  }
}

void Session::accept(std::string_view raw) {
  TermRecord rec = resolve(raw);
  if (is_accepted(rec.term)) return;
  HistoryEntry entry{true, std::move(rec)};
  apply(entry);
  history_.push_back(std::move(entry));
  rebuild();
}

void Session::reject(std::string_view raw) {
  TermRecord rec = resolve(raw);
  if (is_accepted(rec.term)) {
    throw Error(ErrorCode::kConflict,
                "'" + rec.term + "' is accepted; remove it before rejecting");
  }
  if (is_rejected(rec.term)) return;
  HistoryEntry entry{false, std::move(rec)};
  apply(entry);
  history_.push_back(std::move(entry));
  rebuild();
}

void Session::remove_accepted(std::string_view raw) {
  const std::string term = normalize_term(raw);
  if (!is_accepted(term)) {
    throw Error(ErrorCode::kNotAccepted, "'" + term + "' is not an accepted term");
  }
  // A term stays accepted until removed, so its history holds exactly one
  // accept entry and nothing after it refers to the term.
  auto it = std::find_if(history_.begin(), history_.end(), [&](const HistoryEntry& e) {
    return e.accept && e.record.term == term;
  });
  history_.erase(it);
  accepted_.clear();
  rejected_.clear();
  for (const auto& entry : history_) apply(entry);
  rebuild();
}

void Session::reset(std::vector<TermRecord> accepted, std::vector<TermRecord> rejected) {
  std::set<std::string> seen;
  for (const auto* list : {&accepted, &rejected}) {
    for (const auto& r : *list) {
      if (r.term.empty() || !seen.insert(r.term).second) {
        throw Error(ErrorCode::kMalformedPayload,
                    "term '" + r.term + "' is empty or listed more than once");
      }
    }
  }
  history_.clear();
  for (auto& r : rejected) history_.push_back({false, std::move(r)});
  for (auto& r : accepted) history_.push_back({true, std::move(r)});
  accepted_.clear();
  rejected_.clear();
  for (const auto& entry : history_) apply(entry);
  rebuild();
}

std::vector<std::string> Session::fetch(std::size_t model_index, const std::string& query,
                                        const std::unordered_set<std::string>& exclude) {
  const auto& model = *ensemble_.models()[model_index];
  const std::size_t k = params_.k;
  auto& cached = neighbor_cache_[{model_index, query}];

  // The cache holds an exact prefix of the full ranking, so filtering it
  // gives the same answer as a fresh exclusion scan while it still yields k
  // terms. Refetching with depth k + |exclude| always suffices.
  auto take = [&](std::vector<std::string>& out) {
    out.clear();
    for (const auto& n : cached.list) {
      if (out.size() == k) break;
      if (!exclude.contains(n.term)) out.push_back(n.term);
    }
    return out.size() == k || cached.complete;
  };

  std::vector<std::string> out;
  if (cached.depth > 0 && take(out)) return out;
  cached.depth = std::max(cached.depth * 2, 2 * k + exclude.size());
  cached.list = model.top_k(query, cached.depth);
  cached.complete = cached.list.size() < cached.depth;
  take(out);
  return out;
}

void Session::rebuild() {
  std::unordered_set<std::string> exclude;
  for (const auto& r : accepted_) exclude.insert(r.term);
  for (const auto& r : rejected_) exclude.insert(r.term);

  std::map<std::string, std::set<std::string>> pool;
  for (const auto& a : accepted_) {
    for (std::size_t m = 0; m < ensemble_.models().size(); ++m) {
      for (auto& term : fetch(m, a.term, exclude)) pool[std::move(term)].insert(a.term);
    }
  }

  // Sorted iteration makes every sum independent of operation order.
  const auto accepted_keys = sorted_keys(accepted_);
  const auto rejected_keys = sorted_keys(rejected_);

  std::map<std::string, Suggestion> next;
  for (auto& [term, sources] : pool) {
    Suggestion s;
    s.term = term;
    s.display = display_from_key(term);
    s.sources.assign(sources.begin(), sources.end());

    double accepted_sum = 0.0;
    double best = 0.0;
    bool have_anchor = false;
    for (const auto& a : accepted_keys) {
      auto p = ensemble_.similarity(term, a);
      if (p) {
        s.contributions.emplace(a, *p);
        accepted_sum += *p;
      }
      const double value = p.value_or(0.0);
      // Strict > keeps the lexicographically smallest term on ties.
      if (!have_anchor || value > best) {
        best = value;
        s.anchor = a;
        have_anchor = true;
      }
    }
    double rejected_sum = 0.0;
    for (const auto& r : rejected_keys) {
      if (auto p = ensemble_.similarity(term, r)) {
        s.contributions.emplace(r, *p);
        rejected_sum += *p;
      }
    }
    s.score = accepted_sum - params_.lambda * rejected_sum;
    s.below_threshold = s.score < params_.display_threshold;
    next.emplace(term, std::move(s));
  }
  suggestions_ = std::move(next);
}

std::vector<Suggestion> Session::ranked_suggestions() const {
  std::vector<Suggestion> out;
  out.reserve(suggestions_.size());
  for (const auto& [_, s] : suggestions_) out.push_back(s);
  std::sort(out.begin(), out.end(), suggestion_before);
  return out;
}

std::vector<ListGroup> Session::list_view() const {
  std::vector<ListGroup> groups;
  std::map<std::string, std::size_t> slot;
  for (const auto& a : accepted_) {
    slot.emplace(a.term, groups.size());
    groups.push_back({a, {}});
  }
  for (auto& s : ranked_suggestions()) {
    auto& g = groups[slot.at(s.anchor)];
    if (g.suggestions.size() < params_.per_anchor_display) g.suggestions.push_back(std::move(s));
  }
  return groups;
}

Graph Session::graph_view() const {
  Graph g;
  g.nodes = accepted_;
  const auto keys = sorted_keys(accepted_);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      auto p = ensemble_.similarity(keys[i], keys[j]);
      if (p && *p >= params_.graph_edge_threshold) g.edges.push_back({keys[i], keys[j], *p});
    }
  }
  return g;
}

}  // namespace vocabx

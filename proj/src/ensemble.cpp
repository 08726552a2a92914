#include "vocabx/ensemble.hpp"

#include <algorithm>

#include "vocabx/error.hpp"

namespace vocabx {

Ensemble::Ensemble(std::vector<ModelPtr> models) : models_(std::move(models)) {
  if (models_.empty()) throw Error(ErrorCode::kInvalidParams, "ensemble needs at least one model");
  std::unordered_set<std::string> seen;
  for (const auto& m : models_) {
    if (!m) throw Error(ErrorCode::kInvalidParams, "null model in ensemble");
    if (!seen.insert(m->id()).second) {
      throw Error(ErrorCode::kInvalidParams, "duplicate model id '" + m->id() + "'");
    }
  }
}

std::vector<std::string> Ensemble::ids() const {
  std::vector<std::string> out;
  for (const auto& m : models_) out.push_back(m->id());
  return out;
}

std::optional<double> Ensemble::similarity(std::string_view a, std::string_view b) const {
  double sum = 0.0;
  int present = 0;
  for (const auto& m : models_) {
    if (auto s = m->similarity(a, b)) {
      sum += *s;
      ++present;
    }
  }
  if (present == 0) return std::nullopt;
  return sum / present;
}

std::optional<Candidate> Ensemble::score_candidate(std::string_view term,
                                                   std::string_view query) const {
  Candidate c{std::string(term), 0.0, {}};
  double sum = 0.0;
  int present = 0;
  for (const auto& m : models_) {
    auto s = m->similarity(term, query);
    c.per_model.emplace(m->id(), s);
    if (s) {
      sum += *s;
      ++present;
    }
  }
  if (present == 0) return std::nullopt;
  c.avg_similarity = sum / present;
  return c;
}

std::vector<Candidate> Ensemble::candidates(std::string_view query, std::size_t k,
                                            const std::unordered_set<std::string>& exclude) const {
  std::unordered_set<std::string> pooled;
  for (const auto& m : models_) {
    for (auto& n : m->top_k(query, k, exclude)) pooled.insert(std::move(n.term));
  }
  std::vector<Candidate> out;
  out.reserve(pooled.size());
  for (const auto& term : pooled) {
    // Defined: the term came from a model that also contains the query.
    out.push_back(*score_candidate(term, query));
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return ranks_before(a.avg_similarity, a.term, b.avg_similarity, b.term);
  });
  return out;
}

void ModelRegistry::add(ModelPtr model) {
  if (!model) throw Error(ErrorCode::kInvalidParams, "null model");
  if (find(model->id())) {
    throw Error(ErrorCode::kInvalidParams, "model id '" + model->id() + "' registered twice");
  }
  models_.push_back(std::move(model));
}

ModelPtr ModelRegistry::find(std::string_view id) const {
  for (const auto& m : models_) {
    if (m->id() == id) return m;
  }
  return nullptr;
}

std::vector<std::string> ModelRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& m : models_) out.push_back(m->id());
  return out;
}

Ensemble ModelRegistry::make_ensemble(const std::vector<std::string>& ids) const {
  if (ids.empty()) throw Error(ErrorCode::kInvalidParams, "model_ids must not be empty");
  std::vector<ModelPtr> picked;
  for (const auto& id : ids) {
    auto m = find(id);
    if (!m) throw Error(ErrorCode::kUnknownModel, "unknown model id '" + id + "'");
    picked.push_back(std::move(m));
  }
  return Ensemble(std::move(picked));
}

}  // namespace vocabx

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "vocabx/embedding_model.hpp"

namespace vocabx {

using ModelPtr = std::shared_ptr<const EmbeddingModel>;

/// A candidate term for a query together with its averaged similarity P and
/// the per-model cosines it was averaged from (nullopt where a model lacks
/// either term).
struct Candidate {
  std::string term;
  double avg_similarity = 0.0;
  std::map<std::string, std::optional<double>> per_model;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Non-empty, ordered set of models with unique ids. Cheap to copy; the
/// models themselves are shared and immutable.
class Ensemble {
 public:
  explicit Ensemble(std::vector<ModelPtr> models);

  const std::vector<ModelPtr>& models() const noexcept { return models_; }
  std::vector<std::string> ids() const;

  /// Mean of the per-model cosines over the models that contain both terms;
  /// nullopt when no model does.
  std::optional<double> similarity(std::string_view a, std::string_view b) const;

  /// Union of each model's top_k(query, k, exclude), each term scored by
  /// similarity(term, query) and sorted by (score desc, term asc).
  std::vector<Candidate> candidates(std::string_view query, std::size_t k,
                                    const std::unordered_set<std::string>& exclude = {}) const;

  /// Builds a Candidate for `term` against `query`; nullopt when P is undefined.
  std::optional<Candidate> score_candidate(std::string_view term, std::string_view query) const;

 private:
  std::vector<ModelPtr> models_;
};

/// Loaded models addressable by id.
class ModelRegistry {
 public:
  void add(ModelPtr model);
  ModelPtr find(std::string_view id) const;
  const std::vector<ModelPtr>& models() const noexcept { return models_; }
  std::vector<std::string> ids() const;

  /// Throws Error(kUnknownModel) for an unresolvable id and
  /// Error(kInvalidParams) for an empty or duplicated id list.
  Ensemble make_ensemble(const std::vector<std::string>& ids) const;

 private:
  std::vector<ModelPtr> models_;
};

}  // namespace vocabx

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace vocabx {

struct Neighbor {
  std::string term;
  double score = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Ordering used for every ranked list: score descending, then term ascending.
inline bool ranks_before(double score_a, std::string_view term_a, double score_b,
                         std::string_view term_b) {
  if (score_a != score_b) return score_a > score_b;
  return term_a < term_b;
}

struct LoadWarning {
  std::size_t line = 0;
  std::string message;
};

/// One word-embedding model. Vectors are unit-normalized at load so cosine
/// similarity is a plain dot product. Instances never change after
/// construction and may be shared freely between threads.
class EmbeddingModel {
 public:
  /// Rows are (term, vector) in file order. Terms are normalized; the first
  /// occurrence of a duplicate wins and zero vectors are dropped, both with
  /// a warning. Throws Error(kMalformedModel) on a dimension mismatch.
  static EmbeddingModel from_rows(std::string id, std::size_t dimension,
                                  std::vector<std::pair<std::string, std::vector<float>>> rows);

  const std::string& id() const noexcept { return id_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Terms in load order.
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  bool contains(std::string_view term) const { return find(term).has_value(); }

  /// Unit vector for `term`, or an empty span when out of vocabulary.
  std::span<const float> vector(std::string_view term) const;

  /// Cosine similarity of two normalized terms; nullopt if either is missing.
  std::optional<double> similarity(std::string_view a, std::string_view b) const;

  /// Up to k nearest terms to `query`, skipping the query itself and every
  /// member of `exclude`, ordered by ranks_before. Exact scan. An
  /// out-of-vocabulary query yields an empty list.
  std::vector<Neighbor> top_k(std::string_view query, std::size_t k,
                              const std::unordered_set<std::string>& exclude = {}) const;

  const std::vector<LoadWarning>& warnings() const noexcept { return warnings_; }

 private:
  std::optional<std::uint32_t> find(std::string_view term) const;
  std::span<const float> row(std::uint32_t index) const {
    return {values_.data() + static_cast<std::size_t>(index) * dimension_, dimension_};
  }

  std::string id_;
  std::size_t dimension_ = 0;
  std::vector<std::string> terms_;
  std::vector<float> values_;  // row-major, terms_.size() x dimension_
  std::unordered_map<std::string_view, std::uint32_t> index_;
  std::vector<LoadWarning> warnings_;

  EmbeddingModel() = default;
  friend EmbeddingModel load_model(const std::filesystem::path& path, std::string id);

 public:
  // index_ holds views into terms_; moves keep the strings in place.
  EmbeddingModel(const EmbeddingModel&) = delete;
  EmbeddingModel& operator=(const EmbeddingModel&) = delete;
  EmbeddingModel(EmbeddingModel&&) noexcept = default;
  EmbeddingModel& operator=(EmbeddingModel&&) noexcept = default;
};

/// Dot product accumulated in double, index order. Used by every similarity
/// computation so results are bit-reproducible and symmetric.
double dot(std::span<const float> a, std::span<const float> b);

/// Parses a word2vec text-format file ("<count> <dim>" header, then one
/// "term v1 .. vdim" row per line).
EmbeddingModel load_model(const std::filesystem::path& path, std::string id);

}  // namespace vocabx
